#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spe/extended_game.hpp"

namespace spe {

// λ^0: 0 where the owner has already visited his target set, +inf elsewhere.
// Under λ^0 every play is consistent.
Labeling initial_labeling(const ExtendedGame& x);

struct ConsistencyResult {
    bool ok = true;
    int index = -1;        // first violating position
    PlayerId player = -1;  // owner whose constraint fails there
};

// λ-consistency of a play: at every position, the owner's remaining cost is
// bounded by the label. Checking the stem plus one cycle pass is enough.
ConsistencyResult is_lambda_consistent(const ExtendedGame& x, const Labeling& lambda,
                                       const Lasso& ext);

struct UpdateResult {
    Labeling lambda;
    // Minimizing successor per updated vertex (-1 where not applicable),
    // ties broken toward the least (base id, visited set). Diagnostics only.
    std::vector<int> witness_succ;
};

// One synchronous update step of the suffix arena >= J_n (1-based n):
// owner in I gives 0, otherwise 1 + min over successors of the supremum cost
// of consistent plays; vertices outside the suffix keep their value.
UpdateResult update_labeling(const ExtendedGame& x, const RegionOrder& order,
                             const Labeling& lambda, int region_suffix);

struct FixpointStep {
    int k;        // step index; k = 0 is the initial labeling
    int region;   // suffix arena processed (0 for the initial step)
    bool changed;
    Labeling lambda;
    std::vector<int> witness_succ;
};

struct FixpointTrace {
    std::vector<FixpointStep> steps;   // every computed step, λ^0 first
    std::vector<int> local_fixpoint;   // [n-1] = k*_n per region, k*_N = 0

    int kstar() const { return local_fixpoint.empty() ? 0 : local_fixpoint.front(); }

    // Consecutive equal labelings merged (the Table-1 row view): each row is
    // the k-range sharing one labeling.
    struct Row {
        int first_k, last_k;
        const Labeling* lambda;
    };
    std::vector<Row> rows() const;
};

// Algorithm: process the regions bottom-up (J_N down to J_1), iterating the
// update on each suffix arena until it stabilizes. Returns the global
// fixpoint λ* and the full trace. Checks pointwise monotonicity and the
// maximal-finite-range bound at every step.
std::pair<Labeling, FixpointTrace> run_fixpoint(const ExtendedGame& x, const RegionOrder& order);

// Largest finite value of λ over a vertex set (0 if none).
uint32_t max_finite_range(const Labeling& lambda);
uint32_t max_finite_range_region(const Labeling& lambda, const RegionOrder& order, int n);
uint32_t max_finite_range_suffix(const Labeling& lambda, const RegionOrder& order, int n);

// |V|^((|V|+3)(|Π|+2)) with constant 1, saturating; mR may never exceed it.
uint64_t mr_theoretical_bound(int vertices, int players);

}  // namespace spe
