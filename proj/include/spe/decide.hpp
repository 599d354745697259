#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "spe/counter_graph.hpp"
#include "spe/labeling.hpp"
#include "spe/oracle_types.hpp"

namespace spe {

struct ConstraintQuery {
    CostProfile lower;
    CostProfile upper;
};

struct Decision {
    bool yes = false;
    std::string reason;       // set on NO
    Lasso witness_ext;        // normalized witness over the extended game
    Lasso witness_base;       // its projection on the arena
    CostProfile cost;
    CounterLasso witness_counter;  // uncompressed-level witness in C(λ*)
};

struct SpeOutcomeCheck {
    bool is_spe_outcome = false;
    ConsistencyResult detail;  // first violated constraint when not
};

/**
 * A synthesized SPE in finite-memory form: follow the primary outcome; when
 * the owner of the current vertex deviates into v', every player switches to
 * the punishment play assigned to (owner, v'), a λ*-consistent play from v'
 * that maximizes the deviator's cost.
 */
struct SpeProfile {
    struct Slot {
        PlayerId deviator;
        int target;   // extended vertex the deviation enters
        Lasso play;   // λ*-consistent lasso from target
    };

    Lasso primary;               // over the extended game, normalized
    std::vector<Slot> punishments;

    int slot_index(PlayerId deviator, int target) const;  // -1 if absent
    size_t memory_states() const;

    nlohmann::ordered_json to_json(const ExtendedGame& x) const;

    // Oracle adapter: memory is (assigned lasso, position).
    FiniteMemoryProfile as_finite_memory(const ExtendedGame& x) const;

    // Simulator: the profile's move after a finite history of arena vertices
    // starting at the initial vertex.
    int next_move(const ExtendedGame& x, std::span<const int> base_history) const;
};

/**
 * The full pipeline for one initialized game: extended game, region order,
 * and the labeling fixpoint, with the decision/synthesis queries on top.
 * The game must outlive the solver.
 */
class Solver {
public:
    Solver(const ReachabilityGame& g, int v0);

    const ReachabilityGame& game() const { return *g_; }
    const ExtendedGame& extended() const { return x_; }
    const RegionOrder& order() const { return order_; }
    const Labeling& lambda_star() const { return lambda_; }
    const FixpointTrace& trace() const { return trace_; }

    // Is there an SPE with cost profile c, x <= c <= y? Deterministic
    // memoized search in C(λ*) with step counts clamped past the largest
    // finite bound; on YES the canonical witness is returned.
    Decision decide(const ConstraintQuery& q) const;

    // Is the play an SPE outcome (λ*-consistent after lifting)?
    SpeOutcomeCheck check_outcome(const Lasso& base) const;

    // Prop.-style profile synthesis from a λ*-consistent outcome.
    SpeProfile build_profile(const Lasso& base) const;

private:
    const ReachabilityGame* g_;
    ExtendedGame x_;
    RegionOrder order_;
    Labeling lambda_;
    FixpointTrace trace_;
};

// One-shot conveniences matching the module operations.
Decision decide_constraint(const ReachabilityGame& g, int v0, const ConstraintQuery& q);
SpeOutcomeCheck spe_outcome_check(const ReachabilityGame& g, int v0, const Lasso& base);
SpeProfile build_spe_profile(const ReachabilityGame& g, int v0, const Lasso& base);

}  // namespace spe
