#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "spe/extended_game.hpp"

namespace spe {

/**
 * A vertex of the counter graph: an extended vertex plus one deadline
 * counter per player. A finite counter c_i means player i must visit his
 * target within c_i steps for the tracked play to stay λ-consistent;
 * players already in the visited set carry counter 0.
 */
struct CounterVertex {
    int ext = -1;
    std::vector<ExtCost> counters;

    friend bool operator==(const CounterVertex&, const CounterVertex&) = default;
};

struct CounterVertexHash {
    size_t operator()(const CounterVertex& cv) const {
        size_t h = static_cast<size_t>(cv.ext) * 0x9e3779b97f4a7c15ull;
        for (ExtCost c : cv.counters) {
            size_t v = c.is_inf() ? SIZE_MAX : c.finite();
            h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

// A lasso over counter vertices (a valid infinite path once the cycle loops).
struct CounterLasso {
    std::vector<CounterVertex> stem;
    std::vector<CounterVertex> cycle;

    size_t length() const { return stem.size() + cycle.size(); }
};

/**
 * The counter graph C(λ) for an extended game, a labeling λ and a suffix
 * arena scope (vertices with region >= scope_region). The graph is a pure
 * description: successors are computed on demand and the full product is
 * never materialized. Edges exist between counter vertices iff the
 * underlying extended edge exists and no counter is forced through 0 while
 * its player stays outside the visited set; counters tick down by one per
 * step and tighten to λ(v') on the owner's vertices.
 */
class CounterGraph {
public:
    CounterGraph(const ExtendedGame& x, const RegionOrder& order, const Labeling& lambda,
                 int scope_region = 1);

    const ExtendedGame& extended() const { return *x_; }
    const RegionOrder& order() const { return *order_; }
    const Labeling& lambda() const { return *lambda_; }
    int scope_region() const { return scope_; }
    bool in_scope(int ext_v) const { return order_->in_suffix(ext_v, scope_); }

    // Maximal finite range of λ restricted to the scope; counters live in
    // {0..K} ∪ {+inf}. K never influences successor computation.
    uint32_t K() const { return k_; }

    // |V^X,scoped| * (K+2)^{|Π|}, saturating at uint64 max.
    uint64_t potential_size() const;

    CounterVertex starting_vertex(int ext_v) const;

    // Exactly the Def.-3.2 successors; empty means a dead end.
    std::vector<CounterVertex> successors(const CounterVertex& cv) const;

private:
    const ExtendedGame* x_;
    const RegionOrder* order_;
    const Labeling* lambda_;
    int scope_;
    uint32_t k_;
};

// The subset of vertices reachable from the roots from which an infinite
// path exists, in deterministic discovery order.
std::vector<CounterVertex> live_set(const CounterGraph& cg,
                                    const std::vector<CounterVertex>& roots);

struct SupResult {
    bool empty = false;        // Λ(v) = ∅: the starting vertex has no infinite path
    ExtCost value;             // max{Cost_i(ρ) | ρ ∈ Λ(v)} otherwise
    CounterLasso witness;      // valid lasso realizing the max, |stem·cycle| <= 2|C|
};

// Deterministic supremum of player i's cost over λ-consistent plays from v.
// +inf iff a cycle avoiding i's target region is reachable inside the live
// part; otherwise a longest-path query on the remaining DAG.
SupResult sup_cost(const CounterGraph& cg, int ext_v, PlayerId i);

// Projection of a valid counter path on the extended game (λ-consistent).
Lasso path_to_lasso_play(const CounterLasso& path);

// Deterministic counter tracking of a play; nullopt iff the play is not
// λ-consistent (the counters hit a dead end).
std::optional<CounterLasso> play_to_path(const CounterGraph& cg, const Lasso& ext);

// DOT export of the fragment reachable from the roots; live vertices only
// unless include_dead, dead ends drawn filled.
void write_counter_dot(std::ostream& os, const CounterGraph& cg,
                       const std::vector<CounterVertex>& roots, bool include_dead = true);

}  // namespace spe
