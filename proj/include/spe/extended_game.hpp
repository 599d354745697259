#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "spe/ext_cost.hpp"
#include "spe/game.hpp"

namespace spe {

using Labeling = std::vector<ExtCost>;  // indexed by extended vertex

/**
 * The extended game of a reachability game from an initial vertex: vertices
 * are pairs (v, I) where I is the set of players that have already visited
 * their target set. Edges follow the arena and accumulate I; player i's
 * target set becomes {(v, I) | i ∈ I}. Only the part reachable from
 * x0 = (v0, I0) is constructed; x0 is always index 0.
 *
 * Player sets are machine-word bit sets (player i <-> bit i-1), so games
 * with more than 64 players are rejected.
 */
class ExtendedGame {
public:
    ExtendedGame(const ReachabilityGame& g, int v0);

    const ReachabilityGame& game() const { return *game_; }
    int initial_vertex() const { return v0_; }

    int size() const { return static_cast<int>(base_.size()); }
    int x0() const { return 0; }
    int base(int x) const { return base_[x]; }
    uint64_t visited(int x) const { return visited_[x]; }
    PlayerId owner(int x) const { return game_->owner(base_[x]); }
    bool in_target(PlayerId i, int x) const { return (visited_[x] >> (i - 1)) & 1; }
    const std::vector<int>& successors(int x) const { return succ_[x]; }
    bool has_edge(int a, int b) const;

    // Stable external name "v@{i,j}".
    std::string name(int x) const;
    std::string set_name(uint64_t mask) const;  // "{i,j}"
    int find(const std::string& base_id, uint64_t visited) const;  // -1 if absent

    bool lasso_edge_valid(const Lasso& l) const;

private:
    const ReachabilityGame* game_;
    int v0_;
    std::vector<int> base_;
    std::vector<uint64_t> visited_;
    std::vector<std::vector<int>> succ_;
};

/**
 * The reachable player sets J_1 < J_2 < ... < J_N in a total order extending
 * reachability between regions: J < J' whenever some extended edge leads from
 * region J to region J'. Along edges I only grows, so sorting by
 * (|I|, lexicographic sorted player list) is such an extension; J_N is a
 * bottom region. Region indices are 1-based like the order.
 */
struct RegionOrder {
    std::vector<uint64_t> sets;                // sets[n-1] = J_n
    std::vector<std::vector<int>> members;     // members[n-1] = region vertices
    std::vector<int> region_of;                // per extended vertex, 1-based

    int count() const { return static_cast<int>(sets.size()); }
    int region(int x) const { return region_of[x]; }
    bool in_suffix(int x, int n) const { return region_of[x] >= n; }

    // Successor relation between region indices (1-based), for tests.
    std::vector<std::vector<int>> region_successors;
};

// reverse_tiebreak flips the lexicographic tie-break between same-size sets;
// any choice yields a linear extension of the region partial order.
RegionOrder region_order(const ExtendedGame& x, bool reverse_tiebreak = false);

// Lift a lasso of the arena (starting at v0) to the unique corresponding
// lasso of the extended game, in normal form. Costs are preserved.
Lasso lift_lasso(const ExtendedGame& x, const Lasso& base);

// Drop the visited component; returns the normal form of the projected play.
Lasso project_lasso(const ExtendedGame& x, const Lasso& ext);

// Per-player first-visit costs of an extended-game lasso (first position
// whose visited set contains the player).
CostProfile ext_cost_of_lasso(const ExtendedGame& x, const Lasso& ext);

// First position of the play whose visited set contains each player
// (ExtCost::inf() if never). Cheap helper used throughout.
std::vector<ExtCost> first_entries(const ExtendedGame& x, const Lasso& ext);

struct Section {
    int region;           // 1-based region index
    std::vector<int> vertices;
    bool infinite = false;  // last section of an infinite play
};

// Region decomposition of the play: consecutive (possibly empty) sections,
// one per region index between the first and last visited region.
std::vector<Section> region_decomposition(const ExtendedGame& x, const RegionOrder& order,
                                          const Lasso& ext);

// DOT export, one dashed cluster per region; λ values shown when given.
void write_extended_dot(std::ostream& os, const ExtendedGame& x, const RegionOrder& order,
                        const Labeling* lambda = nullptr);

}  // namespace spe
