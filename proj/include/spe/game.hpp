#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "spe/ext_cost.hpp"

namespace spe {

// Players are numbered 1..n.
using PlayerId = int;

/**
 * An ultimately periodic play h·g^ω: a finite stem h (possibly empty)
 * followed by a nonempty cycle g repeated forever. Vertices are dense
 * indices into whatever graph the lasso lives in (arena, extended game).
 */
struct Lasso {
    std::vector<int> stem;
    std::vector<int> cycle;

    size_t length() const { return stem.size() + cycle.size(); }

    // Vertex at play position n (n may point past the stem into the cycle).
    int at(size_t n) const {
        if (n < stem.size()) return stem[n];
        return cycle[(n - stem.size()) % cycle.size()];
    }

    friend bool operator==(const Lasso&, const Lasso&) = default;
    friend auto operator<=>(const Lasso&, const Lasso&) = default;
};

// The suffix play from position n, folded into the cycle when n >= |stem|.
Lasso suffix_lasso(const Lasso& l, size_t n);

// Canonical representation of the play h·g^ω: primitive cycle, minimal stem.
// Two lassos denote the same infinite play iff their normal forms are equal.
Lasso normalized(const Lasso& l);

/**
 * A quantitative reachability game: a finite arena whose vertices are
 * partitioned among n players, plus one target set per player. Each player's
 * cost of a play is the index of the first visit to his target set (+inf if
 * none) and every player minimizes his own cost.
 *
 * Vertex ids are strings externally and interned to dense indices in
 * declaration order; all iteration is in declaration order.
 */
class ReachabilityGame {
public:
    explicit ReachabilityGame(int players);

    // Construction (throws std::invalid_argument on undeclared/duplicate names).
    int add_vertex(const std::string& id, PlayerId owner);
    void add_edge(int from, int to);
    void add_target(PlayerId i, int v);
    void set_init(int v);

    // File format: {"players": n, "vertices": [{"id","owner"}], "edges": [[a,b]],
    // "targets": {"1": [...]}, "init": "v"}.
    static ReachabilityGame from_json(const nlohmann::json& j);
    static ReachabilityGame parse(const std::string& text);
    static ReachabilityGame load(const std::string& path);
    nlohmann::ordered_json to_json() const;
    std::string to_canonical_string() const;  // byte-stable for canonical input

    int player_count() const { return players_; }
    int vertex_count() const { return static_cast<int>(ids_.size()); }
    const std::string& id(int v) const { return ids_[v]; }
    std::optional<int> index_of(const std::string& id) const;
    int require_vertex(const std::string& id) const;
    PlayerId owner(int v) const { return owners_[v]; }
    const std::vector<int>& successors(int v) const { return succ_[v]; }
    bool has_edge(int from, int to) const;
    bool in_target(PlayerId i, int v) const { return targets_[i - 1][v]; }
    std::vector<int> target_vertices(PlayerId i) const;
    std::optional<int> init() const { return init_; }

    // Bit mask over players (bit i-1) whose target set contains v.
    uint64_t target_mask(int v) const;

private:
    int players_;
    std::vector<std::string> ids_;
    std::vector<PlayerId> owners_;
    std::vector<std::vector<int>> succ_;        // declaration order
    std::vector<std::pair<int, int>> edges_;    // declaration order
    std::vector<std::vector<bool>> targets_;    // [player-1][vertex]
    std::optional<int> init_;

    friend nlohmann::ordered_json game_to_json(const ReachabilityGame&);
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;
};

// Checks the arena conditions: every vertex has a successor, |V| >= 2,
// 1 <= |Π| <= |V|, owners in range, players <= 64 (bit-set limit).
ValidationReport validate_game(const ReachabilityGame& g);

// True iff consecutive vertices (stem, stem->cycle, cycle, cycle wrap) are edges.
bool lasso_edge_valid(const ReachabilityGame& g, const Lasso& l);

// Per-player first-visit costs of the play h·g^ω; throws if not edge-valid.
CostProfile cost_of_lasso(const ReachabilityGame& g, const Lasso& l);

// Costs of the suffix play from position n.
CostProfile suffix_cost(const ReachabilityGame& g, const Lasso& l, size_t n);

// Parse "v0 v1 | v2 v3" or "v0,v1|v2,v3" into a lasso over g's vertices.
Lasso parse_lasso(const ReachabilityGame& g, const std::string& text);

}  // namespace spe
