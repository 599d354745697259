#include "spe/extended_game.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <ostream>
#include <stdexcept>

namespace spe {

ExtendedGame::ExtendedGame(const ReachabilityGame& g, int v0) : game_(&g), v0_(v0) {
    if (v0 < 0 || v0 >= g.vertex_count()) throw std::invalid_argument("init vertex out of range");
    if (g.player_count() > 64)
        throw std::invalid_argument("games with more than 64 players are not supported");

    std::map<std::pair<int, uint64_t>, int> index;
    auto intern = [&](int v, uint64_t mask) {
        auto it = index.find({v, mask});
        if (it != index.end()) return it->second;
        int x = static_cast<int>(base_.size());
        index.emplace(std::make_pair(v, mask), x);
        base_.push_back(v);
        visited_.push_back(mask);
        succ_.emplace_back();
        return x;
    };

    uint64_t i0 = g.target_mask(v0);
    std::deque<int> queue{intern(v0, i0)};
    while (!queue.empty()) {
        int x = queue.front();
        queue.pop_front();
        int v = base_[x];
        uint64_t mask = visited_[x];
        for (int w : g.successors(v)) {
            uint64_t next = mask | g.target_mask(w);
            int before = static_cast<int>(base_.size());
            int y = intern(w, next);
            succ_[x].push_back(y);
            if (y == before) queue.push_back(y);
        }
    }
}

bool ExtendedGame::has_edge(int a, int b) const {
    const auto& s = succ_[a];
    return std::find(s.begin(), s.end(), b) != s.end();
}

std::string ExtendedGame::set_name(uint64_t mask) const {
    std::string out = "{";
    bool first = true;
    for (int i = 1; i <= game_->player_count(); ++i) {
        if ((mask >> (i - 1)) & 1) {
            if (!first) out += ",";
            out += std::to_string(i);
            first = false;
        }
    }
    return out + "}";
}

std::string ExtendedGame::name(int x) const {
    return game_->id(base_[x]) + "@" + set_name(visited_[x]);
}

int ExtendedGame::find(const std::string& base_id, uint64_t mask) const {
    auto v = game_->index_of(base_id);
    if (!v) return -1;
    for (int x = 0; x < size(); ++x)
        if (base_[x] == *v && visited_[x] == mask) return x;
    return -1;
}

bool ExtendedGame::lasso_edge_valid(const Lasso& l) const {
    if (l.cycle.empty()) return false;
    auto ok = [this](int a, int b) { return has_edge(a, b); };
    for (size_t i = 0; i + 1 < l.stem.size(); ++i)
        if (!ok(l.stem[i], l.stem[i + 1])) return false;
    if (!l.stem.empty() && !ok(l.stem.back(), l.cycle.front())) return false;
    for (size_t i = 0; i + 1 < l.cycle.size(); ++i)
        if (!ok(l.cycle[i], l.cycle[i + 1])) return false;
    return ok(l.cycle.back(), l.cycle.front());
}

namespace {

// Lexicographic order on the sorted player lists of two same-size sets.
bool lex_less(uint64_t a, uint64_t b) {
    while (a && b) {
        int pa = std::countr_zero(a);
        int pb = std::countr_zero(b);
        if (pa != pb) return pa < pb;
        a &= a - 1;
        b &= b - 1;
    }
    return a == 0 && b != 0;
}

}  // namespace

RegionOrder region_order(const ExtendedGame& x, bool reverse_tiebreak) {
    std::vector<uint64_t> sets;
    for (int v = 0; v < x.size(); ++v)
        if (std::find(sets.begin(), sets.end(), x.visited(v)) == sets.end())
            sets.push_back(x.visited(v));
    std::sort(sets.begin(), sets.end(), [reverse_tiebreak](uint64_t a, uint64_t b) {
        int ca = std::popcount(a), cb = std::popcount(b);
        if (ca != cb) return ca < cb;
        return reverse_tiebreak ? lex_less(b, a) : lex_less(a, b);
    });

    RegionOrder order;
    order.sets = sets;
    order.members.resize(sets.size());
    order.region_of.resize(static_cast<size_t>(x.size()));
    for (int v = 0; v < x.size(); ++v) {
        auto it = std::find(sets.begin(), sets.end(), x.visited(v));
        int n = static_cast<int>(it - sets.begin()) + 1;
        order.region_of[static_cast<size_t>(v)] = n;
        order.members[static_cast<size_t>(n - 1)].push_back(v);
    }
    order.region_successors.resize(sets.size());
    for (int v = 0; v < x.size(); ++v)
        for (int w : x.successors(v)) {
            int a = order.region_of[static_cast<size_t>(v)];
            int b = order.region_of[static_cast<size_t>(w)];
            auto& row = order.region_successors[static_cast<size_t>(a - 1)];
            if (std::find(row.begin(), row.end(), b) == row.end()) row.push_back(b);
        }
    return order;
}

Lasso lift_lasso(const ExtendedGame& x, const Lasso& base) {
    const ReachabilityGame& g = x.game();
    if (!spe::lasso_edge_valid(g, base))
        throw std::invalid_argument("lasso is not edge-valid in the arena");
    if (base.at(0) != x.initial_vertex())
        throw std::invalid_argument("lasso must start at the initial vertex");

    // Walk h then copies of g until the visited set repeats at a cycle start;
    // the set is monotone, so at most |Π|+1 copies are needed.
    std::vector<int> lifted;
    uint64_t mask = g.target_mask(base.at(0));
    int xv = x.find(g.id(base.at(0)), mask);
    lifted.push_back(xv);
    size_t pos = 0;
    uint64_t mask_at_copy_start = mask;
    size_t copy_start = 0;
    for (;;) {
        ++pos;
        int v = base.at(pos);
        mask |= g.target_mask(v);
        xv = x.find(g.id(v), mask);
        if (xv < 0) throw std::logic_error("lift: extended vertex not materialized");
        lifted.push_back(xv);
        if (pos >= base.stem.size() && (pos - base.stem.size()) % base.cycle.size() == 0) {
            if (copy_start >= base.stem.size() && mask == mask_at_copy_start) break;
            copy_start = pos;
            mask_at_copy_start = mask;
        }
    }
    Lasso out;
    out.stem.assign(lifted.begin(), lifted.begin() + static_cast<long>(copy_start));
    out.cycle.assign(lifted.begin() + static_cast<long>(copy_start), lifted.end() - 1);
    return normalized(out);
}

Lasso project_lasso(const ExtendedGame& x, const Lasso& ext) {
    Lasso out;
    out.stem.reserve(ext.stem.size());
    out.cycle.reserve(ext.cycle.size());
    for (int v : ext.stem) out.stem.push_back(x.base(v));
    for (int v : ext.cycle) out.cycle.push_back(x.base(v));
    return normalized(out);
}

std::vector<ExtCost> first_entries(const ExtendedGame& x, const Lasso& ext) {
    std::vector<ExtCost> fe(static_cast<size_t>(x.game().player_count()), ExtCost::inf());
    size_t horizon = ext.stem.size() + ext.cycle.size();
    for (size_t n = 0; n < horizon; ++n) {
        uint64_t mask = x.visited(ext.at(n));
        for (int i = 1; i <= x.game().player_count(); ++i)
            if (fe[static_cast<size_t>(i - 1)].is_inf() && ((mask >> (i - 1)) & 1))
                fe[static_cast<size_t>(i - 1)] = ExtCost(static_cast<uint32_t>(n));
    }
    return fe;
}

CostProfile ext_cost_of_lasso(const ExtendedGame& x, const Lasso& ext) {
    if (!x.lasso_edge_valid(ext))
        throw std::invalid_argument("lasso is not edge-valid in the extended game");
    return first_entries(x, ext);
}

std::vector<Section> region_decomposition(const ExtendedGame& x, const RegionOrder& order,
                                          const Lasso& ext) {
    if (!x.lasso_edge_valid(ext))
        throw std::invalid_argument("lasso is not edge-valid in the extended game");
    int first = order.region(ext.at(0));
    // the cycle sits in a single region (visited sets cannot shrink)
    int last = order.region(ext.cycle.front());
    std::vector<Section> sections;
    for (int n = first; n <= last; ++n) sections.push_back({n, {}, n == last});
    for (size_t p = 0; p < ext.stem.size(); ++p) {
        int n = order.region(ext.stem[p]);
        sections[static_cast<size_t>(n - first)].vertices.push_back(ext.stem[p]);
    }
    for (int v : ext.cycle) sections.back().vertices.push_back(v);
    return sections;
}

void write_extended_dot(std::ostream& os, const ExtendedGame& x, const RegionOrder& order,
                        const Labeling* lambda) {
    os << "digraph extended {\n  rankdir=LR;\n  node [shape=box];\n";
    for (int n = 1; n <= order.count(); ++n) {
        os << "  subgraph cluster_region" << n << " {\n"
           << "    style=dashed;\n"
           << "    label=\"" << x.set_name(order.sets[static_cast<size_t>(n - 1)]) << "\";\n";
        for (int v : order.members[static_cast<size_t>(n - 1)]) {
            os << "    \"" << x.name(v) << "\" [label=\"" << x.game().id(x.base(v)) << ", "
               << x.set_name(x.visited(v));
            if (lambda) os << "\\n" << (*lambda)[static_cast<size_t>(v)].str();
            os << "\"];\n";
        }
        os << "  }\n";
    }
    for (int v = 0; v < x.size(); ++v)
        for (int w : x.successors(v))
            os << "  \"" << x.name(v) << "\" -> \"" << x.name(w) << "\";\n";
    os << "}\n";
}

}  // namespace spe
