#include "spe/counter_graph.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace spe {

namespace {

uint32_t scoped_max_finite(const Labeling& lambda, const RegionOrder& order, int scope) {
    uint32_t k = 0;
    for (size_t v = 0; v < lambda.size(); ++v)
        if (order.in_suffix(static_cast<int>(v), scope) && !lambda[v].is_inf())
            k = std::max(k, lambda[v].finite());
    return k;
}

}  // namespace

CounterGraph::CounterGraph(const ExtendedGame& x, const RegionOrder& order,
                           const Labeling& lambda, int scope_region)
    : x_(&x), order_(&order), lambda_(&lambda), scope_(scope_region) {
    if (lambda.size() != static_cast<size_t>(x.size()))
        throw std::invalid_argument("labeling size does not match the extended game");
    k_ = scoped_max_finite(lambda, order, scope_);
}

uint64_t CounterGraph::potential_size() const {
    uint64_t scoped = 0;
    for (int v = 0; v < x_->size(); ++v)
        if (in_scope(v)) ++scoped;
    uint64_t size = scoped;
    uint64_t base = static_cast<uint64_t>(k_) + 2;
    for (int i = 0; i < x_->game().player_count(); ++i) {
        if (size != 0 && base > UINT64_MAX / size) return UINT64_MAX;
        size *= base;
    }
    return size;
}

CounterVertex CounterGraph::starting_vertex(int ext_v) const {
    if (!in_scope(ext_v)) throw std::invalid_argument("starting vertex outside scope");
    int players = x_->game().player_count();
    CounterVertex cv;
    cv.ext = ext_v;
    cv.counters.resize(static_cast<size_t>(players), ExtCost::inf());
    for (PlayerId i = 1; i <= players; ++i) {
        if (x_->in_target(i, ext_v))
            cv.counters[static_cast<size_t>(i - 1)] = ExtCost(0);
        else if (x_->owner(ext_v) == i)
            cv.counters[static_cast<size_t>(i - 1)] = (*lambda_)[static_cast<size_t>(ext_v)];
    }
    return cv;
}

std::vector<CounterVertex> CounterGraph::successors(const CounterVertex& cv) const {
    int players = x_->game().player_count();
    std::vector<CounterVertex> out;
    for (int w : x_->successors(cv.ext)) {
        assert(in_scope(w));  // suffix arenas are closed under edges
        bool blocked = false;
        for (PlayerId i = 1; i <= players && !blocked; ++i) {
            ExtCost c = cv.counters[static_cast<size_t>(i - 1)];
            if (!c.is_inf() && c.finite() == 1 && !x_->in_target(i, w)) blocked = true;
        }
        if (blocked) continue;
        CounterVertex next;
        next.ext = w;
        next.counters.resize(static_cast<size_t>(players));
        for (PlayerId i = 1; i <= players; ++i) {
            ExtCost c = cv.counters[static_cast<size_t>(i - 1)];
            ExtCost& nc = next.counters[static_cast<size_t>(i - 1)];
            if (x_->in_target(i, w)) {
                nc = ExtCost(0);
            } else if (x_->owner(w) == i) {
                nc = min(c.minus_one(), (*lambda_)[static_cast<size_t>(w)]);
            } else {
                nc = c.minus_one();
            }
            // c_i = 0 with i outside the visited set never arises from
            // starting vertices; λ(w) = 0 would force owner(w) into I(w).
            assert(!(nc == ExtCost(0)) || x_->in_target(i, w));
        }
        out.push_back(std::move(next));
    }
    return out;
}

namespace {

// Dense exploration of the part of the counter graph reachable from a set of
// roots, with per-vertex liveness (existence of an infinite path). All
// adjacency is stored in discovery order so queries are deterministic.
struct Explorer {
    const CounterGraph& cg;
    std::vector<CounterVertex> nodes;
    std::unordered_map<CounterVertex, int, CounterVertexHash> index;
    std::vector<std::vector<int>> succ;
    std::vector<char> live;

    explicit Explorer(const CounterGraph& graph) : cg(graph) {}

    int intern(const CounterVertex& cv) {
        auto it = index.find(cv);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(nodes.size());
        index.emplace(cv, id);
        nodes.push_back(cv);
        return id;
    }

    void explore(const std::vector<CounterVertex>& roots) {
        std::deque<int> queue;
        for (const auto& r : roots) {
            int before = static_cast<int>(nodes.size());
            int id = intern(r);
            if (id == before) queue.push_back(id);
        }
        while (!queue.empty()) {
            int id = queue.front();
            queue.pop_front();
            if (static_cast<size_t>(id) >= succ.size()) succ.resize(static_cast<size_t>(id) + 1);
            for (const auto& nxt : cg.successors(nodes[static_cast<size_t>(id)])) {
                int before = static_cast<int>(nodes.size());
                int nid = intern(nxt);
                succ[static_cast<size_t>(id)].push_back(nid);
                if (nid == before) queue.push_back(nid);
            }
        }
        succ.resize(nodes.size());
        prune();
    }

    // Greatest fixpoint: repeatedly discard vertices all of whose successors
    // are discarded; what survives has an infinite path.
    void prune() {
        size_t n = nodes.size();
        std::vector<std::vector<int>> preds(n);
        std::vector<int> out_count(n, 0);
        for (size_t v = 0; v < n; ++v) {
            out_count[v] = static_cast<int>(succ[v].size());
            for (int w : succ[v]) preds[static_cast<size_t>(w)].push_back(static_cast<int>(v));
        }
        live.assign(n, 1);
        std::deque<int> dead;
        for (size_t v = 0; v < n; ++v)
            if (out_count[v] == 0) {
                live[v] = 0;
                dead.push_back(static_cast<int>(v));
            }
        while (!dead.empty()) {
            int v = dead.front();
            dead.pop_front();
            for (int p : preds[static_cast<size_t>(v)]) {
                if (!live[static_cast<size_t>(p)]) continue;
                if (--out_count[static_cast<size_t>(p)] == 0) {
                    live[static_cast<size_t>(p)] = 0;
                    dead.push_back(p);
                }
            }
        }
    }

    std::vector<int> live_successors(int v) const {
        std::vector<int> out;
        for (int w : succ[static_cast<size_t>(v)])
            if (live[static_cast<size_t>(w)]) out.push_back(w);
        return out;
    }

    // Follow the first live successor until a vertex repeats.
    CounterLasso walk_to_lasso(int from) const {
        std::vector<int> path;
        std::unordered_map<int, size_t> seen;
        int cur = from;
        while (!seen.count(cur)) {
            seen[cur] = path.size();
            path.push_back(cur);
            auto ls = live_successors(cur);
            assert(!ls.empty());
            cur = ls.front();
        }
        size_t split = seen[cur];
        CounterLasso out;
        for (size_t i = 0; i < split; ++i) out.stem.push_back(nodes[static_cast<size_t>(path[i])]);
        for (size_t i = split; i < path.size(); ++i)
            out.cycle.push_back(nodes[static_cast<size_t>(path[i])]);
        return out;
    }
};

}  // namespace

std::vector<CounterVertex> live_set(const CounterGraph& cg,
                                    const std::vector<CounterVertex>& roots) {
    Explorer ex(cg);
    ex.explore(roots);
    std::vector<CounterVertex> out;
    for (size_t v = 0; v < ex.nodes.size(); ++v)
        if (ex.live[v]) out.push_back(ex.nodes[v]);
    return out;
}

SupResult sup_cost(const CounterGraph& cg, int ext_v, PlayerId i) {
    const ExtendedGame& x = cg.extended();
    Explorer ex(cg);
    CounterVertex root = cg.starting_vertex(ext_v);
    ex.explore({root});
    int root_id = ex.index.at(root);

    SupResult res;
    if (!ex.live[static_cast<size_t>(root_id)]) {
        res.empty = true;
        return res;
    }

    if (x.in_target(i, ext_v)) {
        res.value = ExtCost(0);
        res.witness = ex.walk_to_lasso(root_id);
        return res;
    }

    auto avoids = [&](int id) { return !x.in_target(i, ex.nodes[static_cast<size_t>(id)].ext); };

    // DFS inside the live i-avoiding fragment; a back edge closes a cycle on
    // which i never reaches his target, so the supremum is infinite.
    {
        std::vector<char> on_stack(ex.nodes.size(), 0), done(ex.nodes.size(), 0);
        std::vector<int> stack;
        // frames: (vertex, next successor position)
        std::vector<std::pair<int, size_t>> frames;
        frames.push_back({root_id, 0});
        on_stack[static_cast<size_t>(root_id)] = 1;
        stack.push_back(root_id);
        while (!frames.empty()) {
            auto& [v, pos] = frames.back();
            auto ls = ex.live_successors(v);
            bool descended = false;
            while (pos < ls.size()) {
                int w = ls[pos++];
                if (!avoids(w)) continue;
                if (on_stack[static_cast<size_t>(w)]) {
                    // cycle found: stack suffix from w
                    auto it = std::find(stack.begin(), stack.end(), w);
                    res.value = ExtCost::inf();
                    for (auto p = stack.begin(); p != it; ++p)
                        res.witness.stem.push_back(ex.nodes[static_cast<size_t>(*p)]);
                    for (auto p = it; p != stack.end(); ++p)
                        res.witness.cycle.push_back(ex.nodes[static_cast<size_t>(*p)]);
                    return res;
                }
                if (done[static_cast<size_t>(w)]) continue;
                frames.push_back({w, 0});
                on_stack[static_cast<size_t>(w)] = 1;
                stack.push_back(w);
                descended = true;
                break;
            }
            if (!descended && pos >= ls.size()) {
                done[static_cast<size_t>(v)] = 1;
                on_stack[static_cast<size_t>(v)] = 0;
                stack.pop_back();
                frames.pop_back();
            }
        }
    }

    // No i-avoiding cycle: the reachable i-avoiding live fragment is a DAG;
    // the maximum cost is the longest path to a first vertex with i in I.
    std::vector<int> order_ids;
    {
        // Kahn on the i-avoiding live fragment reachable from the root
        std::unordered_map<int, int> indeg;
        std::deque<int> bfs{root_id};
        indeg[root_id] = 0;
        std::vector<int> seen{root_id};
        std::vector<char> visited(ex.nodes.size(), 0);
        visited[static_cast<size_t>(root_id)] = 1;
        while (!bfs.empty()) {
            int v = bfs.front();
            bfs.pop_front();
            for (int w : ex.live_successors(v)) {
                if (!avoids(w)) continue;
                ++indeg[w];
                if (!visited[static_cast<size_t>(w)]) {
                    visited[static_cast<size_t>(w)] = 1;
                    seen.push_back(w);
                    bfs.push_back(w);
                }
            }
        }
        std::deque<int> ready;
        for (int v : seen)
            if (indeg[v] == 0) ready.push_back(v);
        while (!ready.empty()) {
            int v = ready.front();
            ready.pop_front();
            order_ids.push_back(v);
            for (int w : ex.live_successors(v)) {
                if (!avoids(w)) continue;
                if (--indeg[w] == 0) ready.push_back(w);
            }
        }
        assert(order_ids.size() == seen.size());
    }

    std::unordered_map<int, int> dist, parent;
    dist[root_id] = 0;
    parent[root_id] = -1;
    int best = -1, best_exit_from = -1, best_exit_to = -1;
    for (int v : order_ids) {
        auto dit = dist.find(v);
        if (dit == dist.end()) continue;  // not reachable from the root
        int dv = dit->second;
        for (int w : ex.live_successors(v)) {
            if (avoids(w)) {
                auto wit = dist.find(w);
                if (wit == dist.end() || wit->second < dv + 1) {
                    dist[w] = dv + 1;
                    parent[w] = v;
                }
            } else if (dv + 1 > best) {
                best = dv + 1;
                best_exit_from = v;
                best_exit_to = w;
            }
        }
    }
    // A live i-avoiding acyclic fragment must eventually exit into i's region.
    assert(best >= 1);
    res.value = ExtCost(static_cast<uint32_t>(best));

    std::vector<int> prefix;
    for (int v = best_exit_from; v != -1; v = parent.at(v)) prefix.push_back(v);
    std::reverse(prefix.begin(), prefix.end());
    CounterLasso tail = ex.walk_to_lasso(best_exit_to);
    for (int v : prefix) res.witness.stem.push_back(ex.nodes[static_cast<size_t>(v)]);
    for (auto& cv : tail.stem) res.witness.stem.push_back(std::move(cv));
    res.witness.cycle = std::move(tail.cycle);
    return res;
}

Lasso path_to_lasso_play(const CounterLasso& path) {
    Lasso out;
    out.stem.reserve(path.stem.size());
    out.cycle.reserve(path.cycle.size());
    for (const auto& cv : path.stem) out.stem.push_back(cv.ext);
    for (const auto& cv : path.cycle) out.cycle.push_back(cv.ext);
    return out;
}

std::optional<CounterLasso> play_to_path(const CounterGraph& cg, const Lasso& ext) {
    if (!cg.extended().lasso_edge_valid(ext))
        throw std::invalid_argument("lasso is not edge-valid in the extended game");
    CounterVertex cur = cg.starting_vertex(ext.at(0));
    std::vector<CounterVertex> trail{cur};
    // states repeat at a fixed cycle phase; remember (phase, counters)
    std::unordered_map<CounterVertex, size_t, CounterVertexHash> seen_at_phase0;
    size_t pos = 0;
    for (;;) {
        if (pos >= ext.stem.size() && (pos - ext.stem.size()) % ext.cycle.size() == 0) {
            auto it = seen_at_phase0.find(cur);
            if (it != seen_at_phase0.end()) {
                CounterLasso out;
                out.stem.assign(trail.begin(), trail.begin() + static_cast<long>(it->second));
                out.cycle.assign(trail.begin() + static_cast<long>(it->second), trail.end() - 1);
                return out;
            }
            seen_at_phase0.emplace(cur, pos);
        }
        int next_ext = ext.at(pos + 1);
        bool found = false;
        for (auto& nxt : cg.successors(cur)) {
            if (nxt.ext == next_ext) {
                cur = std::move(nxt);
                found = true;
                break;
            }
        }
        if (!found) return std::nullopt;  // counters hit a dead end: not λ-consistent
        trail.push_back(cur);
        ++pos;
    }
}

void write_counter_dot(std::ostream& os, const CounterGraph& cg,
                       const std::vector<CounterVertex>& roots, bool include_dead) {
    Explorer ex(cg);
    ex.explore(roots);
    const ExtendedGame& x = cg.extended();
    auto label = [&](const CounterVertex& cv) {
        std::string s = x.game().id(x.base(cv.ext)) + ", " + x.set_name(x.visited(cv.ext)) + ", (";
        for (size_t i = 0; i < cv.counters.size(); ++i) {
            if (i) s += ",";
            s += cv.counters[i].str();
        }
        return s + ")";
    };
    os << "digraph counter {\n  rankdir=LR;\n  node [shape=box];\n";
    for (size_t v = 0; v < ex.nodes.size(); ++v) {
        if (!ex.live[v] && !include_dead) continue;
        os << "  n" << v << " [label=\"" << label(ex.nodes[v]) << "\"";
        if (!ex.live[v]) os << ", style=filled, fillcolor=lightgray, xlabel=\"dead end\"";
        os << "];\n";
    }
    for (size_t v = 0; v < ex.nodes.size(); ++v) {
        if (!ex.live[v] && !include_dead) continue;
        for (int w : ex.succ[v]) {
            if (!ex.live[static_cast<size_t>(w)] && !include_dead) continue;
            os << "  n" << v << " -> n" << w << ";\n";
        }
    }
    os << "}\n";
}

}  // namespace spe
