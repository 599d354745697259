#include "spe/decide.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <memory>
#include <stdexcept>
#include <unordered_map>

namespace spe {

namespace {

// Search state: counter vertex plus a step count clamped at D+1, where D is
// the largest finite bound of the query. Below the clamp arrival times are
// exact; at the clamp every finite upper bound is already violated and every
// finite lower bound already satisfied.
struct State {
    CounterVertex cv;
    int t;

    friend bool operator==(const State&, const State&) = default;
};

struct StateHash {
    size_t operator()(const State& s) const {
        return CounterVertexHash{}(s.cv) * 31 + static_cast<size_t>(s.t);
    }
};

struct QuerySpec {
    CostProfile lower, upper;
    int players;
    int clamp;              // D+1
    uint64_t must_enter;    // players with a finite upper bound
    uint64_t never_enter;   // players with lower = upper = +inf

    bool arrival_ok(uint64_t added, int arrival) const {
        for (int i = 1; i <= players; ++i) {
            if (!((added >> (i - 1)) & 1)) continue;
            if ((never_enter >> (i - 1)) & 1) return false;
            const ExtCost lo = lower[static_cast<size_t>(i - 1)];
            const ExtCost hi = upper[static_cast<size_t>(i - 1)];
            if (!hi.is_inf() && static_cast<uint32_t>(arrival) > hi.finite()) return false;
            if (!lo.is_inf() && static_cast<uint32_t>(arrival) < lo.finite()) return false;
        }
        return true;
    }
};

// Lazily explored state graph with liveness, analogous to the counter-graph
// explorer but with the arrival checks folded into the edges.
struct StateExplorer {
    const CounterGraph& cg;
    const QuerySpec& spec;
    std::vector<State> nodes;
    std::unordered_map<State, int, StateHash> index;
    std::vector<std::vector<int>> succ;
    std::vector<char> live;

    StateExplorer(const CounterGraph& graph, const QuerySpec& s) : cg(graph), spec(s) {}

    int intern(const State& st) {
        auto it = index.find(st);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(nodes.size());
        index.emplace(st, id);
        nodes.push_back(st);
        return id;
    }

    void explore(const State& root) {
        std::deque<int> queue{intern(root)};
        while (!queue.empty()) {
            int id = queue.front();
            queue.pop_front();
            if (static_cast<size_t>(id) >= succ.size()) succ.resize(static_cast<size_t>(id) + 1);
            State cur = nodes[static_cast<size_t>(id)];
            int arrival = std::min(cur.t + 1, spec.clamp);
            uint64_t mask = cg.extended().visited(cur.cv.ext);
            for (auto& next_cv : cg.successors(cur.cv)) {
                uint64_t added = cg.extended().visited(next_cv.ext) & ~mask;
                if (!spec.arrival_ok(added, arrival)) continue;
                int before = static_cast<int>(nodes.size());
                int nid = intern({std::move(next_cv), arrival});
                succ[static_cast<size_t>(id)].push_back(nid);
                if (nid == before) queue.push_back(nid);
            }
        }
        succ.resize(nodes.size());
        prune();
    }

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
};

// The paper's lasso construction: keep the first d positions verbatim, then
// loop at the first repeated counter vertex, removing target-free cycles
// along the way. Keeps every constraint satisfied and bounds the result by
// d + 2|C|.
CounterLasso compress_witness(const std::vector<State>& path_states, size_t d,
                              uint64_t must_enter, const ExtendedGame& x) {
    std::vector<CounterVertex> out;
    std::unordered_map<CounterVertex, size_t, CounterVertexHash> at;
    size_t pos = 0;
    auto stream = [&](size_t p) -> const CounterVertex& { return path_states[p].cv; };
    for (;;) {
        assert(pos < path_states.size());
        const CounterVertex& u = stream(pos++);
        if (out.size() < d) {
            out.push_back(u);
            continue;
        }
        auto it = at.find(u);
        if (it != at.end()) {
            size_t p = it->second;
            uint64_t mask = x.visited(u.ext);
            if ((mask & must_enter) == must_enter) {
                CounterLasso res;
                res.stem.assign(out.begin(), out.begin() + static_cast<long>(p));
                res.cycle.assign(out.begin() + static_cast<long>(p), out.end());
                return res;
            }
            // cycle without progress: drop it (its region is constant, so it
            // contains no first visit) and keep streaming
            for (size_t q = p + 1; q < out.size(); ++q) at.erase(out[q]);
            out.resize(p + 1);
        } else {
            at.emplace(u, out.size());
            out.push_back(u);
        }
    }
}

}  // namespace

Solver::Solver(const ReachabilityGame& g, int v0)
    : g_(&g), x_(g, v0), order_(region_order(x_)) {
    auto [lambda, trace] = run_fixpoint(x_, order_);
    lambda_ = std::move(lambda);
    trace_ = std::move(trace);
}

Decision Solver::decide(const ConstraintQuery& q) const {
    int players = g_->player_count();
    if (static_cast<int>(q.lower.size()) != players || static_cast<int>(q.upper.size()) != players)
        throw std::invalid_argument("bound arity does not match the player count");

    Decision d;
    for (int i = 1; i <= players; ++i) {
        if (!(q.lower[static_cast<size_t>(i - 1)] <= q.upper[static_cast<size_t>(i - 1)])) {
            d.reason = "empty interval for player " + std::to_string(i) + ": lower " +
                       q.lower[static_cast<size_t>(i - 1)].str() + " > upper " +
                       q.upper[static_cast<size_t>(i - 1)].str();
            return d;
        }
    }

    QuerySpec spec;
    spec.lower = q.lower;
    spec.upper = q.upper;
    spec.players = players;
    spec.must_enter = 0;
    spec.never_enter = 0;
    uint32_t max_finite = 0;
    for (int i = 1; i <= players; ++i) {
        const ExtCost lo = q.lower[static_cast<size_t>(i - 1)];
        const ExtCost hi = q.upper[static_cast<size_t>(i - 1)];
        if (!hi.is_inf()) {
            spec.must_enter |= uint64_t{1} << (i - 1);
            max_finite = std::max(max_finite, hi.finite());
        } else if (!lo.is_inf()) {
            max_finite = std::max(max_finite, lo.finite());
        } else {
            spec.never_enter |= uint64_t{1} << (i - 1);
        }
    }
    spec.clamp = static_cast<int>(max_finite) + 1;

    // position-0 memberships
    uint64_t i0 = x_.visited(x_.x0());
    for (int i = 1; i <= players; ++i) {
        if (!((i0 >> (i - 1)) & 1)) continue;
        const ExtCost lo = q.lower[static_cast<size_t>(i - 1)];
        if (lo.is_inf()) {
            d.reason = "player " + std::to_string(i) +
                       " visits his target at the initial vertex but must never reach it";
            return d;
        }
        if (lo.finite() > 0) {
            d.reason = "player " + std::to_string(i) +
                       " has cost 0 at the initial vertex, below his lower bound";
            return d;
        }
    }

    CounterGraph cg(x_, order_, lambda_, 1);
    StateExplorer ex(cg, spec);
    State root{cg.starting_vertex(x_.x0()), 0};
    ex.explore(root);
    int root_id = ex.index.at(root);
    if (!ex.live[static_cast<size_t>(root_id)]) {
        d.reason = "no consistent play satisfies the bounds";
        return d;
    }

    // BFS through live states for the earliest one covering all finite
    // upper-bound obligations.
    std::vector<int> parent(ex.nodes.size(), -2);
    parent[static_cast<size_t>(root_id)] = -1;
    std::deque<int> queue{root_id};
    int goal = -1;
    while (!queue.empty() && goal < 0) {
        int id = queue.front();
        queue.pop_front();
        uint64_t mask = x_.visited(ex.nodes[static_cast<size_t>(id)].cv.ext);
        if ((mask & spec.must_enter) == spec.must_enter) {
            goal = id;
            break;
        }
        for (int w : ex.succ[static_cast<size_t>(id)]) {
            if (!ex.live[static_cast<size_t>(w)] || parent[static_cast<size_t>(w)] != -2) continue;
            parent[static_cast<size_t>(w)] = id;
            queue.push_back(w);
        }
    }
    if (goal < 0) {
        d.reason = "no consistent play satisfies the bounds";
        return d;
    }

    // witness path: root -> goal, then follow first live successors until a
    // state repeats
    std::vector<int> ids;
    for (int id = goal; id != -1; id = parent[static_cast<size_t>(id)]) ids.push_back(id);
    std::reverse(ids.begin(), ids.end());
    {
        std::unordered_map<int, size_t> seen;
        int cur = ids.back();
        while (!seen.count(cur)) {
            seen[cur] = ids.size();
            int next = -1;
            for (int w : ex.succ[static_cast<size_t>(cur)])
                if (ex.live[static_cast<size_t>(w)]) {
                    next = w;
                    break;
                }
            assert(next >= 0);
            ids.push_back(next);
            cur = next;
        }
    }
    uint32_t d_lower = 0;
    for (int i = 1; i <= players; ++i) {
        const ExtCost lo = q.lower[static_cast<size_t>(i - 1)];
        if (!lo.is_inf()) d_lower = std::max(d_lower, lo.finite());
    }

    // `ids` now ends one step after the first repeated state; extend it with
    // the closing cycle until the compressor is guaranteed to see the repeat
    // past the verbatim prefix.
    std::vector<State> stream;
    for (int id : ids) stream.push_back(ex.nodes[static_cast<size_t>(id)]);
    {
        int back = ids.back();
        size_t first = 0;
        while (ids[first] != back) ++first;
        size_t turn = ids.size() - first - 1;
        size_t needed = d_lower + ids.size() + 2 * turn + 2;
        while (stream.size() < needed)
            for (size_t p = first + 1; p < ids.size(); ++p)
                stream.push_back(ex.nodes[static_cast<size_t>(ids[p])]);
    }

    d.witness_counter = compress_witness(stream, d_lower, spec.must_enter, x_);
    d.yes = true;
    d.witness_ext = normalized(path_to_lasso_play(d.witness_counter));
    d.witness_base = project_lasso(x_, d.witness_ext);
    d.cost = ext_cost_of_lasso(x_, d.witness_ext);
    if (!profile_leq(q.lower, d.cost) || !profile_leq(d.cost, q.upper))
        throw std::logic_error("witness violates the requested bounds");
    return d;
}

SpeOutcomeCheck Solver::check_outcome(const Lasso& base) const {
    SpeOutcomeCheck out;
    Lasso lifted = lift_lasso(x_, base);
    out.detail = is_lambda_consistent(x_, lambda_, lifted);
    out.is_spe_outcome = out.detail.ok;
    return out;
}

SpeProfile Solver::build_profile(const Lasso& base) const {
    auto check = check_outcome(base);
    if (!check.is_spe_outcome)
        throw std::invalid_argument("outcome is not λ*-consistent; no SPE realizes it");

    SpeProfile profile;
    profile.primary = lift_lasso(x_, base);
    CounterGraph cg(x_, order_, lambda_, 1);
    for (int v = 0; v < x_.size(); ++v) {
        PlayerId i = x_.owner(v);
        for (int w : x_.successors(v)) {
            if (profile.slot_index(i, w) >= 0) continue;
            SupResult sup = sup_cost(cg, w, i);
            if (sup.empty)
                throw std::logic_error("reachable vertex with no consistent play");
            profile.punishments.push_back({i, w, normalized(path_to_lasso_play(sup.witness))});
        }
    }
    return profile;
}

int SpeProfile::slot_index(PlayerId deviator, int target) const {
    for (size_t s = 0; s < punishments.size(); ++s)
        if (punishments[s].deviator == deviator && punishments[s].target == target)
            return static_cast<int>(s);
    return -1;
}

size_t SpeProfile::memory_states() const {
    size_t total = primary.length();
    for (const auto& p : punishments) total += p.play.length();
    return total;
}

nlohmann::ordered_json SpeProfile::to_json(const ExtendedGame& x) const {
    auto lasso_json = [&x](const Lasso& l) {
        nlohmann::ordered_json j;
        auto stem = nlohmann::ordered_json::array();
        for (int v : l.stem) stem.push_back(x.name(v));
        auto cyc = nlohmann::ordered_json::array();
        for (int v : l.cycle) cyc.push_back(x.name(v));
        j["stem"] = stem;
        j["cycle"] = cyc;
        return j;
    };
    nlohmann::ordered_json j;
    j["primary"] = lasso_json(primary);
    auto pun = nlohmann::ordered_json::object();
    for (const auto& p : punishments)
        pun["(" + std::to_string(p.deviator) + "," + x.name(p.target) + ")"] =
            lasso_json(p.play);
    j["punishments"] = pun;
    j["rule"] =
        "follow the assigned lasso; when the owner of the current vertex moves to a vertex "
        "other than the assigned one, switch to the punishment lasso keyed by (owner, entered "
        "vertex) and follow it from its start";
    return j;
}

FiniteMemoryProfile SpeProfile::as_finite_memory(const ExtendedGame& x) const {
    // memory = (lasso id, position); lasso 0 is the primary outcome
    size_t lasso_count = 1 + punishments.size();
    std::vector<size_t> offset{0};
    size_t total = primary.length();
    for (const auto& p : punishments) {
        offset.push_back(total);
        total += p.play.length();
    }

    struct Shared {
        SpeProfile profile;
        const ExtendedGame* x;
        std::vector<size_t> offsets;
        std::vector<size_t> lengths;
        std::vector<size_t> stems;

        std::pair<size_t, size_t> decode(int mem) const {
            size_t m = static_cast<size_t>(mem);
            size_t id = offsets.size() - 1;
            while (offsets[id] > m) --id;
            return {id, m - offsets[id]};
        }
        const Lasso& lasso(size_t id) const {
            return id == 0 ? profile.primary : profile.punishments[id - 1].play;
        }
        size_t next_pos(size_t id, size_t pos) const {
            return pos + 1 < lengths[id] ? pos + 1 : stems[id];
        }
        int vertex(size_t id, size_t pos) const {
            const Lasso& l = lasso(id);
            return pos < l.stem.size() ? l.stem[pos] : l.cycle[pos - l.stem.size()];
        }
    };
    auto shared = std::make_shared<Shared>();
    shared->profile = std::move(self);
    shared->x = &x;
    shared->offsets = std::move(offset);
    for (size_t id = 0; id < lassos.size(); ++id) {
        shared->lengths.push_back(shared->lasso(id).length());
        shared->stems.push_back(shared->lasso(id).stem.size());
    }

    FiniteMemoryProfile fm;
    fm.memory_count = static_cast<int>(total);
    fm.initial_memory = 0;
    fm.move = [shared](int mem, int xv) {
        auto [id, pos] = shared->decode(mem);
        assert(shared->vertex(id, pos) == xv);
        (void)xv;
        return shared->vertex(id, shared->next_pos(id, pos));
    };
    fm.update = [shared](int mem, int entered) {
        auto [id, pos] = shared->decode(mem);
        size_t np = shared->next_pos(id, pos);
        if (shared->vertex(id, np) == entered)
            return static_cast<int>(shared->offsets[id] + np);
        PlayerId deviator = shared->x->owner(shared->vertex(id, pos));
        int slot = shared->profile.slot_index(deviator, entered);
        if (slot < 0) throw std::logic_error("deviation without a punishment slot");
        return static_cast<int>(shared->offsets[static_cast<size_t>(slot) + 1]);
    };
    return fm;
}

int SpeProfile::next_move(const ExtendedGame& x, std::span<const int> base_history) const {
    if (base_history.empty() || base_history.front() != x.initial_vertex())
        throw std::invalid_argument("history must start at the initial vertex");
    FiniteMemoryProfile fm = as_finite_memory(x);
    const ReachabilityGame& g = x.game();
    uint64_t mask = g.target_mask(base_history.front());
    int xv = x.find(g.id(base_history.front()), mask);
    int mem = fm.initial_memory;
    for (size_t p = 1; p < base_history.size(); ++p) {
        if (!g.has_edge(base_history[p - 1], base_history[p]))
            throw std::invalid_argument("history does not follow the arena edges");
        mask |= g.target_mask(base_history[p]);
        int next = x.find(g.id(base_history[p]), mask);
        mem = fm.update(mem, next);
        xv = next;
    }
    return x.base(fm.move(mem, xv));
}

Decision decide_constraint(const ReachabilityGame& g, int v0, const ConstraintQuery& q) {
    return Solver(g, v0).decide(q);
}

SpeOutcomeCheck spe_outcome_check(const ReachabilityGame& g, int v0, const Lasso& base) {
    return Solver(g, v0).check_outcome(base);
}

SpeProfile build_spe_profile(const ReachabilityGame& g, int v0, const Lasso& base) {
    return Solver(g, v0).build_profile(base);
}

}  // namespace spe
