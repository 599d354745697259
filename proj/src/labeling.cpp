#include "spe/labeling.hpp"

#include <map>
#include <stdexcept>

#include "spe/counter_graph.hpp"

namespace spe {

Labeling initial_labeling(const ExtendedGame& x) {
    Labeling lambda(static_cast<size_t>(x.size()), ExtCost::inf());
    for (int v = 0; v < x.size(); ++v)
        if (x.in_target(x.owner(v), v)) lambda[static_cast<size_t>(v)] = ExtCost(0);
    return lambda;
}

ConsistencyResult is_lambda_consistent(const ExtendedGame& x, const Labeling& lambda,
                                       const Lasso& ext) {
    if (!x.lasso_edge_valid(ext))
        throw std::invalid_argument("lasso is not edge-valid in the extended game");
    auto fe = first_entries(x, ext);
    size_t horizon = ext.stem.size() + ext.cycle.size();
    for (size_t n = 0; n < horizon; ++n) {
        int v = ext.at(n);
        PlayerId i = x.owner(v);
        ExtCost entry = fe[static_cast<size_t>(i - 1)];
        ExtCost cost = ExtCost(0);
        if (entry.is_inf())
            cost = ExtCost::inf();
        else if (entry.finite() > n)
            cost = ExtCost(entry.finite() - static_cast<uint32_t>(n));
        if (!(cost <= lambda[static_cast<size_t>(v)]))
            return {false, static_cast<int>(n), i};
    }
    return {};
}

namespace {

// Tie-break for the recorded minimizing successor: least (base id, visited).
bool witness_before(const ExtendedGame& x, int a, int b) {
    const std::string& ia = x.game().id(x.base(a));
    const std::string& ib = x.game().id(x.base(b));
    if (ia != ib) return ia < ib;
    return x.visited(a) < x.visited(b);
}

// Cross-step cache for supremum queries inside run_fixpoint. An entry
// computed against λ^k stays valid while no region >= the query vertex's
// region has changed since step k (the labeling is frozen there).
struct SupMemo {
    struct Entry {
        ExtCost value;
        int lambda_step;
    };
    std::map<std::pair<int, PlayerId>, Entry> entries;
    std::vector<int> last_changed;  // per region (1-based), step of last change
    int current_lambda_step = 0;

    explicit SupMemo(int regions) : last_changed(static_cast<size_t>(regions) + 1, 0) {}

    bool valid(const RegionOrder& order, int ext_v, const Entry& e) const {
        for (int r = order.region(ext_v); r <= order.count(); ++r)
            if (last_changed[static_cast<size_t>(r)] > e.lambda_step) return false;
        return true;
    }
};

UpdateResult update_step(const ExtendedGame& x, const RegionOrder& order, const Labeling& lambda,
                         int region_suffix, SupMemo* memo) {
    if (region_suffix < 1 || region_suffix > order.count())
        throw std::invalid_argument("region suffix out of range");
    UpdateResult out;
    out.lambda = lambda;
    out.witness_succ.assign(static_cast<size_t>(x.size()), -1);
    CounterGraph cg(x, order, lambda, region_suffix);

    // per-call cache for the memoless path
    std::map<std::pair<int, PlayerId>, ExtCost> local;

    auto sup = [&](int v, PlayerId i) -> ExtCost {
        if (memo) {
            auto it = memo->entries.find({v, i});
            if (it != memo->entries.end() && memo->valid(order, v, it->second))
                return it->second.value;
        } else {
            auto it = local.find({v, i});
            if (it != local.end()) return it->second;
        }
        SupResult r = sup_cost(cg, v, i);
        if (r.empty)
            throw std::logic_error("empty consistent-play set during labeling update");
        if (memo)
            memo->entries[{v, i}] = {r.value, memo->current_lambda_step};
        else
            local[{v, i}] = r.value;
        return r.value;
    };

    for (int v = 0; v < x.size(); ++v) {
        if (!order.in_suffix(v, region_suffix)) continue;
        PlayerId i = x.owner(v);
        if (x.in_target(i, v)) {
            out.lambda[static_cast<size_t>(v)] = ExtCost(0);
            continue;
        }
        ExtCost best = ExtCost::inf();
        int best_succ = -1;
        for (int w : x.successors(v)) {
            ExtCost s = sup(w, i);
            if (s < best || (s == best && (best_succ < 0 || witness_before(x, w, best_succ)))) {
                best = s;
                best_succ = w;
            }
        }
        out.lambda[static_cast<size_t>(v)] = best.plus_one();
        out.witness_succ[static_cast<size_t>(v)] = best_succ;
    }
    return out;
}

}  // namespace

UpdateResult update_labeling(const ExtendedGame& x, const RegionOrder& order,
                             const Labeling& lambda, int region_suffix) {
    return update_step(x, order, lambda, region_suffix, nullptr);
}

std::pair<Labeling, FixpointTrace> run_fixpoint(const ExtendedGame& x, const RegionOrder& order) {
    uint64_t bound = mr_theoretical_bound(x.game().vertex_count(), x.game().player_count());
    FixpointTrace trace;
    trace.local_fixpoint.assign(static_cast<size_t>(order.count()), 0);

    Labeling lambda = initial_labeling(x);
    trace.steps.push_back({0, 0, false, lambda, {}});

    SupMemo memo(order.count());
    int k = 0;
    for (int n = order.count(); n >= 1; --n) {
        for (;;) {
            ++k;
            memo.current_lambda_step = k - 1;
            UpdateResult up = update_step(x, order, lambda, n, &memo);
            bool changed = false;
            for (size_t v = 0; v < lambda.size(); ++v) {
                if (!(up.lambda[v] <= lambda[v]))
                    throw std::logic_error("labeling increased: monotonicity violated");
                if (up.lambda[v] != lambda[v]) {
                    changed = true;
                    int r = order.region(static_cast<int>(v));
                    memo.last_changed[static_cast<size_t>(r)] = k;
                }
            }
            if (max_finite_range(up.lambda) > bound)
                throw std::logic_error("maximal finite range exceeds the theoretical bound");
            lambda = up.lambda;
            trace.steps.push_back({k, n, changed, lambda, std::move(up.witness_succ)});
            if (!changed) break;
        }
        trace.local_fixpoint[static_cast<size_t>(n - 1)] = k - 1;
    }
    return {lambda, trace};
}

std::vector<FixpointTrace::Row> FixpointTrace::rows() const {
    std::vector<Row> out;
    for (const auto& s : steps) {
        if (!out.empty() && *out.back().lambda == s.lambda) {
            out.back().last_k = s.k;
        } else {
            out.push_back({s.k, s.k, &s.lambda});
        }
    }
    return out;
}

uint32_t max_finite_range(const Labeling& lambda) {
    uint32_t k = 0;
    for (ExtCost c : lambda)
        if (!c.is_inf()) k = std::max(k, c.finite());
    return k;
}

uint32_t max_finite_range_region(const Labeling& lambda, const RegionOrder& order, int n) {
    uint32_t k = 0;
    for (int v : order.members[static_cast<size_t>(n - 1)])
        if (!lambda[static_cast<size_t>(v)].is_inf())
            k = std::max(k, lambda[static_cast<size_t>(v)].finite());
    return k;
}

uint32_t max_finite_range_suffix(const Labeling& lambda, const RegionOrder& order, int n) {
    uint32_t k = 0;
    for (int m = n; m <= order.count(); ++m)
        k = std::max(k, max_finite_range_region(lambda, order, m));
    return k;
}

uint64_t mr_theoretical_bound(int vertices, int players) {
    uint64_t base = static_cast<uint64_t>(vertices);
    uint64_t exponent = static_cast<uint64_t>(vertices + 3) * static_cast<uint64_t>(players + 2);
    uint64_t result = 1;
    for (uint64_t e = 0; e < exponent; ++e) {
        if (base != 0 && result > UINT64_MAX / base) return UINT64_MAX;
        result *= base;
    }
    return result;
}

}  // namespace spe
