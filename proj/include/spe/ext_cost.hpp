#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace spe {

// A cost in N ∪ {+inf}: number of edges until a target visit, or infinity
// if the target is never visited. Infinity is absorbing under addition and
// maximal in the order.
class ExtCost {
public:
    constexpr ExtCost() = default;
    constexpr explicit ExtCost(uint32_t n) : raw_(n) {
        if (n == kInfRaw) throw std::overflow_error("ExtCost: value too large");
    }

    static constexpr ExtCost inf() {
        ExtCost c;
        c.raw_ = kInfRaw;
        return c;
    }

    constexpr bool is_inf() const { return raw_ == kInfRaw; }

    constexpr uint32_t finite() const {
        if (is_inf()) throw std::logic_error("ExtCost: finite() on +inf");
        return raw_;
    }

    // 1 + (+inf) = +inf
    constexpr ExtCost plus_one() const {
        if (is_inf()) return *this;
        return ExtCost(raw_ + 1);
    }

    // (+inf) - 1 = +inf; finite values must be positive
    constexpr ExtCost minus_one() const {
        if (is_inf()) return *this;
        if (raw_ == 0) throw std::logic_error("ExtCost: minus_one() on 0");
        ExtCost c;
        c.raw_ = raw_ - 1;
        return c;
    }

    friend constexpr auto operator<=>(ExtCost a, ExtCost b) { return a.raw_ <=> b.raw_; }
    friend constexpr bool operator==(ExtCost a, ExtCost b) { return a.raw_ == b.raw_; }

    friend constexpr ExtCost min(ExtCost a, ExtCost b) { return a <= b ? a : b; }
    friend constexpr ExtCost max(ExtCost a, ExtCost b) { return a >= b ? a : b; }

    std::string str() const { return is_inf() ? "inf" : std::to_string(raw_); }

    static ExtCost parse(const std::string& s) {
        if (s == "inf" || s == "+inf") return inf();
        size_t pos = 0;
        unsigned long v = std::stoul(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("ExtCost: bad value '" + s + "'");
        return ExtCost(static_cast<uint32_t>(v));
    }

private:
    static constexpr uint32_t kInfRaw = UINT32_MAX;
    uint32_t raw_ = 0;
};

// One cost per player, indexed by player - 1.
using CostProfile = std::vector<ExtCost>;

inline bool profile_leq(const CostProfile& a, const CostProfile& b) {
    if (a.size() != b.size()) throw std::invalid_argument("profile_leq: arity mismatch");
    for (size_t i = 0; i < a.size(); ++i)
        if (!(a[i] <= b[i])) return false;
    return true;
}

std::string profile_str(const CostProfile& c);

}  // namespace spe
