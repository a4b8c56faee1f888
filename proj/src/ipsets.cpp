#include "exporamsey/ipsets.hpp"

#include <algorithm>
#include <optional>
#include <string>

#include <gmpxx.h>

#include "exporamsey/errors.hpp"

namespace exporamsey {

namespace {

using Wide = unsigned __int128;

// base^exponent if it is <= limit.
std::optional<Value> bounded_pow(Value base, Value exponent, Value limit) {
    Wide acc = 1;
    for (Value i = 0; i < exponent; ++i) {
        acc *= base;
        if (acc > limit) return std::nullopt;
        if (base <= 1) break;
    }
    return static_cast<Value>(acc);
}

// floor(x^(1/n)) for n >= 1.
Value floor_root(Value x, Value n) {
    mpz_class r;
    mpz_class v(std::to_string(x), 10);
    mpz_root(r.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(n));
    return std::stoull(r.get_str());
}

// Exact n-th root of x, if any.
std::optional<Value> exact_root(Value x, Value n) {
    mpz_class r;
    mpz_class v(std::to_string(x), 10);
    if (mpz_root(r.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(n)) == 0) return std::nullopt;
    return std::stoull(r.get_str());
}

WindowSet finish(Value lo, Value hi, std::vector<Value> members) {
    // Empty ranges collapse to their upper end (see header).
    if (lo > hi) lo = hi;
    return WindowSet::make(lo, hi, std::move(members));
}

template <typename Combine>
SeedSearch find_seed(const WindowSet& a, std::size_t m, std::uint64_t budget, Combine combine) {
    if (m < 1) throw DomainError("seed search: m must be >= 1");
    std::vector<Value> candidates;
    for (Value v : a.members) {
        if (v >= 1) candidates.push_back(v);
    }

    SeedSearch result;
    std::vector<Value> chosen;
    bool out_of_budget = false;

    // `closure` holds FS/FP of `chosen`; every element is already in A.
    auto search = [&](auto&& self, std::size_t start, const std::vector<Value>& closure) -> bool {
        if (chosen.size() == m) return true;
        for (std::size_t i = start; i < candidates.size(); ++i) {
            if (candidates.size() - i < m - chosen.size()) return false;
            if (++result.nodes > budget) {
                out_of_budget = true;
                return false;
            }
            const Value x = candidates[i];
            std::vector<Value> next = closure;
            next.push_back(x);
            bool ok = true;
            bool past_window = false;
            for (Value s : closure) {
                const std::optional<Value> v = combine(s, x, a.hi);
                if (!v) {
                    ok = false;
                    past_window = s == closure.front();
                    break;
                }
                if (!a.contains(*v)) {
                    ok = false;
                    break;
                }
                next.push_back(*v);
            }
            // combine(min closure, x) is monotone in x: larger x cannot fit.
            if (past_window) return false;
            if (!ok) continue;
            chosen.push_back(x);
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            if (self(self, i + 1, next)) return true;
            chosen.pop_back();
            if (out_of_budget) return false;
        }
        return false;
    };

    if (search(search, 0, {})) {
        result.status = SearchStatus::Found;
        result.seed = chosen;
    } else {
        result.status = out_of_budget ? SearchStatus::Inconclusive : SearchStatus::None;
    }
    result.nodes = std::min(result.nodes, budget);
    return result;
}

std::optional<Value> bounded_sum(Value s, Value x, Value limit) {
    const Wide v = Wide{s} + x;
    if (v > limit) return std::nullopt;
    return static_cast<Value>(v);
}

std::optional<Value> bounded_product(Value s, Value x, Value limit) {
    const Wide v = Wide{s} * x;
    if (v > limit) return std::nullopt;
    return static_cast<Value>(v);
}

}  // namespace

WindowSet WindowSet::make(Value lo, Value hi, std::vector<Value> members) {
    if (lo > hi) throw DomainError("window requires lo <= hi");
    if (hi > kWindowMax) throw CapacityError("window bound exceeds 2^62");
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (!members.empty() && (members.front() < lo || members.back() > hi)) {
        throw DomainError("window members must lie in [lo, hi]");
    }
    return WindowSet{lo, hi, std::move(members)};
}

WindowSet WindowSet::from_spec(const SetSpec& spec, Value lo, Value hi, const Caps& caps) {
    if (lo > hi) throw DomainError("window requires lo <= hi");
    std::vector<Value> members;
    for (Value v = lo;; ++v) {
        if (spec.contains(Natural(static_cast<unsigned long>(v)), caps)) members.push_back(v);
        if (v == hi) break;
    }
    return make(lo, hi, std::move(members));
}

bool WindowSet::contains(Value v) const { return std::binary_search(members.begin(), members.end(), v); }

WindowSet transform(const WindowSet& a, SetTransform op) {
    const std::int64_t n = op.n;
    switch (op.kind) {
    case SetTransform::Kind::Shift: {
        const __int128 lo = static_cast<__int128>(a.lo) - n;
        const __int128 hi = static_cast<__int128>(a.hi) - n;
        if (hi > static_cast<__int128>(kWindowMax)) throw CapacityError("shift: result window exceeds 2^62");
        if (hi < 0) return WindowSet::make(0, 0, {});
        std::vector<Value> members;
        for (Value v : a.members) {
            const __int128 m = static_cast<__int128>(v) - n;
            if (m >= 0) members.push_back(static_cast<Value>(m));
        }
        return finish(static_cast<Value>(std::max<__int128>(lo, 0)), static_cast<Value>(hi), std::move(members));
    }
    case SetTransform::Kind::Divide: {
        if (n < 1) throw DomainError("divide: n must be >= 1");
        const Value d = static_cast<Value>(n);
        std::vector<Value> members;
        for (Value v : a.members) {
            if (v % d == 0) members.push_back(v / d);
        }
        return finish((a.lo + d - 1) / d, a.hi / d, std::move(members));
    }
    case SetTransform::Kind::Log: {
        if (n < 2) throw DomainError("log: n must be >= 2");
        const Value base = static_cast<Value>(n);
        // [smallest m with base^m >= lo, largest m with base^m <= hi]
        if (a.hi == 0) return WindowSet::make(0, 0, {});
        Value lo = 0;
        for (Wide power = 1; power < a.lo; power *= base) ++lo;
        Value hi = 0;
        for (Wide power = base; power <= a.hi; power *= base) ++hi;
        std::vector<Value> members;
        for (Value m = lo; m <= hi; ++m) {
            if (const auto v = bounded_pow(base, m, a.hi); v && a.contains(*v)) members.push_back(m);
        }
        return finish(lo, hi, std::move(members));
    }
    case SetTransform::Kind::Root: {
        if (n < 1) throw DomainError("root: n must be >= 1");
        const Value degree = static_cast<Value>(n);
        Value lo = floor_root(a.lo, degree);
        if (!exact_root(a.lo, degree)) ++lo;
        const Value hi = floor_root(a.hi, degree);
        std::vector<Value> members;
        for (Value v : a.members) {
            if (const auto r = exact_root(v, degree)) members.push_back(*r);
        }
        return finish(lo, hi, std::move(members));
    }
    }
    throw DomainError("unknown transform");
}

SeedSearch find_fs_seed(const WindowSet& a, std::size_t m, std::uint64_t budget) {
    return find_seed(a, m, budget, bounded_sum);
}

SeedSearch find_fp_seed(const WindowSet& a, std::size_t m, std::uint64_t budget) {
    return find_seed(a, m, budget, bounded_product);
}

IpStarVerdict is_ip_star_window(const SetSpec& a, IpKind kind, std::size_t m, Value lo, Value hi, const Caps& caps,
                                std::uint64_t budget) {
    if (m < 1) throw DomainError("is_ip_star_window: m must be >= 1");
    std::vector<Value> outside;
    try {
        for (Value v = lo;; ++v) {
            if (!a.contains(Natural(static_cast<unsigned long>(v)), caps)) outside.push_back(v);
            if (v == hi) break;
        }
    } catch (const OracleRangeError&) {
        return {Verdict::Inconclusive, {}};
    }
    const WindowSet complement = WindowSet::make(lo, hi, std::move(outside));
    const SeedSearch search =
        kind == IpKind::Additive ? find_fs_seed(complement, m, budget) : find_fp_seed(complement, m, budget);
    switch (search.status) {
    case SearchStatus::Found: return {Verdict::Fails, search.seed};
    case SearchStatus::None: return {Verdict::Holds, {}};
    case SearchStatus::Inconclusive: break;
    }
    return {Verdict::Inconclusive, {}};
}

std::vector<std::pair<Value, Value>> find_geometric_progressions(const WindowSet& a, std::size_t length) {
    if (length < 2) throw DomainError("geometric progressions need length >= 2");
    std::vector<std::pair<Value, Value>> out;
    for (Value start : a.members) {
        if (start == 0) continue;
        for (Value h = 2;; ++h) {
            // The last term a*h^(length-1) grows with h.
            Wide term = start;
            bool fits = true;
            for (std::size_t i = 1; i < length && fits; ++i) {
                term *= h;
                fits = term <= a.hi;
            }
            if (!fits) break;
            term = start;
            bool all = true;
            for (std::size_t i = 1; i < length && all; ++i) {
                term *= h;
                all = a.contains(static_cast<Value>(term));
            }
            if (all) out.emplace_back(start, h);
        }
    }
    return out;
}

std::vector<Value> find_power_progressions(const WindowSet& a, std::size_t length) {
    if (length < 2) throw DomainError("power progressions need length >= 2");
    std::vector<Value> out;
    for (Value h = 2; bounded_pow(h, length, a.hi); ++h) {
        Wide power = 1;
        bool all = true;
        for (std::size_t i = 1; i <= length && all; ++i) {
            power *= h;
            all = a.contains(static_cast<Value>(power));
        }
        if (all) out.push_back(h);
    }
    return out;
}

}  // namespace exporamsey
