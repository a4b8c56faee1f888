#pragma once

// Reference implementations used by the tests. They are written from the
// definitions with plain loops and share no code with the library.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace oracle {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// base^exp, or nullopt once it passes `limit`.
inline std::optional<u64> checked_pow(u64 base, u64 exp, u64 limit = ~u64{0}) {
    u128 acc = 1;
    for (u64 i = 0; i < exp; ++i) {
        acc *= base;
        if (acc > limit) return std::nullopt;
    }
    return static_cast<u64>(acc);
}

// True when n = m^k for some m >= 2, k >= 2. Scans every base m with m^2 <= n.
inline bool is_perfect_power(u64 n) {
    if (n < 4) return false;
    for (u64 m = 2; static_cast<u128>(m) * m <= n; ++m) {
        u128 v = static_cast<u128>(m) * m;
        while (v < n) v *= m;
        if (v == n) return true;
    }
    return false;
}

// Smallest base m with m^k = n, plus that k. For n >= 2 this is the
// primitive root and the largest exponent.
inline std::pair<u64, u64> smallest_base(u64 n) {
    for (u64 m = 2; static_cast<u128>(m) * m <= n; ++m) {
        u128 v = m;
        u64 k = 1;
        while (v < n) {
            v *= m;
            ++k;
        }
        if (v == n) return {m, k};
    }
    return {n, 1};
}

inline std::vector<u64> subset_sums(const std::vector<u64>& x) {
    std::set<u64> out;
    for (u64 mask = 1; mask < (u64{1} << x.size()); ++mask) {
        u64 s = 0;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (mask >> i & 1) s += x[i];
        out.insert(s);
    }
    return {out.begin(), out.end()};
}

inline std::vector<mpz_class> subset_products(const std::vector<mpz_class>& x) {
    std::set<mpz_class> out;
    for (u64 mask = 1; mask < (u64{1} << x.size()); ++mask) {
        mpz_class p = 1;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (mask >> i & 1) p *= x[i];
        out.insert(p);
    }
    return {out.begin(), out.end()};
}

// Triples (a, b, a^b) with a, b >= 2 and a^b <= bound, as a plain double loop.
inline std::vector<std::array<u64, 3>> triples_double_loop(u64 bound) {
    std::vector<std::array<u64, 3>> out;
    for (u64 a = 2; static_cast<u128>(a) * a <= bound; ++a) {
        u128 c = static_cast<u128>(a) * a;
        for (u64 b = 2; c <= bound; ++b, c *= a) out.push_back({a, b, static_cast<u64>(c)});
    }
    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) {
        return std::tie(l[2], l[0], l[1]) < std::tie(r[2], r[0], r[1]);
    });
    return out;
}

inline u64 triple_count(u64 bound) {
    u64 count = 0;
    for (u64 a = 2; static_cast<u128>(a) * a <= bound; ++a)
        for (u128 c = static_cast<u128>(a) * a; c <= bound; c *= a) ++count;
    return count;
}

// FE expansion over seeds drawn from {2, ..., 9}. An element is kept as a pair
// (r, e) meaning r^e, with r in {2, 3, 5, 6, 7}. The cap policy is copied from
// the library defaults: an exponent may not exceed `exp_bits` bits, and an
// element used as an exponent must have at most `value_bits` bits.
struct FeOracle {
    std::size_t value_bits = 4096;
    std::size_t exp_bits = 65536;

    using Elem = std::pair<u64, mpz_class>;

    static Elem seed(u64 s) {
        static const std::map<u64, std::pair<u64, u64>> table{
            {2, {2, 1}}, {3, {3, 1}}, {4, {2, 2}}, {5, {5, 1}},
            {6, {6, 1}}, {7, {7, 1}}, {8, {2, 3}}, {9, {3, 2}}};
        const auto& [r, e] = table.at(s);
        return {r, mpz_class(e)};
    }

    // Bit length of r^e, or nullopt if it is certainly above value_bits.
    std::optional<std::size_t> value_bit_length(const Elem& x) const {
        const std::size_t rb = mpz_sizeinbase(mpz_class(x.first).get_mpz_t(), 2);
        if (!x.second.fits_ulong_p()) return std::nullopt;
        const u64 e = x.second.get_ui();
        if ((rb - 1) * e + 1 > value_bits) return std::nullopt;
        mpz_class v;
        mpz_ui_pow_ui(v.get_mpz_t(), x.first, e);
        return mpz_sizeinbase(v.get_mpz_t(), 2);
    }

    std::optional<Elem> power(const Elem& base, const Elem& exponent) const {
        const auto bits = value_bit_length(exponent);
        if (!bits || *bits > value_bits) return std::nullopt;
        mpz_class v;
        mpz_ui_pow_ui(v.get_mpz_t(), exponent.first, exponent.second.get_ui());
        mpz_class e = base.second * v;
        if (mpz_sizeinbase(e.get_mpz_t(), 2) > exp_bits) return std::nullopt;
        return Elem{base.first, e};
    }

    struct Result {
        std::set<Elem> elements;
        std::size_t dropped = 0;
    };

    // type 1: y -> y^x ; type 2: y -> x^y, for each new seed x.
    Result expand(const std::vector<u64>& seeds, std::size_t level, int type) const {
        Result r;
        r.elements.insert(seed(seeds[0]));
        for (std::size_t n = 1; n <= level; ++n) {
            const Elem x = seed(seeds[n]);
            std::set<Elem> next = r.elements;
            for (const auto& y : r.elements) {
                auto z = type == 1 ? power(y, x) : power(x, y);
                if (z) next.insert(*z);
                else ++r.dropped;
            }
            next.insert(x);
            r.elements = std::move(next);
        }
        return r;
    }
};

}  // namespace oracle
