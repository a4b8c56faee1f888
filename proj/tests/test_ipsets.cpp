#include <doctest.h>

#include <random>
#include <set>

#include "exporamsey/errors.hpp"
#include "exporamsey/ipsets.hpp"
#include "exporamsey/set_spec.hpp"
#include "oracles.hpp"

using namespace exporamsey;

namespace {

WindowSet ws(Value lo, Value hi, std::vector<Value> m) { return WindowSet::make(lo, hi, std::move(m)); }

WindowSet random_window(std::mt19937_64& rng, Value max_hi) {
    std::uniform_int_distribution<Value> bound(0, max_hi);
    Value lo = bound(rng), hi = bound(rng);
    if (lo > hi) std::swap(lo, hi);
    std::bernoulli_distribution keep(0.3);
    std::vector<Value> m;
    for (Value v = lo; v <= hi; ++v)
        if (keep(rng)) m.push_back(v);
    return ws(lo, hi, m);
}

std::optional<Value> power_or_none(Value base, Value exp, Value limit) {
    return oracle::checked_pow(base, exp, limit);
}

// The four definitional membership tests, written out separately.
bool defining_condition(const WindowSet& a, SetTransform op, Value m) {
    const Value n = static_cast<Value>(op.n);
    switch (op.kind) {
        case SetTransform::Kind::Shift: {
            const std::int64_t target = static_cast<std::int64_t>(m) + op.n;
            return target >= 0 && a.contains(static_cast<Value>(target));
        }
        case SetTransform::Kind::Divide:
            return a.contains(m * n);
        case SetTransform::Kind::Log: {
            const auto p = power_or_none(n, m, a.hi);
            return p && a.contains(*p);
        }
        case SetTransform::Kind::Root: {
            const auto p = power_or_none(m, n, a.hi);
            return p && a.contains(*p);
        }
    }
    return false;
}

// Every size-m strictly increasing subset of the window, lexicographic order.
std::optional<std::vector<Value>> first_subset(const WindowSet& a, std::size_t m, bool sums) {
    std::vector<Value> cand;
    for (Value v = std::max<Value>(a.lo, 1); v <= a.hi; ++v) cand.push_back(v);
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    if (m > cand.size()) return std::nullopt;
    while (true) {
        std::vector<Value> x;
        for (auto i : idx) x.push_back(cand[i]);
        bool ok = true;
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m) && ok; ++mask) {
            oracle::u128 acc = sums ? 0 : 1;
            for (std::size_t i = 0; i < m; ++i)
                if (mask >> i & 1) acc = sums ? acc + x[i] : acc * x[i];
            ok = acc <= a.hi && a.contains(static_cast<Value>(acc));
        }
        if (ok) return x;
        std::size_t i = m;
        while (i > 0 && idx[i - 1] == cand.size() - m + i - 1) --i;
        if (i == 0) return std::nullopt;
        ++idx[i - 1];
        for (std::size_t j = i; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

TEST_CASE("window construction") {
    CHECK_THROWS_AS(ws(5, 4, {}), DomainError);
    CHECK_THROWS_AS(ws(1, 4, {7}), DomainError);
    CHECK(ws(1, 10, {5, 3, 5}).members == std::vector<Value>{3, 5});
    const auto evens = WindowSet::from_spec(SetSpec::residue(2, 0), 1, 10);
    CHECK(evens.members == std::vector<Value>{2, 4, 6, 8, 10});
}

TEST_CASE("transform examples") {
    const auto l = transform(ws(1, 16, {4, 8, 9}), SetTransform::log(2));
    CHECK(l.members == std::vector<Value>{2, 3});
    CHECK(l.lo == 0);
    CHECK(l.hi == 4);
    const auto s = transform(ws(1, 10, {5, 7}), SetTransform::shift(3));
    CHECK(s.members == std::vector<Value>{2, 4});
    CHECK(s.lo == 0);
    CHECK(s.hi == 7);
    const auto r = transform(ws(1, 16, {4, 9, 16}), SetTransform::root(2));
    CHECK(r.members == std::vector<Value>{2, 3, 4});
    CHECK(r.lo == 1);
    CHECK(r.hi == 4);
    const auto d = transform(ws(3, 20, {6, 10, 15}), SetTransform::divide(5));
    CHECK(d.members == std::vector<Value>{2, 3});
    CHECK(d.lo == 1);
    CHECK(d.hi == 4);
}

TEST_CASE("transform side conditions") {
    const auto a = ws(1, 10, {2});
    CHECK_THROWS_AS(transform(a, SetTransform::divide(0)), DomainError);
    CHECK_THROWS_AS(transform(a, SetTransform::log(1)), DomainError);
    CHECK_THROWS_AS(transform(a, SetTransform::root(0)), DomainError);
    CHECK_NOTHROW(transform(a, SetTransform::shift(-4)));
}

TEST_CASE("transform identities") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 50; ++i) {
        const auto a = random_window(rng, 500);
        CHECK(transform(a, SetTransform::root(1)) == a);
        CHECK(transform(a, SetTransform::divide(1)) == a);
        const auto there = transform(a, SetTransform::shift(7));
        const auto back = transform(there, SetTransform::shift(-7));
        std::vector<Value> expect;
        for (Value v : a.members)
            if (v >= 7 && v >= back.lo && v <= back.hi) expect.push_back(v);
        CHECK(back.members == expect);
    }
}

TEST_CASE("transforms satisfy their definitions") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<std::int64_t> n_dist(1, 12);
    for (int i = 0; i < 80; ++i) {
        const auto a = random_window(rng, 3000);
        const std::int64_t n = n_dist(rng);
        for (auto op : {SetTransform::shift(n), SetTransform::shift(-n), SetTransform::divide(n),
                        SetTransform::log(n + 1), SetTransform::root(n)}) {
            const auto t = transform(a, op);
            for (Value m = t.lo; m <= t.hi; ++m) {
                const bool maps_into_window = [&] {
                    switch (op.kind) {
                        case SetTransform::Kind::Shift: {
                            const std::int64_t v = static_cast<std::int64_t>(m) + op.n;
                            return v >= static_cast<std::int64_t>(a.lo) && v <= static_cast<std::int64_t>(a.hi);
                        }
                        case SetTransform::Kind::Divide:
                            return m * static_cast<Value>(op.n) >= a.lo && m * static_cast<Value>(op.n) <= a.hi;
                        case SetTransform::Kind::Log: {
                            const auto p = power_or_none(static_cast<Value>(op.n), m, a.hi);
                            return p && *p >= a.lo;
                        }
                        case SetTransform::Kind::Root: {
                            const auto p = power_or_none(m, static_cast<Value>(op.n), a.hi);
                            return p && *p >= a.lo;
                        }
                    }
                    return false;
                }();
                REQUIRE(t.contains(m) == (maps_into_window && defining_condition(a, op, m)));
            }
        }
    }
}

TEST_CASE("find_fs_seed examples") {
    const auto all7 = ws(1, 7, {1, 2, 3, 4, 5, 6, 7});
    const auto r = find_fs_seed(all7, 3);
    CHECK(r.status == SearchStatus::Found);
    // {1,2,3} already works (sums 1..6) and precedes {1,2,4}.
    CHECK(r.seed == std::vector<Value>{1, 2, 3});
    CHECK(find_fs_seed(ws(1, 3, {1, 3}), 2).status == SearchStatus::None);
    CHECK(find_fs_seed(ws(1, 10, {5}), 1).seed == std::vector<Value>{5});
}

TEST_CASE("find_fp_seed examples") {
    CHECK(find_fp_seed(ws(1, 10, {2, 3, 6}), 2).seed == std::vector<Value>{2, 3});
    CHECK(find_fp_seed(ws(1, 10, {2, 3, 7}), 2).status == SearchStatus::None);
    CHECK(find_fp_seed(ws(1, 10, {4}), 1).seed == std::vector<Value>{4});
}

TEST_CASE("seed search budget is inconclusive rather than none") {
    std::vector<Value> odd;
    for (Value v = 1; v <= 200; v += 2) odd.push_back(v);
    const auto r = find_fs_seed(ws(1, 200, odd), 2, 10);
    CHECK(r.status == SearchStatus::Inconclusive);
}

TEST_CASE("seed searches agree with subset enumeration") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 60; ++i) {
        const auto a = random_window(rng, 60);
        for (std::size_t m = 1; m <= 3; ++m) {
            for (bool sums : {true, false}) {
                const auto want = first_subset(a, m, sums);
                const auto got = sums ? find_fs_seed(a, m) : find_fp_seed(a, m);
                REQUIRE(got.status != SearchStatus::Inconclusive);
                REQUIRE((got.status == SearchStatus::Found) == want.has_value());
                if (want) REQUIRE(got.seed == *want);
            }
        }
    }
}

TEST_CASE("ip-star examples") {
    // Two odd numbers always sum to an even one, so no size-2 FS set avoids the evens.
    const auto evens = is_ip_star_window(SetSpec::residue(2, 0), IpKind::Additive, 2, 1, 100);
    CHECK(evens.verdict == Verdict::Holds);
    const auto all = is_ip_star_window(SetSpec::residue(1, 0), IpKind::Multiplicative, 3, 1, 100);
    CHECK(all.verdict == Verdict::Holds);
    const auto odds = is_ip_star_window(SetSpec::residue(2, 1), IpKind::Multiplicative, 2, 1, 50);
    REQUIRE(odds.verdict == Verdict::Fails);
    CHECK(odds.witness == std::vector<Value>{2, 4});
    const auto evens1 = is_ip_star_window(SetSpec::residue(2, 0), IpKind::Additive, 1, 1, 100);
    REQUIRE(evens1.verdict == Verdict::Fails);
    CHECK(evens1.witness == std::vector<Value>{1});
}

TEST_CASE("ip-star witnesses avoid the set") {
    const auto spec = SetSpec::rule("n % 3 == 0", 2, 1);
    const auto v = is_ip_star_window(spec, IpKind::Additive, 2, 1, 60);
    REQUIRE(v.verdict == Verdict::Fails);
    CHECK(v.witness == std::vector<Value>{1, 4});
    for (std::uint64_t mask = 1; mask < 4; ++mask) {
        Value s = 0;
        for (int i = 0; i < 2; ++i)
            if (mask >> i & 1) s += v.witness[i];
        CHECK(!spec.contains(Natural(s)));
    }
    // Three non-multiples of 3 with no pair summing to one must share a residue, so their total is a multiple.
    CHECK(is_ip_star_window(spec, IpKind::Additive, 3, 1, 60).verdict == Verdict::Holds);
    CHECK(is_ip_star_window(spec, IpKind::Additive, 3, 1, 2000, {}, 5).verdict == Verdict::Inconclusive);
}

TEST_CASE("progression examples") {
    using P = std::pair<Value, Value>;
    CHECK(find_geometric_progressions(ws(1, 30, {3, 6, 12, 24}), 4) == std::vector<P>{{3, 2}});
    CHECK(find_geometric_progressions(ws(1, 30, {5}), 2).empty());
    CHECK(find_geometric_progressions(ws(1, 30, {2, 4, 8, 16}), 3) == std::vector<P>{{2, 2}, {4, 2}});
    CHECK(find_power_progressions(ws(1, 30, {2, 4, 8}), 3) == std::vector<Value>{2});
    CHECK(find_power_progressions(ws(1, 30, {3, 9}), 3).empty());
    CHECK(find_power_progressions(ws(1, 30, {2, 3, 4, 9, 27}), 3) == std::vector<Value>{3});
}

TEST_CASE("progression detectors agree with naive loops") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 6; ++i) {
        std::bernoulli_distribution keep(i < 3 ? 0.5 : 0.9);
        const Value hi = i < 3 ? 2000 : 100000;
        std::vector<Value> m;
        for (Value v = 1; v <= hi; ++v)
            if (keep(rng)) m.push_back(v);
        const auto a = ws(1, hi, m);
        for (std::size_t k : {2u, 3u, 4u}) {
            std::vector<std::pair<Value, Value>> gp;
            if (hi <= 2000) {
                for (Value s = 1; s <= hi; ++s)
                    for (Value h = 2; s * h <= hi; ++h) {
                        bool ok = true;
                        oracle::u128 t = s;
                        for (std::size_t e = 0; e < k && ok; ++e, t *= h) ok = t <= hi && a.contains(static_cast<Value>(t));
                        if (ok) gp.push_back({s, h});
                    }
                REQUIRE(find_geometric_progressions(a, k) == gp);
            }
            std::vector<Value> pp;
            for (Value h = 2; h <= hi; ++h) {
                bool ok = true;
                oracle::u128 t = h;
                for (std::size_t e = 1; e <= k && ok; ++e, t *= h) ok = t <= hi && a.contains(static_cast<Value>(t));
                if (ok) pp.push_back(h);
            }
            REQUIRE(find_power_progressions(a, k) == pp);
        }
    }
}

TEST_CASE("set spec membership") {
    CHECK(SetSpec::residue(1, 0).contains(Natural(12345)));
    CHECK(SetSpec::residue(3, 1).contains(Natural(10)));
    CHECK(!SetSpec::residue(3, 1).contains(Natural(11)));
    const auto ex = SetSpec::explicit_list({2, 4, 16});
    CHECK(ex.contains(Natural(16)));
    CHECK(ex.contains(PowerForm(2, 4)));
    CHECK(!ex.contains(Natural(8)));
    const auto comp = SetSpec::complement_of(ex);
    CHECK(comp.contains(Natural(8)));
    CHECK(!comp.contains(Natural(4)));
    const auto r = SetSpec::rule("n % 5", 5, 3);
    CHECK(r.contains(Natural(13)));
    CHECK(!r.contains(Natural(12)));
}

TEST_CASE("residue membership of huge power forms") {
    const auto odd = SetSpec::residue(2, 1);
    const PowerForm huge(3, Natural(1) << 100);
    CHECK(odd.contains(huge));
    CHECK(!odd.contains(PowerForm(2, Natural(1) << 100)));
    // 2^(2^100) mod 7: 2^100 mod 3 = 1, so 2^(2^100) = 2 mod 7.
    CHECK(SetSpec::residue(7, 2).contains(PowerForm(2, Natural(1) << 100)));
    CHECK(!SetSpec::explicit_list({2, 3}).contains(huge));
    CHECK_THROWS_AS(SetSpec::rule("n % 2").contains(huge), OracleRangeError);
}

TEST_CASE("oracle range") {
    const auto limited = SetSpec::residue(2, 0).with_range(1, 1000);
    CHECK(limited.contains(Natural(1000)));
    CHECK_THROWS_AS(limited.contains(Natural(1002)), OracleRangeError);
    CHECK_THROWS_AS(limited.contains(Natural(1002)), CapacityError);
}
