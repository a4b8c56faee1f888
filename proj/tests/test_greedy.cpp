#include <doctest.h>

#include "exporamsey/errors.hpp"
#include "exporamsey/greedy.hpp"
#include "exporamsey/structures.hpp"

using namespace exporamsey;

namespace {

std::vector<Natural> nats(std::initializer_list<unsigned long> xs) { return {xs.begin(), xs.end()}; }

const SetSpec kAll = SetSpec::residue(1, 0);
const SetSpec kEven = SetSpec::residue(2, 0);
const SetSpec kOdd = SetSpec::residue(2, 1);
const SetSpec kEmpty = SetSpec::explicit_list({});

std::vector<Natural> certificate_values(const GreedyFeResult& r) {
    std::vector<Natural> out;
    for (const auto& [p, member] : r.certificate->checked_elements) {
        CHECK(member);
        out.push_back(evaluate(p));
    }
    return out;
}

SetSpec squares_up_to(unsigned long limit) {
    std::vector<Natural> s;
    for (unsigned long i = 1; i * i <= limit; ++i) s.push_back(i * i);
    return SetSpec::explicit_list(s);
}

// Recomputes the fegen condition from scratch: every non-empty F over the
// chosen values and every admissible t, with plain mpz powers.
bool fegen_condition(const SetSpec& a, const GreedyState& s) {
    const std::size_t m = s.chosen.size();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
        std::size_t min_f = m;
        Natural acc = s.type == FeType::One ? 0 : 1;
        for (std::size_t i = 0; i < m; ++i) {
            if (!(mask >> i & 1)) continue;
            min_f = std::min(min_f, i);
            if (s.type == FeType::One) acc += s.chosen[i];
            else acc *= s.chosen[i];
        }
        const Natural l = s.level_max[min_f];
        for (Natural t = s.type == FeType::One ? 2 : 1; t <= l; ++t) {
            Natural v;
            if (s.type == FeType::One) mpz_pow_ui(v.get_mpz_t(), t.get_mpz_t(), acc.get_ui());
            else mpz_pow_ui(v.get_mpz_t(), acc.get_mpz_t(), t.get_ui());
            if (!a.contains(v)) return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("greedy_fe1 examples") {
    const auto r = greedy_fe1(kAll, 2, {2, 100});
    REQUIRE(r.success);
    CHECK(r.chosen == nats({2, 3, 4}));
    CHECK(certificate_values(r) == nats({2, 3, 4, 8, 16, 81, 4096}));
    CHECK(r.level_max == nats({2, 8}));

    const auto even = greedy_fe1(kEven, 2, {2, 10000});
    CHECK(!even.success);
    CHECK(even.failed_step == 2);
    CHECK(even.reason == "empty intersection");
    CHECK(even.chosen == nats({2, 4}));
    CHECK(even.level_max == nats({2, 16}));

    const auto none = greedy_fe1(kEmpty, 2, {2, 100});
    CHECK(!none.success);
    CHECK(none.failed_step == 0);
    CHECK(none.reason == "no x_0");
}

TEST_CASE("greedy_fe2 examples") {
    const auto r = greedy_fe2(kAll, 2, {2, 100});
    REQUIRE(r.success);
    CHECK(r.chosen == nats({2, 3, 4}));
    CHECK(certificate_values(r) == nats({2, 3, 4, 9, 16, 64, 262144}));

    CHECK(greedy_fe2(kEmpty, 2, {2, 100}).reason == "no x_0");

    const auto odd = greedy_fe2(SetSpec::rule("n % 2 == 1 and n >= 3", 2, 1), 1, {2, 100});
    REQUIRE(odd.success);
    CHECK(odd.chosen == nats({3, 5}));
    CHECK(certificate_values(odd) == nats({3, 5, 125}));
}

TEST_CASE("greedy depth zero picks x_0 only") {
    const auto r = greedy_fe1(kOdd, 0, {2, 100});
    REQUIRE(r.success);
    CHECK(r.chosen == nats({3}));
    CHECK(certificate_values(r) == nats({3}));
}

TEST_CASE("greedy reports the oracle range") {
    const auto limited = kAll.with_range(1, 1000);
    const auto r = greedy_fe1(limited, 2, {2, 100});
    CHECK(!r.success);
    CHECK(r.reason == "oracle range");
    REQUIRE(r.offending);
    CHECK(r.failed_step == 2);
}

TEST_CASE("greedy choices satisfy the recurrence") {
    // Everything except [32, 63].
    const auto a = SetSpec::rule("ilog2(n) != 5", 2, 1);
    const auto r = greedy_fe1(a, 3, {2, 200});
    REQUIRE(r.success);
    REQUIRE(r.level_max.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        const Natural& x = r.chosen[i + 1];
        CHECK(a.contains(x));
        CHECK(x > r.chosen[i]);
        for (unsigned long j = 2; j <= r.level_max[i]; ++j) {
            Natural v;
            mpz_ui_pow_ui(v.get_mpz_t(), j, x.get_ui());
            REQUIRE(a.contains(v));
        }
        // least choice: nothing between the previous x and this one qualifies
        for (Natural m = r.chosen[i] + 1; m < x; ++m) {
            bool ok = a.contains(m);
            for (unsigned long j = 2; ok && j <= r.level_max[i]; ++j) {
                Natural v;
                mpz_ui_pow_ui(v.get_mpz_t(), j, m.get_ui());
                ok = a.contains(v);
            }
            REQUIRE(!ok);
        }
    }
    CHECK(greedy_fe1(a, 3, {2, 200}).chosen == r.chosen);
}

TEST_CASE("certificates detect tampering") {
    const auto r = greedy_fe1(kAll, 2, {2, 100});
    REQUIRE(r.success);
    const FeCertificate good = *r.certificate;
    CHECK(verify_certificate(kAll, good));

    FeCertificate missing = good;
    missing.checked_elements.pop_back();
    CHECK(!verify_certificate(kAll, missing));

    FeCertificate extra = good;
    extra.checked_elements.emplace_back(normalize(5), true);
    CHECK(!verify_certificate(kAll, extra));

    FeCertificate swapped = good;
    swapped.checked_elements[3].first = normalize(7);
    CHECK(!verify_certificate(kAll, swapped));

    FeCertificate reseeded = good;
    reseeded.seeds = nats({2, 3, 5});
    CHECK(!verify_certificate(kAll, reseeded));

    FeCertificate retyped = good;
    retyped.type = FeType::Two;
    CHECK(!verify_certificate(kAll, retyped));

    // Same elements, but the set no longer contains 4096.
    CHECK(!verify_certificate(SetSpec::complement_of(SetSpec::explicit_list({4096})), good));

    FeCertificate unchecked = good;
    unchecked.checked_elements[0].second = false;
    CHECK(!verify_certificate(kAll, unchecked));
}

TEST_CASE("fegen1 examples") {
    const auto y = nats({1, 2, 4, 8});
    const auto r = search_fegen1(kAll, y, FSpec::constant_value(2), 2);
    REQUIRE(r.outcome == SearchOutcome::Success);
    CHECK(r.state->chosen == nats({1, 2}));
    CHECK(r.state->blocks == std::vector<std::vector<std::size_t>>{{0}, {1}});

    const auto pow2 = SetSpec::rule("n > 0 and n == ipow(2, ilog2(n))", 2, 1);
    const auto p = search_fegen1(pow2, y, FSpec::constant_value(2), 2);
    REQUIRE(p.outcome == SearchOutcome::Success);
    CHECK(p.state->chosen == nats({1, 2}));

    const auto odd = search_fegen1(kOdd, nats({1, 2}), FSpec::constant_value(2), 1);
    CHECK(odd.outcome == SearchOutcome::Failure);
}

TEST_CASE("fegen2 examples") {
    const auto r = search_fegen2(kAll, nats({2, 3, 5}), FSpec::constant_value(2), 2);
    REQUIRE(r.outcome == SearchOutcome::Success);
    CHECK(r.state->chosen == nats({2, 3}));

    CHECK(search_fegen2(squares_up_to(10000), nats({2, 3}), FSpec::constant_value(2), 1).outcome ==
          SearchOutcome::Failure);
    CHECK(search_fegen2(kEmpty, nats({2, 3}), FSpec::constant_value(2), 1).outcome == SearchOutcome::Failure);
}

TEST_CASE("fegen results keep block discipline and the full condition") {
    const auto a = SetSpec::rule("n % 3 != 0", 2, 1);
    const auto y = nats({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    for (auto type : {FeType::One, FeType::Two}) {
        // 3^s is always a multiple of 3, so type I stops at t = 2.
        const auto r = type == FeType::One ? search_fegen1(a, y, FSpec::constant_value(2), 3)
                                           : search_fegen2(a, y, FSpec::constant_value(3), 3);
        REQUIRE(r.outcome == SearchOutcome::Success);
        const auto& s = *r.state;
        REQUIRE(s.blocks.size() == 3);
        for (std::size_t i = 0; i < s.blocks.size(); ++i) {
            Natural acc = type == FeType::One ? 0 : 1;
            for (auto idx : s.blocks[i]) acc = type == FeType::One ? Natural(acc + y[idx]) : Natural(acc * y[idx]);
            CHECK(acc == s.chosen[i]);
            if (i > 0) CHECK(s.blocks[i].front() > s.blocks[i - 1].back());
        }
        CHECK(fegen_condition(a, s));
        CHECK(verify_fegen(a, s));

        GreedyState broken = s;
        broken.chosen[0] += 1;
        CHECK(!verify_fegen(a, broken));
        GreedyState overlapping = s;
        overlapping.blocks[1].insert(overlapping.blocks[1].begin(), overlapping.blocks[0].back());
        CHECK(!verify_fegen(a, overlapping));
    }
}

TEST_CASE("fegen with the max-fe1 choice function") {
    const auto r = search_fegen1(kAll, nats({2, 3, 4, 5}), FSpec::max_fe1(), 3);
    REQUIRE(r.outcome == SearchOutcome::Success);
    CHECK(r.state->chosen == nats({2, 3, 4}));
    CHECK(r.state->level_max == nats({1, 2, 8}));
    CHECK(fegen_condition(kAll, *r.state));
}

TEST_CASE("fegen budget is inconclusive") {
    BlockLimits tiny;
    tiny.budget = 3;
    const auto r = search_fegen1(kOdd, nats({1, 2, 3, 4, 5, 6}), FSpec::constant_value(2), 2, tiny);
    CHECK(r.outcome == SearchOutcome::Inconclusive);
}

TEST_CASE("verify_fecor examples") {
    using S = CheckVerdict::Status;
    const auto all = verify_fecor(kAll, nats({2, 3}), nats({2, 3}), 1);
    CHECK(all.fs.status == S::Holds);
    CHECK(all.fe1.status == S::Holds);
    CHECK(all.fp.status == S::Holds);
    CHECK(all.fe2.status == S::Holds);

    const auto odd = verify_fecor(kOdd, nats({3, 5}), std::nullopt, 1);
    CHECK(odd.fs.status == S::Fails);
    CHECK(odd.fs.element == "8");
    CHECK(odd.fe1.status == S::Holds);
    CHECK(odd.fp.status == S::Skipped);
    CHECK(odd.fe2.status == S::Skipped);

    const auto even = verify_fecor(kEven, std::nullopt, nats({2, 4}), 1);
    CHECK(even.fp.status == S::Holds);
    CHECK(even.fe2.status == S::Holds);

    const auto limited = verify_fecor(kAll.with_range(1, 100), nats({2, 3, 4}), std::nullopt, 2);
    CHECK(limited.fs.status == S::Holds);
    CHECK(limited.fe1.status == S::Inconclusive);
}
