#include "exporamsey/structures.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "exporamsey/errors.hpp"

namespace exporamsey {

namespace {

std::size_t bit_length(const Natural& n) { return n == 0 ? 0 : mpz_sizeinbase(n.get_mpz_t(), 2); }

void sort_unique(std::vector<Natural>& values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
}

void check_seed_naturals(const std::vector<Natural>& seeds, const char* name) {
    if (seeds.size() > kSubsetGuard) {
        throw CapacityError(std::string(name) + ": " + std::to_string(seeds.size()) +
                            " seeds exceed the subset guard of " + std::to_string(kSubsetGuard));
    }
    for (const auto& x : seeds) {
        if (x < 1) throw DomainError(std::string(name) + ": seeds must be >= 1");
    }
}

// Closure of a finite set under a commutative operation on subsets:
// S <- S u {x} u (S op x) for each seed x. Equivalent to enumerating all
// non-empty subsets but merges duplicates as it goes.
template <typename Combine>
std::vector<Natural> subset_closure(const std::vector<Natural>& seeds, Combine combine) {
    std::vector<Natural> result;
    for (const auto& x : seeds) {
        std::vector<Natural> next = result;
        next.reserve(2 * result.size() + 1);
        for (const auto& s : result) next.push_back(combine(s, x));
        next.push_back(x);
        sort_unique(next);
        result = std::move(next);
    }
    return result;
}

void check_fe_seeds(const std::vector<PowerForm>& seeds, std::size_t level, const Caps& caps) {
    if (level + 1 > seeds.size()) {
        throw DomainError("fe: level " + std::to_string(level) + " needs at least " +
                          std::to_string(level + 1) + " seeds");
    }
    for (std::size_t i = 1; i < seeds.size(); ++i) {
        if (compare(seeds[i - 1], seeds[i], caps) != std::strong_ordering::less) {
            throw DomainError("fe: seed sequence is not strictly increasing at index " + std::to_string(i));
        }
    }
}

using FormSet = std::unordered_set<PowerForm, PowerFormHash>;

FeLevel finish(std::size_t level, const FormSet& set, std::size_t dropped, const Caps& caps) {
    FeLevel out;
    out.level = level;
    out.dropped_count = dropped;
    out.elements.assign(set.begin(), set.end());
    std::sort(out.elements.begin(), out.elements.end(), NumericLess{caps});
    return out;
}

// Shared driver for both recursions; `step(y, x)` produces the new element
// contributed by an earlier element y and the incoming seed x.
template <typename Step>
FeLevel fe_recursion(const std::vector<PowerForm>& seeds, std::size_t level, const Caps& caps, Step step) {
    check_fe_seeds(seeds, level, caps);
    FormSet current{seeds[0]};
    std::size_t dropped = 0;
    for (std::size_t n = 1; n <= level; ++n) {
        const PowerForm& x = seeds[n];
        FormSet next = current;
        for (const auto& y : current) {
            try {
                next.insert(step(y, x));
            } catch (const CapacityError&) {
                ++dropped;
            }
        }
        next.insert(x);
        current = std::move(next);
    }
    return finish(level, current, dropped, caps);
}

}  // namespace

std::vector<Natural> fs(const std::vector<Natural>& seeds, const Caps& caps) {
    check_seed_naturals(seeds, "fs");
    auto out = subset_closure(seeds, [](const Natural& s, const Natural& x) { return Natural(s + x); });
    if (!out.empty() && bit_length(out.back()) > caps.value_bit_cap) {
        throw CapacityError("fs: sum exceeds value_bit_cap");
    }
    return out;
}

std::vector<Natural> fp(const std::vector<Natural>& seeds, const Caps& caps) {
    check_seed_naturals(seeds, "fp");
    std::size_t total_bits = 0;
    for (const auto& x : seeds) total_bits += bit_length(x);
    if (total_bits > caps.value_bit_cap) {
        // The full product bounds every subset product; only check exactly when close.
        Natural product = 1;
        for (const auto& x : seeds) product *= x;
        if (bit_length(product) > caps.value_bit_cap) throw CapacityError("fp: product exceeds value_bit_cap");
    }
    return subset_closure(seeds, [](const Natural& s, const Natural& x) { return Natural(s * x); });
}

FeLevel fe1(const std::vector<PowerForm>& seeds, std::size_t level, const Caps& caps) {
    return fe_recursion(seeds, level, caps,
                        [&](const PowerForm& y, const PowerForm& x) { return pow(y, x, caps); });
}

FeLevel fe2(const std::vector<PowerForm>& seeds, std::size_t level, const Caps& caps) {
    return fe_recursion(seeds, level, caps,
                        [&](const PowerForm& y, const PowerForm& x) { return pow(x, y, caps); });
}

std::vector<PowerForm> to_power_forms(const std::vector<Natural>& seeds, const Caps& caps) {
    std::vector<PowerForm> out;
    out.reserve(seeds.size());
    for (const auto& s : seeds) out.push_back(normalize(s, caps));
    return out;
}

std::vector<Natural> pow_image_base(const Natural& base, const std::vector<Natural>& exponents,
                                    const Caps& caps) {
    if (base < 2) throw DomainError("pow_image_base: base must be >= 2");
    std::vector<Natural> out;
    out.reserve(exponents.size());
    const std::size_t base_bits = bit_length(base);
    for (const auto& s : exponents) {
        if (s < 0) throw DomainError("pow_image_base: negative exponent");
        if (!s.fits_ulong_p() || (base_bits - 1) * s.get_ui() + 1 > caps.value_bit_cap) {
            throw CapacityError("pow_image_base: " + decimal(base) + "^" + decimal(s) + " exceeds value_bit_cap");
        }
        Natural v;
        mpz_pow_ui(v.get_mpz_t(), base.get_mpz_t(), s.get_ui());
        if (bit_length(v) > caps.value_bit_cap) throw CapacityError("pow_image_base: result exceeds value_bit_cap");
        out.push_back(std::move(v));
    }
    sort_unique(out);
    return out;
}

std::vector<Natural> pow_image_exp(const std::vector<Natural>& bases, const Natural& exponent,
                                   const Caps& caps) {
    if (exponent < 1) throw DomainError("pow_image_exp: exponent must be >= 1");
    std::vector<Natural> out;
    out.reserve(bases.size());
    for (const auto& s : bases) {
        if (s < 0) throw DomainError("pow_image_exp: negative base");
        const std::size_t bits = bit_length(s);
        if (bits > 1 && (!exponent.fits_ulong_p() || (bits - 1) * exponent.get_ui() + 1 > caps.value_bit_cap)) {
            throw CapacityError("pow_image_exp: " + decimal(s) + "^" + decimal(exponent) + " exceeds value_bit_cap");
        }
        Natural v;
        if (bits <= 1) {
            v = s;  // 0^n = 0 and 1^n = 1
        } else {
            mpz_pow_ui(v.get_mpz_t(), s.get_mpz_t(), exponent.get_ui());
        }
        if (bit_length(v) > caps.value_bit_cap) throw CapacityError("pow_image_exp: result exceeds value_bit_cap");
        out.push_back(std::move(v));
    }
    sort_unique(out);
    return out;
}

}  // namespace exporamsey
