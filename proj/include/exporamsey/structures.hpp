#pragma once

#include <cstddef>
#include <vector>

#include "exporamsey/config.hpp"
#include "exporamsey/power_form.hpp"

namespace exporamsey {

/// Largest seed set accepted by fs/fp (2^25 subsets).
inline constexpr std::size_t kSubsetGuard = 25;

/// One level of an exponential IP construction. `elements` ascend by value.
struct FeLevel {
    std::size_t level = 0;
    std::vector<PowerForm> elements;
    std::size_t dropped_count = 0;
};

/// Sums of non-empty subsets of X, ascending and deduplicated.
std::vector<Natural> fs(const std::vector<Natural>& seeds, const Caps& caps = {});

/// Products of non-empty subsets of X, ascending and deduplicated.
std::vector<Natural> fp(const std::vector<Natural>& seeds, const Caps& caps = {});

/// FE^I_level: each new seed becomes the exponent of every earlier element.
/// Seeds must be strictly increasing and level + 1 <= seeds.size().
FeLevel fe1(const std::vector<PowerForm>& seeds, std::size_t level, const Caps& caps = {});

/// FE^II_level: each new seed becomes the base raised to every earlier element.
FeLevel fe2(const std::vector<PowerForm>& seeds, std::size_t level, const Caps& caps = {});

/// Convenience: canonicalizes explicit seeds first.
std::vector<PowerForm> to_power_forms(const std::vector<Natural>& seeds, const Caps& caps = {});

/// { base^s : s in exponents }.
std::vector<Natural> pow_image_base(const Natural& base, const std::vector<Natural>& exponents,
                                    const Caps& caps = {});

/// { s^exponent : s in bases }.
std::vector<Natural> pow_image_exp(const std::vector<Natural>& bases, const Natural& exponent,
                                   const Caps& caps = {});

}  // namespace exporamsey
