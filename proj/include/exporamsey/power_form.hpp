#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>

#include <gmpxx.h>

#include "exporamsey/config.hpp"

namespace exporamsey {

using Natural = mpz_class;

/// A natural >= 2 written canonically as root^exponent with a root that is not
/// itself a perfect power. Equal values have equal (root, exponent) pairs, so
/// structural equality is value equality. Numeric order goes through compare().
class PowerForm {
public:
    /// Builds from an already canonical pair. Throws DomainError when root < 2,
    /// exponent < 1 or root is a perfect power.
    PowerForm(Natural root, Natural exponent);

    const Natural& root() const noexcept { return root_; }
    const Natural& exponent() const noexcept { return exponent_; }

    friend bool operator==(const PowerForm& a, const PowerForm& b) {
        return a.root_ == b.root_ && a.exponent_ == b.exponent_;
    }

    /// "root^exp", or the decimal value when exponent is 1.
    std::string to_string() const;

private:
    struct Trusted {};
    PowerForm(Natural root, Natural exponent, Trusted)
        : root_(std::move(root)), exponent_(std::move(exponent)) {}

    Natural root_;
    Natural exponent_;

    friend PowerForm normalize(const Natural& n, const Caps& caps);
    friend PowerForm pow(const PowerForm& a, const PowerForm& b, const Caps& caps);
};

/// Largest e with n = r^e; r is then not a perfect power.
/// DomainError if n < 2, CapacityError if n exceeds value_bit_cap.
PowerForm normalize(const Natural& n, const Caps& caps = {});

/// a^value(b). b must be evaluable; the result exponent must fit exp_bit_cap.
PowerForm pow(const PowerForm& a, const PowerForm& b, const Caps& caps = {});

/// Numeric three-way comparison. Exact for any pair of power forms.
std::strong_ordering compare(const PowerForm& a, const PowerForm& b, const Caps& caps = {});

bool is_evaluable(const PowerForm& a, const Caps& caps = {});

/// Materializes root^exponent. CapacityError when above value_bit_cap.
Natural evaluate(const PowerForm& a, const Caps& caps = {});

/// Strict weak order by numeric value, usable with std::sort / std::set.
struct NumericLess {
    Caps caps;
    bool operator()(const PowerForm& a, const PowerForm& b) const {
        return compare(a, b, caps) == std::strong_ordering::less;
    }
};

struct PowerFormHash {
    std::size_t operator()(const PowerForm& a) const noexcept;
};

/// Decimal string of a natural, no sign or exponent notation.
std::string decimal(const Natural& n);

/// Parses a non-negative decimal string. DomainError on anything else.
Natural parse_natural(const std::string& text);

}  // namespace exporamsey
