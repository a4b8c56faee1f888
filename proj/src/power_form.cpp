#include "exporamsey/power_form.hpp"

#include <cstdlib>
#include <string>

#include <mpfr.h>

#include "exporamsey/errors.hpp"

namespace exporamsey {

namespace {

std::size_t bit_length(const Natural& n) {
    return n == 0 ? 0 : mpz_sizeinbase(n.get_mpz_t(), 2);
}

// Exact k-th root of n if one exists.
bool exact_root(const Natural& n, unsigned long k, Natural& root) {
    return mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0;
}

unsigned long next_prime(unsigned long p) {
    mpz_class q = p;
    mpz_nextprime(q.get_mpz_t(), q.get_mpz_t());
    return q.get_ui();
}

bool is_perfect_power(const Natural& n) {
    return mpz_perfect_power_p(n.get_mpz_t()) != 0;
}

// RAII wrapper over an MPFR variable.
class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t precision) { mpfr_init2(value_, precision); }
    ~BigFloat() { mpfr_clear(value_); }
    BigFloat(const BigFloat&) = delete;
    BigFloat& operator=(const BigFloat&) = delete;

    mpfr_ptr get() { return value_; }
    mpfr_srcptr get() const { return value_; }

private:
    mpfr_t value_;
};

// Certified enclosure [lower, upper] of exponent * log2(root).
void log2_enclosure(const PowerForm& a, BigFloat& lower, BigFloat& upper) {
    mpfr_set_z(lower.get(), a.root().get_mpz_t(), MPFR_RNDD);
    mpfr_log2(lower.get(), lower.get(), MPFR_RNDD);
    mpfr_mul_z(lower.get(), lower.get(), a.exponent().get_mpz_t(), MPFR_RNDD);

    mpfr_set_z(upper.get(), a.root().get_mpz_t(), MPFR_RNDU);
    mpfr_log2(upper.get(), upper.get(), MPFR_RNDU);
    mpfr_mul_z(upper.get(), upper.get(), a.exponent().get_mpz_t(), MPFR_RNDU);
}

std::strong_ordering compare_by_logarithm(const PowerForm& a, const PowerForm& b) {
    // bits(r^e) lies in [(bits(r) - 1) * e + 1, bits(r) * e], exactly.
    const Natural a_bits = static_cast<unsigned long>(bit_length(a.root()));
    const Natural b_bits = static_cast<unsigned long>(bit_length(b.root()));
    if (a_bits * a.exponent() < (b_bits - 1) * b.exponent() + 1) return std::strong_ordering::less;
    if (b_bits * b.exponent() < (a_bits - 1) * a.exponent() + 1) return std::strong_ordering::greater;

    mpfr_prec_t precision = 128;
    // Distinct canonical forms have distinct values, so the enclosures separate
    // once the precision is high enough.
    for (;;) {
        BigFloat a_lo(precision), a_hi(precision), b_lo(precision), b_hi(precision);
        log2_enclosure(a, a_lo, a_hi);
        log2_enclosure(b, b_lo, b_hi);
        if (mpfr_less_p(a_hi.get(), b_lo.get())) return std::strong_ordering::less;
        if (mpfr_greater_p(a_lo.get(), b_hi.get())) return std::strong_ordering::greater;
        precision *= 2;
    }
}

}  // namespace

PowerForm::PowerForm(Natural root, Natural exponent)
    : root_(std::move(root)), exponent_(std::move(exponent)) {
    if (root_ < 2) throw DomainError("power form root must be >= 2");
    if (exponent_ < 1) throw DomainError("power form exponent must be >= 1");
    if (is_perfect_power(root_)) throw DomainError("power form root " + decimal(root_) + " is a perfect power");
}

std::string PowerForm::to_string() const {
    if (exponent_ == 1) return decimal(root_);
    return decimal(root_) + "^" + decimal(exponent_);
}

PowerForm normalize(const Natural& n, const Caps& caps) {
    if (n < 2) throw DomainError("normalize: input " + decimal(n) + " is below 2");
    const std::size_t bits = bit_length(n);
    if (bits > caps.value_bit_cap) {
        throw CapacityError("normalize: input of " + std::to_string(bits) + " bits exceeds value_bit_cap");
    }
    if (!is_perfect_power(n)) return PowerForm(n, 1, PowerForm::Trusted{});

    // n = r^e with r not a perfect power has an exact p-th root iff p divides e,
    // so peel prime roots until what is left is not a perfect power.
    Natural rest = n, root;
    Natural exponent = 1;
    while (is_perfect_power(rest)) {
        const std::size_t rest_bits = bit_length(rest);
        bool peeled = false;
        for (unsigned long p = 2; p <= rest_bits && !peeled; p = next_prime(p)) {
            if (exact_root(rest, p, root)) {
                rest = root;
                exponent *= p;
                peeled = true;
            }
        }
        if (!peeled) break;
    }
    return PowerForm(std::move(rest), std::move(exponent), PowerForm::Trusted{});
}

PowerForm pow(const PowerForm& a, const PowerForm& b, const Caps& caps) {
    if (!is_evaluable(b, caps)) {
        throw CapacityError("pow: symbolic exponent unsupported (" + b.to_string() + " is not evaluable)");
    }
    Natural exponent = a.exponent() * evaluate(b, caps);
    if (bit_length(exponent) > caps.exp_bit_cap) {
        throw CapacityError("pow: result exponent exceeds exp_bit_cap");
    }
    return PowerForm(a.root(), std::move(exponent), PowerForm::Trusted{});
}

bool is_evaluable(const PowerForm& a, const Caps& caps) {
    const Natural root_bits = static_cast<unsigned long>(bit_length(a.root()));
    const Natural cap = static_cast<unsigned long>(caps.value_bit_cap);
    // (bits(r) - 1) * e + 1 <= bits(r^e) <= bits(r) * e
    if (root_bits * a.exponent() <= cap) return true;
    if ((root_bits - 1) * a.exponent() + 1 > cap) return false;
    Natural value;
    mpz_pow_ui(value.get_mpz_t(), a.root().get_mpz_t(), a.exponent().get_ui());
    return bit_length(value) <= caps.value_bit_cap;
}

Natural evaluate(const PowerForm& a, const Caps& caps) {
    if (!is_evaluable(a, caps)) {
        throw CapacityError("evaluate: " + a.to_string() + " exceeds value_bit_cap");
    }
    Natural value;
    mpz_pow_ui(value.get_mpz_t(), a.root().get_mpz_t(), a.exponent().get_ui());
    return value;
}

std::strong_ordering compare(const PowerForm& a, const PowerForm& b, const Caps& caps) {
    if (a == b) return std::strong_ordering::equal;
    if (a.root() == b.root()) {
        return a.exponent() < b.exponent() ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (is_evaluable(a, caps) && is_evaluable(b, caps)) {
        return evaluate(a, caps) < evaluate(b, caps) ? std::strong_ordering::less
                                                     : std::strong_ordering::greater;
    }
    return compare_by_logarithm(a, b);
}

std::size_t PowerFormHash::operator()(const PowerForm& a) const noexcept {
    std::size_t h = mpz_get_ui(a.root().get_mpz_t());
    h ^= mpz_get_ui(a.exponent().get_mpz_t()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= bit_length(a.exponent()) * 0x100000001b3ULL;
    return h;
}

std::string decimal(const Natural& n) { return n.get_str(10); }

Natural parse_natural(const std::string& text) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
        throw DomainError("not a natural number: '" + text + "'");
    }
    return Natural(text, 10);
}

}  // namespace exporamsey
