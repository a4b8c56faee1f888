#pragma once

#include <memory>
#include <string>

#include "exporamsey/config.hpp"
#include "exporamsey/power_form.hpp"

namespace exporamsey {

namespace rule_detail {
struct Node;
}

/// A coloring rule compiled from the DSL:
///
///   expr    := or
///   or      := and { ("or" | "||") and }
///   and     := not { ("and" | "&&") not }
///   not     := ("not" | "!") not | cmp
///   cmp     := sum [ ("<" | "<=" | ">" | ">=" | "==" | "!=") sum ]
///   sum     := product { ("+" | "-") product }
///   product := unary { ("*" | "/" | "%") unary }
///   unary   := "-" unary | primary
///   primary := integer | "n" | "(" expr ")"
///            | "ilog2" "(" expr ")" | "ipow" "(" expr "," expr ")"
///            | "if" "(" expr "," expr "," expr ")"
///
/// Arithmetic is exact and truncating; comparisons and logic yield 0 or 1.
/// The top-level value is reduced into [0, k).
class ColorRule {
public:
    ColorRule(std::string source, unsigned k, std::shared_ptr<const rule_detail::Node> root);

    const std::string& source() const noexcept { return source_; }
    unsigned k() const noexcept { return k_; }

    /// Raw expression value at n. DomainError on ilog2 of a non-positive
    /// argument, division by zero, or an ipow outside the caps.
    Natural evaluate(const Natural& n, const Caps& caps = {}) const;

    /// evaluate(n) reduced into [0, k).
    unsigned color(const Natural& n, const Caps& caps = {}) const;

private:
    std::string source_;
    unsigned k_;
    std::shared_ptr<const rule_detail::Node> root_;
};

/// SyntaxError (with 0-based position) on malformed input; DomainError if k < 1.
ColorRule parse_rule(const std::string& source, unsigned k);

}  // namespace exporamsey
