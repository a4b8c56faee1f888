#include "exporamsey/rule.hpp"

#include <cctype>
#include <utility>
#include <vector>

#include "exporamsey/errors.hpp"

namespace exporamsey {

namespace rule_detail {

enum class Op {
    Literal, Variable, Negate, Not, Add, Sub, Mul, Div, Mod,
    Less, LessEq, Greater, GreaterEq, Equal, NotEqual, And, Or,
    Ilog2, Ipow, If,
};

struct Node {
    Op op;
    Natural literal;
    std::vector<std::shared_ptr<const Node>> args;
};

}  // namespace rule_detail

namespace {

using rule_detail::Node;
using rule_detail::Op;
using NodePtr = std::shared_ptr<const Node>;

enum class TokenKind { Number, Identifier, Symbol, End };

struct Token {
    TokenKind kind;
    std::string text;
    std::size_t position;
};

std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < src.size()) {
        const char ch = src[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
        } else if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            tokens.push_back({TokenKind::Number, src.substr(i, j - i), i});
            i = j;
        } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            tokens.push_back({TokenKind::Identifier, src.substr(i, j - i), i});
            i = j;
        } else {
            static const char* two_char[] = {"<=", ">=", "==", "!=", "&&", "||"};
            bool matched = false;
            for (const char* op : two_char) {
                if (src.compare(i, 2, op) == 0) {
                    tokens.push_back({TokenKind::Symbol, op, i});
                    i += 2;
                    matched = true;
                    break;
                }
            }
            if (matched) continue;
            if (std::string("+-*/%<>()!,").find(ch) == std::string::npos) {
                throw SyntaxError(i, std::string("unexpected character '") + ch + "'");
            }
            tokens.push_back({TokenKind::Symbol, std::string(1, ch), i});
            ++i;
        }
    }
    tokens.push_back({TokenKind::End, "", src.size()});
    return tokens;
}

NodePtr make(Op op, std::vector<NodePtr> args = {}, Natural literal = 0) {
    return std::make_shared<const Node>(Node{op, std::move(literal), std::move(args)});
}

class Parser {
public:
    explicit Parser(const std::string& src) : tokens_(tokenize(src)) {}

    NodePtr parse() {
        NodePtr root = parse_or();
        if (peek().kind != TokenKind::End) fail("unexpected '" + peek().text + "'");
        return root;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }

    bool accept(const char* text) {
        const Token& t = peek();
        if ((t.kind == TokenKind::Symbol || t.kind == TokenKind::Identifier) && t.text == text) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(const char* text) {
        if (!accept(text)) fail(std::string("expected '") + text + "'");
    }

    [[noreturn]] void fail(const std::string& what) const {
        const Token& t = peek();
        throw SyntaxError(t.position, t.kind == TokenKind::End ? what + " before end of input" : what);
    }

    NodePtr parse_or() {
        NodePtr lhs = parse_and();
        while (accept("or") || accept("||")) lhs = make(Op::Or, {lhs, parse_and()});
        return lhs;
    }

    NodePtr parse_and() {
        NodePtr lhs = parse_not();
        while (accept("and") || accept("&&")) lhs = make(Op::And, {lhs, parse_not()});
        return lhs;
    }

    NodePtr parse_not() {
        if (accept("not") || accept("!")) return make(Op::Not, {parse_not()});
        return parse_comparison();
    }

    NodePtr parse_comparison() {
        NodePtr lhs = parse_sum();
        static const std::pair<const char*, Op> ops[] = {
            {"<=", Op::LessEq}, {">=", Op::GreaterEq}, {"==", Op::Equal},
            {"!=", Op::NotEqual}, {"<", Op::Less}, {">", Op::Greater},
        };
        for (const auto& [text, op] : ops) {
            if (accept(text)) return make(op, {lhs, parse_sum()});
        }
        return lhs;
    }

    NodePtr parse_sum() {
        NodePtr lhs = parse_product();
        for (;;) {
            if (accept("+")) lhs = make(Op::Add, {lhs, parse_product()});
            else if (accept("-")) lhs = make(Op::Sub, {lhs, parse_product()});
            else return lhs;
        }
    }

    NodePtr parse_product() {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (accept("*")) lhs = make(Op::Mul, {lhs, parse_unary()});
            else if (accept("/")) lhs = make(Op::Div, {lhs, parse_unary()});
            else if (accept("%")) lhs = make(Op::Mod, {lhs, parse_unary()});
            else return lhs;
        }
    }

    NodePtr parse_unary() {
        if (accept("-")) return make(Op::Negate, {parse_unary()});
        return parse_primary();
    }

    std::vector<NodePtr> parse_call(std::size_t arity) {
        expect("(");
        std::vector<NodePtr> args;
        for (std::size_t i = 0; i < arity; ++i) {
            if (i > 0) expect(",");
            args.push_back(parse_or());
        }
        expect(")");
        return args;
    }

    NodePtr parse_primary() {
        const Token& t = peek();
        if (t.kind == TokenKind::Number) {
            ++pos_;
            return make(Op::Literal, {}, Natural(t.text, 10));
        }
        if (t.kind == TokenKind::Identifier) {
            const std::string name = t.text;
            if (name == "n") {
                ++pos_;
                return make(Op::Variable);
            }
            if (name == "ilog2") {
                ++pos_;
                return make(Op::Ilog2, parse_call(1));
            }
            if (name == "ipow") {
                ++pos_;
                return make(Op::Ipow, parse_call(2));
            }
            if (name == "if") {
                ++pos_;
                return make(Op::If, parse_call(3));
            }
            fail("unknown identifier '" + name + "'");
        }
        if (accept("(")) {
            NodePtr inner = parse_or();
            expect(")");
            return inner;
        }
        fail(t.kind == TokenKind::End ? "expected an operand" : "unexpected '" + t.text + "'");
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

Natural truth(bool b) { return b ? 1 : 0; }

Natural eval(const Node& node, const Natural& n, const Caps& caps) {
    auto arg = [&](std::size_t i) { return eval(*node.args[i], n, caps); };
    switch (node.op) {
    case Op::Literal: return node.literal;
    case Op::Variable: return n;
    case Op::Negate: return -arg(0);
    case Op::Not: return truth(arg(0) == 0);
    case Op::Add: return arg(0) + arg(1);
    case Op::Sub: return arg(0) - arg(1);
    case Op::Mul: return arg(0) * arg(1);
    case Op::Div:
    case Op::Mod: {
        const Natural lhs = arg(0);
        const Natural rhs = arg(1);
        if (rhs == 0) throw DomainError("division by zero");
        Natural out;
        if (node.op == Op::Div) mpz_tdiv_q(out.get_mpz_t(), lhs.get_mpz_t(), rhs.get_mpz_t());
        else mpz_tdiv_r(out.get_mpz_t(), lhs.get_mpz_t(), rhs.get_mpz_t());
        return out;
    }
    case Op::Less: return truth(arg(0) < arg(1));
    case Op::LessEq: return truth(arg(0) <= arg(1));
    case Op::Greater: return truth(arg(0) > arg(1));
    case Op::GreaterEq: return truth(arg(0) >= arg(1));
    case Op::Equal: return truth(arg(0) == arg(1));
    case Op::NotEqual: return truth(arg(0) != arg(1));
    case Op::And: return truth(arg(0) != 0 && arg(1) != 0);
    case Op::Or: return truth(arg(0) != 0 || arg(1) != 0);
    case Op::Ilog2: {
        const Natural x = arg(0);
        if (x < 1) throw DomainError("ilog2 of " + x.get_str() + " is undefined");
        return Natural(static_cast<unsigned long>(mpz_sizeinbase(x.get_mpz_t(), 2) - 1));
    }
    case Op::Ipow: {
        const Natural base = arg(0);
        const Natural exponent = arg(1);
        if (exponent < 0) throw DomainError("ipow with negative exponent");
        const Natural magnitude = abs(base);
        if (magnitude <= 1) {
            if (exponent == 0 || base == 1) return 1;
            if (base == 0) return 0;
            return mpz_even_p(exponent.get_mpz_t()) ? 1 : -1;
        }
        const std::size_t bits = mpz_sizeinbase(magnitude.get_mpz_t(), 2);
        if (!exponent.fits_ulong_p() || (bits - 1) * exponent.get_ui() + 1 > caps.value_bit_cap) {
            throw DomainError("ipow result exceeds value_bit_cap");
        }
        Natural out;
        mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent.get_ui());
        return out;
    }
    case Op::If: return arg(0) != 0 ? arg(1) : arg(2);
    }
    throw DomainError("corrupt rule expression");
}

}  // namespace

ColorRule::ColorRule(std::string source, unsigned k, std::shared_ptr<const rule_detail::Node> root)
    : source_(std::move(source)), k_(k), root_(std::move(root)) {}

Natural ColorRule::evaluate(const Natural& n, const Caps& caps) const { return eval(*root_, n, caps); }

unsigned ColorRule::color(const Natural& n, const Caps& caps) const {
    Natural v = evaluate(n, caps);
    Natural r;
    mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), k_);
    return static_cast<unsigned>(r.get_ui());
}

ColorRule parse_rule(const std::string& source, unsigned k) {
    if (k < 1) throw DomainError("rule needs at least one cell");
    return ColorRule(source, k, Parser(source).parse());
}

}  // namespace exporamsey
