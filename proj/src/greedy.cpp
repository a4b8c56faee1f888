#include "exporamsey/greedy.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "exporamsey/errors.hpp"
#include "exporamsey/structures.hpp"

namespace exporamsey {

namespace {

// Largest N_i for which the j-range 2..N_i is scanned.
const Natural kMaxLevelRange = 1 << 20;

// Membership of base^exponent without materializing it. base, exponent >= 1.
bool contains_power(const SetSpec& a, const Natural& base, const Natural& exponent, const Caps& caps) {
    if (base == 1 || exponent == 0) return a.contains(Natural(1), caps);
    const PowerForm b = normalize(base, caps);
    if (exponent == 1) return a.contains(b, caps);
    return a.contains(pow(b, normalize(exponent, caps), caps), caps);
}

GreedyFeResult fail(GreedyFeResult r, std::size_t step, std::string reason,
                    std::optional<std::string> offending = std::nullopt) {
    r.success = false;
    r.failed_step = step;
    r.reason = std::move(reason);
    r.offending = std::move(offending);
    return r;
}

FeLevel fe_of(FeType type, const std::vector<Natural>& seeds, std::size_t level, const Caps& caps) {
    const auto forms = to_power_forms(seeds, caps);
    return type == FeType::One ? fe1(forms, level, caps) : fe2(forms, level, caps);
}

// Shared least-choice driver. `admissible(m)` tests the step condition for a
// candidate x_{i+1} = m against the current level; it may throw
// OracleRangeError / CapacityError with the offending element as message.
GreedyFeResult greedy_fe(FeType type, const SetSpec& a, std::size_t depth, const Window& window, const Caps& caps) {
    if (window.lo > window.hi) throw DomainError("greedy: window requires lo <= hi");
    GreedyFeResult r;

    Natural m = std::max(window.lo, Natural(2));
    for (; m <= window.hi; ++m) {
        try {
            if (a.contains(m, caps)) break;
        } catch (const OracleRangeError&) {
            return fail(std::move(r), 0, "oracle range", decimal(m));
        }
    }
    if (m > window.hi) return fail(std::move(r), 0, "no x_0");
    r.chosen.push_back(m);

    for (std::size_t i = 0; i < depth; ++i) {
        const FeLevel level = fe_of(type, r.chosen, i, caps);
        if (level.dropped_count != 0) return fail(std::move(r), i + 1, "capacity", "FE level " + std::to_string(i));

        // Exponent bases j = 2..N_i (type I) or exponents y in FE^II_i (type II).
        std::vector<PowerForm> bases;
        if (type == FeType::One) {
            const PowerForm& top = level.elements.back();
            if (!is_evaluable(top, caps) || evaluate(top, caps) > kMaxLevelRange) {
                return fail(std::move(r), i + 1, "capacity", "N_" + std::to_string(i) + " = " + top.to_string());
            }
            const Natural n_i = evaluate(top, caps);
            r.level_max.push_back(n_i);
            for (Natural j = 2; j <= n_i; ++j) bases.push_back(normalize(j, caps));
        }

        bool found = false;
        for (m = r.chosen.back() + 1; m <= window.hi && !found; ++m) {
            std::string probe = decimal(m);
            try {
                if (!a.contains(m, caps)) continue;
                const PowerForm mf = normalize(m, caps);
                bool ok = true;
                if (type == FeType::One) {
                    for (const auto& j : bases) {
                        probe = j.to_string() + "^" + decimal(m);
                        if (!a.contains(pow(j, mf, caps), caps)) {
                            ok = false;
                            break;
                        }
                    }
                } else {
                    for (const auto& y : level.elements) {
                        probe = decimal(m) + "^" + y.to_string();
                        if (!a.contains(pow(mf, y, caps), caps)) {
                            ok = false;
                            break;
                        }
                    }
                }
                if (ok) {
                    r.chosen.push_back(m);
                    found = true;
                }
            } catch (const OracleRangeError&) {
                return fail(std::move(r), i + 1, "oracle range", probe);
            } catch (const CapacityError&) {
                return fail(std::move(r), i + 1, "capacity", probe);
            }
        }
        if (!found) return fail(std::move(r), i + 1, "empty intersection");
    }

    FeCertificate cert;
    cert.type = type;
    cert.seeds = r.chosen;
    cert.depth = depth;
    const FeLevel final_level = fe_of(type, r.chosen, depth, caps);
    if (final_level.dropped_count != 0) return fail(std::move(r), depth, "capacity", "FE level " + std::to_string(depth));
    for (const auto& e : final_level.elements) {
        bool member = false;
        try {
            member = a.contains(e, caps);
        } catch (const OracleRangeError&) {
            return fail(std::move(r), depth, "oracle range", e.to_string());
        }
        if (!member) return fail(std::move(r), depth, "certificate", e.to_string());
        cert.checked_elements.emplace_back(e, true);
    }
    if (!verify_certificate(a, cert, caps)) throw std::logic_error("greedy: certificate failed re-verification");
    r.success = true;
    r.certificate = std::move(cert);
    return r;
}

// f(x_0, ..., x_{j-1}); nullopt when the prefix is not a valid FE seed
// sequence. CapacityError when the value is too large to enumerate.
std::optional<Natural> choice_value(const FSpec& f, const std::vector<Natural>& prefix, const Natural& max_t,
                                    const Caps& caps) {
    if (f.kind == FSpec::Kind::Constant) return f.constant;
    if (prefix.empty()) return Natural(1);
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (prefix[i] < 2 || (i > 0 && prefix[i] <= prefix[i - 1])) return std::nullopt;
    }
    const FeLevel level = fe1(to_power_forms(prefix, caps), prefix.size() - 1, caps);
    if (level.dropped_count != 0) throw CapacityError("f: FE level dropped elements");
    const PowerForm& top = level.elements.back();
    if (!is_evaluable(top, caps) || evaluate(top, caps) > max_t) {
        throw CapacityError("f: l = " + top.to_string() + " too large to enumerate");
    }
    return evaluate(top, caps);
}

// Condition for one F: t^(sum F) in A for t = 2..l (type I) or
// (prod F)^t in A for t = 1..l (type II).
bool condition_holds(FeType type, const SetSpec& a, const Natural& combined, const Natural& l, const Caps& caps) {
    if (type == FeType::One) {
        for (Natural t = 2; t <= l; ++t) {
            if (!contains_power(a, t, combined, caps)) return false;
        }
    } else {
        for (Natural t = 1; t <= l; ++t) {
            if (!contains_power(a, combined, t, caps)) return false;
        }
    }
    return true;
}

Natural combine_block(FeType type, const std::vector<Natural>& y, const std::vector<std::size_t>& block) {
    Natural acc = type == FeType::One ? 0 : 1;
    for (std::size_t i : block) {
        if (type == FeType::One) acc += y[i];
        else acc *= y[i];
    }
    return acc;
}

class FegenSearch {
public:
    FegenSearch(FeType type, const SetSpec& a, const std::vector<Natural>& y, const FSpec& f, std::size_t steps,
                const BlockLimits& limits, const Caps& caps)
        : type_(type), a_(a), y_(y), f_(f), steps_(steps), limits_(limits), caps_(caps),
          limit_(std::min(y.size(), limits.max_index)) {}

    FegenResult run() {
        FegenResult result;
        if (level(0, 0)) {
            result.outcome = SearchOutcome::Success;
            GreedyState state;
            state.type = type_;
            state.y = y_;
            state.blocks = blocks_;
            state.chosen = chosen_;
            state.level_max = level_max_;
            state.f = f_;
            if (!verify_fegen(a_, state, caps_)) throw std::logic_error("fegen: result failed re-verification");
            result.state = std::move(state);
        } else if (out_of_budget_ || undecided_) {
            result.outcome = SearchOutcome::Inconclusive;
            result.reason = out_of_budget_ ? "budget exhausted" : undecided_reason_;
        } else {
            result.outcome = SearchOutcome::Failure;
            result.reason = "no valid block choice";
        }
        result.nodes = std::min(nodes_, limits_.budget);
        return result;
    }

private:
    bool level(std::size_t j, std::size_t start) {
        if (j == steps_) return true;
        std::optional<Natural> l;
        try {
            l = choice_value(f_, chosen_, limits_.max_t, caps_);
        } catch (const CapacityError& e) {
            note_undecided(e.what());
            return false;
        }
        if (!l) return false;
        level_max_.push_back(*l);
        std::vector<std::size_t> block;
        const bool ok = blocks_from(j, start, block);
        if (!ok) level_max_.pop_back();
        return ok;
    }

    // Lexicographic enumeration of index sets starting at `next`.
    bool blocks_from(std::size_t j, std::size_t next, std::vector<std::size_t>& block) {
        for (std::size_t idx = next; idx < limit_; ++idx) {
            if (out_of_budget_) return false;
            block.push_back(idx);
            if (try_block(j, block)) return true;
            if (block.size() < limits_.max_block_size && blocks_from(j, idx + 1, block)) return true;
            block.pop_back();
        }
        return false;
    }

    bool try_block(std::size_t j, const std::vector<std::size_t>& block) {
        if (++nodes_ > limits_.budget) {
            out_of_budget_ = true;
            return false;
        }
        const Natural x = combine_block(type_, y_, block);
        // Every F containing j: F = G u {j} with G a subset of {0..j-1}.
        try {
            for (std::uint64_t g = 0; g < (std::uint64_t{1} << j); ++g) {
                Natural combined = x;
                std::size_t min_f = j;
                for (std::size_t i = 0; i < j; ++i) {
                    if (!((g >> i) & 1)) continue;
                    min_f = std::min(min_f, i);
                    if (type_ == FeType::One) combined += chosen_[i];
                    else combined *= chosen_[i];
                }
                if (!condition_holds(type_, a_, combined, level_max_[min_f], caps_)) return false;
            }
        } catch (const CapacityError& e) {
            note_undecided(e.what());
            return false;
        }
        chosen_.push_back(x);
        blocks_.push_back(block);
        if (level(j + 1, block.back() + 1)) return true;
        chosen_.pop_back();
        blocks_.pop_back();
        return false;
    }

    void note_undecided(const std::string& why) {
        if (!undecided_) undecided_reason_ = why;
        undecided_ = true;
    }

    FeType type_;
    const SetSpec& a_;
    const std::vector<Natural>& y_;
    FSpec f_;
    std::size_t steps_;
    BlockLimits limits_;
    Caps caps_;
    std::size_t limit_;

    std::vector<Natural> chosen_;
    std::vector<std::vector<std::size_t>> blocks_;
    std::vector<Natural> level_max_;
    std::uint64_t nodes_ = 0;
    bool out_of_budget_ = false;
    bool undecided_ = false;
    std::string undecided_reason_;
};

FegenResult search_fegen(FeType type, const SetSpec& a, const std::vector<Natural>& y, const FSpec& f,
                         std::size_t steps, const BlockLimits& limits, const Caps& caps) {
    for (const auto& v : y) {
        if (v < 1) throw DomainError("fegen: y must consist of naturals >= 1");
    }
    if (steps > 62) throw CapacityError("fegen: too many steps");
    return FegenSearch(type, a, y, f, steps, limits, caps).run();
}

CheckVerdict check_all(const std::vector<std::string>& labels, const std::function<bool(std::size_t)>& member) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        try {
            if (!member(i)) return {CheckVerdict::Status::Fails, labels[i]};
        } catch (const CapacityError&) {
            return {CheckVerdict::Status::Inconclusive, labels[i]};
        }
    }
    return {CheckVerdict::Status::Holds, std::nullopt};
}

CheckVerdict check_naturals(const SetSpec& a, const std::vector<Natural>& values, const Caps& caps) {
    std::vector<std::string> labels;
    for (const auto& v : values) labels.push_back(decimal(v));
    return check_all(labels, [&](std::size_t i) { return a.contains(values[i], caps); });
}

CheckVerdict check_fe(const SetSpec& a, FeType type, const std::vector<Natural>& seeds, std::size_t depth,
                      const Caps& caps) {
    const FeLevel level = fe_of(type, seeds, depth, caps);
    std::vector<std::string> labels;
    for (const auto& e : level.elements) labels.push_back(e.to_string());
    CheckVerdict v = check_all(labels, [&](std::size_t i) { return a.contains(level.elements[i], caps); });
    if (v.status == CheckVerdict::Status::Holds && level.dropped_count != 0) {
        return {CheckVerdict::Status::Inconclusive, std::to_string(level.dropped_count) + " elements beyond caps"};
    }
    return v;
}

}  // namespace

GreedyFeResult greedy_fe1(const SetSpec& a, std::size_t depth, const Window& window, const Caps& caps) {
    return greedy_fe(FeType::One, a, depth, window, caps);
}

GreedyFeResult greedy_fe2(const SetSpec& a, std::size_t depth, const Window& window, const Caps& caps) {
    return greedy_fe(FeType::Two, a, depth, window, caps);
}

bool verify_certificate(const SetSpec& a, const FeCertificate& cert, const Caps& caps) {
    try {
        const FeLevel level = fe_of(cert.type, cert.seeds, cert.depth, caps);
        if (level.dropped_count != 0 || level.elements.size() != cert.checked_elements.size()) return false;
        for (std::size_t i = 0; i < level.elements.size(); ++i) {
            const auto& [element, member] = cert.checked_elements[i];
            if (!(element == level.elements[i]) || !member) return false;
            if (!a.contains(element, caps)) return false;
        }
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

FegenResult search_fegen1(const SetSpec& a, const std::vector<Natural>& y, const FSpec& f, std::size_t steps,
                          const BlockLimits& limits, const Caps& caps) {
    return search_fegen(FeType::One, a, y, f, steps, limits, caps);
}

FegenResult search_fegen2(const SetSpec& a, const std::vector<Natural>& y, const FSpec& f, std::size_t steps,
                          const BlockLimits& limits, const Caps& caps) {
    return search_fegen(FeType::Two, a, y, f, steps, limits, caps);
}

bool verify_fegen(const SetSpec& a, const GreedyState& state, const Caps& caps) {
    const std::size_t m = state.blocks.size();
    if (state.chosen.size() != m || state.level_max.size() != m || m > 62) return false;
    try {
        for (std::size_t j = 0; j < m; ++j) {
            const auto& block = state.blocks[j];
            if (block.empty() || !std::is_sorted(block.begin(), block.end()) ||
                std::adjacent_find(block.begin(), block.end()) != block.end() || block.back() >= state.y.size()) {
                return false;
            }
            if (j > 0 && block.front() <= state.blocks[j - 1].back()) return false;
            if (combine_block(state.type, state.y, block) != state.chosen[j]) return false;
            const std::vector<Natural> prefix(state.chosen.begin(), state.chosen.begin() + static_cast<long>(j));
            const auto l = choice_value(state.f, prefix, Natural(1) << 62, caps);
            if (!l || *l != state.level_max[j]) return false;
        }
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
            const std::size_t min_f = static_cast<std::size_t>(std::countr_zero(mask));
            Natural combined = state.type == FeType::One ? 0 : 1;
            for (std::size_t j = 0; j < m; ++j) {
                if (!((mask >> j) & 1)) continue;
                if (state.type == FeType::One) combined += state.chosen[j];
                else combined *= state.chosen[j];
            }
            if (!condition_holds(state.type, a, combined, state.level_max[min_f], caps)) return false;
        }
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

FecorReport verify_fecor(const SetSpec& a, const std::optional<std::vector<Natural>>& x,
                         const std::optional<std::vector<Natural>>& y, std::size_t depth, const Caps& caps) {
    FecorReport report;
    if (x) {
        report.fs = check_naturals(a, fs(*x, caps), caps);
        report.fe1 = check_fe(a, FeType::One, *x, depth, caps);
    }
    if (y) {
        report.fp = check_naturals(a, fp(*y, caps), caps);
        report.fe2 = check_fe(a, FeType::Two, *y, depth, caps);
    }
    return report;
}

}  // namespace exporamsey
