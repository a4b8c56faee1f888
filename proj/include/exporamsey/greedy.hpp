#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exporamsey/config.hpp"
#include "exporamsey/power_form.hpp"
#include "exporamsey/set_spec.hpp"

namespace exporamsey {

enum class FeType { One, Two };

/// A finite prefix X and every element of FE^I(X) or FE^II(X) at `depth`,
/// each of which was found in the target set.
struct FeCertificate {
    FeType type = FeType::One;
    std::vector<Natural> seeds;
    std::size_t depth = 0;
    std::vector<std::pair<PowerForm, bool>> checked_elements;
};

/// Outcome of greedy_fe1 / greedy_fe2.
struct GreedyFeResult {
    bool success = false;
    std::optional<FeCertificate> certificate;  // set iff success
    std::vector<Natural> chosen;               // the x_i picked so far
    std::vector<Natural> level_max;            // N_i = max FE_i of the prefix (type I only)
    std::size_t failed_step = 0;
    std::string reason;                        // "no x_0", "empty intersection", "oracle range", "capacity"
    std::optional<std::string> offending;      // element whose membership could not be decided
};

/// Inclusive selection window for the x_i.
struct Window {
    Natural lo;
    Natural hi;
};

/// Least-choice run of x_0 in A, x_{i+1} in A and j^{x_{i+1}} in A for
/// j = 2..N_i, where N_i = max FE^I_i(x_0..x_i). On success every element of
/// fe1(X, depth) has been checked against A.
GreedyFeResult greedy_fe1(const SetSpec& a, std::size_t depth, const Window& window, const Caps& caps = {});

/// Type II analogue: x_{i+1} in A and x_{i+1}^y in A for every y in FE^II_i.
GreedyFeResult greedy_fe2(const SetSpec& a, std::size_t depth, const Window& window, const Caps& caps = {});

/// Regenerates the structure from the certificate's seeds and re-tests every
/// element. False if anything listed is missing, extra, or not in A.
bool verify_certificate(const SetSpec& a, const FeCertificate& cert, const Caps& caps = {});

/// The choice function f on prefixes (x_0, ..., x_{n-1}).
struct FSpec {
    enum class Kind { Constant, MaxFe1 };
    Kind kind = Kind::Constant;
    Natural constant = 2;

    static FSpec constant_value(Natural c) { return {Kind::Constant, std::move(c)}; }
    static FSpec max_fe1() { return {Kind::MaxFe1, 0}; }
};

struct BlockLimits {
    std::size_t max_block_size = 4;
    std::size_t max_index = 32;  // block indices are < max_index
    std::uint64_t budget = 1'000'000;
    Natural max_t = 100000;      // largest l = f(prefix) that is enumerated
};

/// Blocks H_0 < H_1 < ... of indices into y and the values x_j built from them.
struct GreedyState {
    FeType type = FeType::One;  // One: sums with t^(sum); Two: products with (product)^t
    std::vector<Natural> y;
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<Natural> chosen;     // x_j
    std::vector<Natural> level_max;  // l_j = f(x_0, ..., x_{j-1})
    FSpec f;
};

enum class SearchOutcome { Success, Failure, Inconclusive };

struct FegenResult {
    SearchOutcome outcome = SearchOutcome::Failure;
    std::optional<GreedyState> state;  // set iff Success
    std::uint64_t nodes = 0;
    std::string reason;
};

/// Backtracking search for `steps` blocks with t^(sum_{j in F} x_j) in A for
/// every non-empty F and t in {2, ..., f(x_0..x_{min F - 1})}. Returns the
/// lexicographically least block sequence.
FegenResult search_fegen1(const SetSpec& a, const std::vector<Natural>& y, const FSpec& f, std::size_t steps,
                          const BlockLimits& limits = {}, const Caps& caps = {});

/// Products instead of sums, (prod_{j in F} x_j)^t for t in {1, ..., l}.
FegenResult search_fegen2(const SetSpec& a, const std::vector<Natural>& y, const FSpec& f, std::size_t steps,
                          const BlockLimits& limits = {}, const Caps& caps = {});

/// Independent recheck of a search result: block discipline, block values,
/// and the full condition over every F and t.
bool verify_fegen(const SetSpec& a, const GreedyState& state, const Caps& caps = {});

struct CheckVerdict {
    enum class Status { Holds, Fails, Inconclusive, Skipped };
    Status status = Status::Skipped;
    std::optional<std::string> element;  // first violating (or undecidable) element
};

struct FecorReport {
    CheckVerdict fs;
    CheckVerdict fe1;
    CheckVerdict fp;
    CheckVerdict fe2;
};

/// Checks FS(X), fe1(X, depth), FP(Y), fe2(Y, depth) against A. A missing
/// X or Y skips its two checks.
FecorReport verify_fecor(const SetSpec& a, const std::optional<std::vector<Natural>>& x,
                         const std::optional<std::vector<Natural>>& y, std::size_t depth, const Caps& caps = {});

}  // namespace exporamsey
