#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exporamsey/config.hpp"
#include "exporamsey/rule.hpp"
#include "exporamsey/triples.hpp"

namespace exporamsey {

/// Cell index per vertex of a hypergraph; colors[i] is the cell of vertex i.
struct Coloring {
    unsigned k = 2;
    std::vector<unsigned> colors;

    friend bool operator==(const Coloring&, const Coloring&) = default;
};

enum class SolveMethod { Backtracking, Exhaustive };

struct ColorabilityResult {
    bool satisfiable = false;
    std::optional<Coloring> witness;  // set iff satisfiable
    std::uint64_t nodes = 0;          // decisions (backtracking) or colorings tried (exhaustive)
};

/// Largest search space the exhaustive method accepts.
inline constexpr std::uint64_t kExhaustiveLimit = std::uint64_t{1} << 24;

/// Edges all of whose distinct vertices share one color.
/// DomainError when `coloring` is not total on h or uses a color >= k.
std::vector<TripleEdge> check_coloring(const TripleHypergraph& h, const Coloring& coloring);

/// Decides whether h has a k-coloring with no monochromatic edge. Any witness
/// has been re-checked with check_coloring. CapacityError (naming the method)
/// when the backtracking node budget or the exhaustive size limit is exceeded.
ColorabilityResult solve_colorability(const TripleHypergraph& h, unsigned k, SolveMethod method,
                                      const Caps& caps = {}, bool deterministic = true);

/// DIMACS CNF whose models are exactly the proper k-colorings of h.
/// k == 2 uses one variable per vertex (true = color 1); k > 2 uses one
/// variable per (vertex, color). Comment lines record the variable map.
std::string export_dimacs(const TripleHypergraph& h, unsigned k);

struct Cnf {
    std::size_t variables = 0;
    std::vector<std::vector<int>> clauses;
    unsigned k = 2;
    std::vector<std::pair<std::size_t, unsigned>> var_meaning;  // var-1 -> (vertex, color)
};

/// Reads text produced by export_dimacs, including its variable map.
Cnf parse_dimacs(const std::string& text);

bool satisfies(const Cnf& cnf, const std::vector<bool>& model);

/// Maps a model (model[v - 1] is variable v) back to a coloring.
/// DomainError if a vertex gets no color or several under the k > 2 encoding.
Coloring decode_model(const Cnf& cnf, const std::vector<bool>& model, std::size_t vertex_count);

struct MonoCounts {
    Natural bound;
    std::vector<std::uint64_t> per_cell;  // monochromatic triples per cell
    std::uint64_t monochromatic = 0;
    std::uint64_t rainbow = 0;  // triples that are not monochromatic
    std::uint64_t triples = 0;
};

/// Classifies every triple of enumerate_triples(bound) under `rule`.
/// DomainError naming the least n at which the rule fails to evaluate.
MonoCounts count_mono_triples(const ColorRule& rule, const Natural& bound, const Caps& caps = {},
                              bool deterministic = true);

}  // namespace exporamsey
