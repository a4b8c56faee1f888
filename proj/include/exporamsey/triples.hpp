#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "exporamsey/config.hpp"
#include "exporamsey/power_form.hpp"

namespace exporamsey {

/// Ordered triple (a, b, c) with c = a^b and a, b >= 2.
struct ExpTriple {
    PowerForm a;
    PowerForm b;
    PowerForm c;

    friend bool operator==(const ExpTriple&, const ExpTriple&) = default;
};

/// Edge of a TripleHypergraph as indices into its vertex list.
struct TripleEdge {
    std::size_t a = 0;
    std::size_t b = 0;
    std::size_t c = 0;

    friend auto operator<=>(const TripleEdge&, const TripleEdge&) = default;
};

struct ClosureMeta {
    std::vector<Natural> seeds;
    std::size_t depth = 0;
    Caps caps;
    std::size_t dropped_count = 0;    // pow results rejected by exp_bit_cap
    std::size_t truncated_count = 0;  // vertices cut by the vertex budget
};

/// Vertices ascend by value; edges are sorted and unique.
struct TripleHypergraph {
    std::vector<PowerForm> vertices;
    std::vector<TripleEdge> edges;
    ClosureMeta meta;

    /// Distinct vertex indices of an edge (2 when a == b, else 3), ascending.
    static std::vector<std::size_t> vertex_set(const TripleEdge& e);
};

/// All (a, b, a^b) with a, b >= 2 and a^b <= bound, sorted by (c, a, b).
std::vector<ExpTriple> enumerate_triples(const Natural& bound, const Caps& caps = {});

/// Streaming form of enumerate_triples; visits in the same order.
void for_each_triple(const Natural& bound, const std::function<void(const ExpTriple&)>& visit,
                     const Caps& caps = {});

/// Closure of `seeds` under (a, b) -> a^b applied `depth` rounds, with every
/// exponential triple among the resulting vertices as an edge.
TripleHypergraph exp_closure(const std::vector<Natural>& seeds, std::size_t depth, const Caps& caps = {});

/// Every exponential triple with all three members in `set` (b evaluable),
/// sorted by (c, a, b).
std::vector<ExpTriple> triples_within(const std::vector<PowerForm>& set, const Caps& caps = {});

/// Hypergraph induced on a subset of vertex indices of `h`.
TripleHypergraph induced_subgraph(const TripleHypergraph& h, const std::vector<std::size_t>& keep);

/// Hypergraph over an arbitrary vertex set with edges from triples_within.
TripleHypergraph hypergraph_on(std::vector<PowerForm> vertices, const Caps& caps = {});

}  // namespace exporamsey
