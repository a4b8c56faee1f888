#include "exporamsey/triples.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "exporamsey/errors.hpp"

namespace exporamsey {

namespace {

std::size_t bit_length(const Natural& n) { return n == 0 ? 0 : mpz_sizeinbase(n.get_mpz_t(), 2); }

bool edge_order(const TripleEdge& x, const TripleEdge& y) {
    return std::tie(x.c, x.a, x.b) < std::tie(y.c, y.a, y.b);
}

std::vector<TripleEdge> find_edges(const std::vector<PowerForm>& vertices, const Caps& caps) {
    // c = a^b forces root(c) = root(a) and exp(c) = exp(a) * value(b).
    std::map<Natural, std::vector<std::size_t>> by_root;
    // b must be evaluable, so exponents are matched against values directly.
    std::map<Natural, std::size_t> by_value;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        by_root[vertices[i].root()].push_back(i);
        if (is_evaluable(vertices[i], caps)) by_value.emplace(evaluate(vertices[i], caps), i);
    }

    std::vector<TripleEdge> edges;
    Natural product;
    for (const auto& [root, members] : by_root) {
        std::map<Natural, std::size_t> by_exponent;
        for (std::size_t i : members) by_exponent.emplace(vertices[i].exponent(), i);
        const Natural& largest = by_exponent.rbegin()->first;
        for (std::size_t ai : members) {
            const Natural& a_exp = vertices[ai].exponent();
            for (const auto& [value, bi] : by_value) {
                if (value < 2) continue;
                product = a_exp * value;
                if (product > largest) break;
                auto it = by_exponent.find(product);
                if (it != by_exponent.end()) edges.push_back({ai, bi, it->second});
            }
        }
    }
    std::sort(edges.begin(), edges.end(), edge_order);
    return edges;
}

std::vector<PowerForm> sorted_unique(std::vector<PowerForm> forms, const Caps& caps) {
    std::sort(forms.begin(), forms.end(), NumericLess{caps});
    forms.erase(std::unique(forms.begin(), forms.end()), forms.end());
    return forms;
}

}  // namespace

std::vector<std::size_t> TripleHypergraph::vertex_set(const TripleEdge& e) {
    std::vector<std::size_t> out{e.a, e.b, e.c};
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void for_each_triple(const Natural& bound, const std::function<void(const ExpTriple&)>& visit,
                     const Caps& caps) {
    if (bit_length(bound) > caps.value_bit_cap) throw CapacityError("enumerate_triples: bound exceeds value_bit_cap");
    struct Raw {
        Natural c;
        unsigned long a;
        unsigned long b;
    };
    std::vector<Raw> raw;
    // a <= sqrt(bound) since b >= 2.
    Natural a_max;
    mpz_sqrt(a_max.get_mpz_t(), bound.get_mpz_t());
    if (!a_max.fits_ulong_p()) throw CapacityError("enumerate_triples: bound too large to enumerate");
    for (unsigned long a = 2; a <= a_max.get_ui(); ++a) {
        Natural c = Natural(a) * a;
        for (unsigned long b = 2; c <= bound; ++b) {
            raw.push_back({c, a, b});
            c *= a;
        }
    }
    std::sort(raw.begin(), raw.end(), [](const Raw& x, const Raw& y) {
        if (x.c != y.c) return x.c < y.c;
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
    for (const auto& r : raw) {
        PowerForm a = normalize(Natural(r.a), caps);
        PowerForm b = normalize(Natural(r.b), caps);
        PowerForm c = pow(a, b, caps);
        visit(ExpTriple{std::move(a), std::move(b), std::move(c)});
    }
}

std::vector<ExpTriple> enumerate_triples(const Natural& bound, const Caps& caps) {
    std::vector<ExpTriple> out;
    for_each_triple(bound, [&](const ExpTriple& t) { out.push_back(t); }, caps);
    return out;
}

TripleHypergraph exp_closure(const std::vector<Natural>& seeds, std::size_t depth, const Caps& caps) {
    if (seeds.empty()) throw DomainError("exp_closure: seeds must be non-empty");
    if (depth > caps.max_closure_depth) {
        throw CapacityError("exp_closure: depth " + std::to_string(depth) + " exceeds the limit of " +
                            std::to_string(caps.max_closure_depth));
    }

    TripleHypergraph h;
    h.meta.seeds = seeds;
    std::sort(h.meta.seeds.begin(), h.meta.seeds.end());
    h.meta.seeds.erase(std::unique(h.meta.seeds.begin(), h.meta.seeds.end()), h.meta.seeds.end());
    h.meta.depth = depth;
    h.meta.caps = caps;

    std::vector<PowerForm> all;
    for (const auto& s : h.meta.seeds) all.push_back(normalize(s, caps));
    std::unordered_set<PowerForm, PowerFormHash> known(all.begin(), all.end());
    std::vector<PowerForm> fresh = all;

    for (std::size_t round = 0; round < depth && !fresh.empty(); ++round) {
        std::unordered_set<PowerForm, PowerFormHash> fresh_set(fresh.begin(), fresh.end());
        std::vector<PowerForm> produced;
        // Only pairs touching last round's new vertices can yield something new.
        for (const auto& a : all) {
            const bool a_fresh = fresh_set.count(a) != 0;
            for (const auto& b : all) {
                if (!a_fresh && fresh_set.count(b) == 0) continue;
                if (!is_evaluable(b, caps)) continue;
                try {
                    PowerForm c = pow(a, b, caps);
                    if (known.insert(c).second) produced.push_back(std::move(c));
                } catch (const CapacityError&) {
                    ++h.meta.dropped_count;
                }
            }
        }
        all.insert(all.end(), produced.begin(), produced.end());
        if (all.size() > caps.vertex_budget) {
            all = sorted_unique(std::move(all), caps);
            h.meta.truncated_count += all.size() - caps.vertex_budget;
            all.erase(all.begin() + static_cast<std::ptrdiff_t>(caps.vertex_budget), all.end());
            std::unordered_set<PowerForm, PowerFormHash> kept(all.begin(), all.end());
            std::erase_if(produced, [&](const PowerForm& p) { return kept.count(p) == 0; });
        }
        fresh = std::move(produced);
    }

    h.vertices = sorted_unique(std::move(all), caps);
    h.edges = find_edges(h.vertices, caps);
    return h;
}

TripleHypergraph hypergraph_on(std::vector<PowerForm> vertices, const Caps& caps) {
    TripleHypergraph h;
    h.meta.caps = caps;
    h.vertices = sorted_unique(std::move(vertices), caps);
    h.edges = find_edges(h.vertices, caps);
    return h;
}

std::vector<ExpTriple> triples_within(const std::vector<PowerForm>& set, const Caps& caps) {
    const TripleHypergraph h = hypergraph_on(set, caps);
    std::vector<ExpTriple> out;
    out.reserve(h.edges.size());
    for (const auto& e : h.edges) out.push_back({h.vertices[e.a], h.vertices[e.b], h.vertices[e.c]});
    return out;
}

TripleHypergraph induced_subgraph(const TripleHypergraph& h, const std::vector<std::size_t>& keep) {
    std::vector<std::size_t> sorted = keep;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::vector<std::size_t> remap(h.vertices.size(), h.vertices.size());
    TripleHypergraph out;
    out.meta = h.meta;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] >= h.vertices.size()) throw DomainError("induced_subgraph: vertex index out of range");
        remap[sorted[i]] = i;
        out.vertices.push_back(h.vertices[sorted[i]]);
    }
    const std::size_t gone = h.vertices.size();
    for (const auto& e : h.edges) {
        if (remap[e.a] == gone || remap[e.b] == gone || remap[e.c] == gone) continue;
        out.edges.push_back({remap[e.a], remap[e.b], remap[e.c]});
    }
    return out;
}

}  // namespace exporamsey
