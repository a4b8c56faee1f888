#include "exporamsey/coloring.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "exporamsey/errors.hpp"
#include "parallel.hpp"

namespace exporamsey {

namespace {

using Mask = std::uint64_t;
constexpr unsigned kMaxColors = 64;

// Distinct vertex sets of the edges; (2,4,16) and (4,2,16) collapse.
std::vector<std::vector<std::size_t>> constraint_sets(const TripleHypergraph& h) {
    std::set<std::vector<std::size_t>> unique;
    for (const auto& e : h.edges) unique.insert(TripleHypergraph::vertex_set(e));
    return {unique.begin(), unique.end()};
}

bool monochromatic(const std::vector<std::size_t>& set, const std::vector<unsigned>& colors) {
    for (std::size_t i = 1; i < set.size(); ++i) {
        if (colors[set[i]] != colors[set[0]]) return false;
    }
    return true;
}

Coloring verified(const TripleHypergraph& h, Coloring c, const char* method) {
    if (!check_coloring(h, c).empty()) {
        throw std::logic_error(std::string(method) + " produced a coloring with monochromatic edges");
    }
    return c;
}

class Backtracker {
public:
    Backtracker(const TripleHypergraph& h, unsigned k, std::uint64_t budget)
        : k_(k), budget_(budget), sets_(constraint_sets(h)), incidence_(h.vertices.size()),
          color_(h.vertices.size(), kUnassigned), domain_(h.vertices.size(), full_mask(k)) {
        for (std::size_t s = 0; s < sets_.size(); ++s) {
            for (std::size_t v : sets_[s]) incidence_[v].push_back(s);
        }
        order_.resize(h.vertices.size());
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        // Descending degree, ties by ascending index (vertices ascend by value).
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            return incidence_[a].size() > incidence_[b].size();
        });
    }

    ColorabilityResult run() {
        ColorabilityResult result;
        struct Frame {
            std::size_t vertex;
            Mask remaining;
            std::size_t trail_mark;
        };
        std::vector<Frame> stack;
        std::size_t cursor = 0;
        bool first_decision = true;

        auto next_unassigned = [&]() {
            while (cursor < order_.size() && color_[order_[cursor]] != kUnassigned) ++cursor;
            return cursor;
        };

        bool descend = true;
        while (true) {
            if (descend) {
                if (next_unassigned() == order_.size()) {
                    result.satisfiable = true;
                    result.witness = Coloring{k_, color_};
                    break;
                }
                const std::size_t v = order_[cursor];
                Mask options = domain_[v];
                // All colors are interchangeable before the first decision.
                if (first_decision) options &= 1;
                first_decision = false;
                stack.push_back({v, options, trail_.size()});
            }
            if (stack.empty()) break;  // exhausted: UNSAT

            Frame& frame = stack.back();
            undo(frame.trail_mark);
            if (frame.remaining == 0) {
                stack.pop_back();
                descend = false;
                continue;
            }
            const unsigned c = static_cast<unsigned>(std::countr_zero(frame.remaining));
            frame.remaining &= frame.remaining - 1;
            if (++result.nodes > budget_) {
                throw CapacityError("backtracking: search budget of " + std::to_string(budget_) + " nodes exceeded");
            }
            descend = assign_and_propagate(frame.vertex, c);
        }
        result.nodes = std::min(result.nodes, budget_);
        return result;
    }

private:
    static constexpr unsigned kUnassigned = std::numeric_limits<unsigned>::max();

    static Mask full_mask(unsigned k) { return k >= 64 ? ~Mask{0} : (Mask{1} << k) - 1; }

    struct TrailEntry {
        std::size_t vertex;
        unsigned color;
        Mask domain;
    };

    void set(std::size_t v, unsigned color, Mask domain) {
        trail_.push_back({v, color_[v], domain_[v]});
        color_[v] = color;
        domain_[v] = domain;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            const TrailEntry& t = trail_.back();
            color_[t.vertex] = t.color;
            domain_[t.vertex] = t.domain;
            trail_.pop_back();
        }
        cursor = 0;
    }

    bool assign_and_propagate(std::size_t vertex, unsigned color) {
        std::vector<std::pair<std::size_t, unsigned>> queue{{vertex, color}};
        while (!queue.empty()) {
            auto [v, c] = queue.back();
            queue.pop_back();
            if (color_[v] != kUnassigned) {
                if (color_[v] != c) return false;
                continue;
            }
            if ((domain_[v] & (Mask{1} << c)) == 0) return false;
            set(v, c, Mask{1} << c);
            for (std::size_t s : incidence_[v]) {
                const auto& members = sets_[s];
                std::size_t open = members.size();
                std::size_t open_count = 0;
                unsigned shared = kUnassigned;
                bool mixed = false;
                for (std::size_t u : members) {
                    if (color_[u] == kUnassigned) {
                        open = u;
                        ++open_count;
                    } else if (shared == kUnassigned) {
                        shared = color_[u];
                    } else if (shared != color_[u]) {
                        mixed = true;
                    }
                }
                if (mixed || open_count > 1) continue;
                if (open_count == 0) return false;  // monochromatic
                // One undecided vertex left and the rest agree: it must differ.
                const Mask bit = Mask{1} << shared;
                if ((domain_[open] & bit) == 0) continue;
                const Mask narrowed = domain_[open] & ~bit;
                if (narrowed == 0) return false;
                set(open, kUnassigned, narrowed);
                if (std::popcount(narrowed) == 1) {
                    queue.emplace_back(open, static_cast<unsigned>(std::countr_zero(narrowed)));
                }
            }
        }
        return true;
    }

    unsigned k_;
    std::uint64_t budget_;
    std::vector<std::vector<std::size_t>> sets_;
    std::vector<std::vector<std::size_t>> incidence_;
    std::vector<unsigned> color_;
    std::vector<Mask> domain_;
    std::vector<std::size_t> order_;
    std::vector<TrailEntry> trail_;
    std::size_t cursor = 0;
};

ColorabilityResult solve_exhaustive(const TripleHypergraph& h, unsigned k, bool deterministic) {
    const std::size_t n = h.vertices.size();
    std::uint64_t space = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (space > kExhaustiveLimit / k) {
            throw CapacityError("exhaustive: k^|V| = " + std::to_string(k) + "^" + std::to_string(n) +
                                " exceeds 2^24");
        }
        space *= k;
    }
    const auto sets = constraint_sets(h);
    std::atomic<std::uint64_t> best{std::numeric_limits<std::uint64_t>::max()};

    // Coloring number i assigns vertex v the v-th base-k digit of i.
    detail::parallel_chunks(space, worker_count(deterministic), [&](std::size_t begin, std::size_t end, unsigned) {
        std::vector<unsigned> colors(n);
        for (std::uint64_t i = begin; i < end && i < best.load(); ++i) {
            std::uint64_t rest = i;
            for (std::size_t v = 0; v < n; ++v) {
                colors[v] = static_cast<unsigned>(rest % k);
                rest /= k;
            }
            const bool proper = std::none_of(sets.begin(), sets.end(),
                                             [&](const auto& s) { return monochromatic(s, colors); });
            if (proper) {
                std::uint64_t seen = best.load();
                while (i < seen && !best.compare_exchange_weak(seen, i)) {}
                break;
            }
        }
    });

    ColorabilityResult result;
    result.nodes = space;
    if (best.load() != std::numeric_limits<std::uint64_t>::max()) {
        Coloring c{k, std::vector<unsigned>(n)};
        std::uint64_t rest = best.load();
        for (std::size_t v = 0; v < n; ++v) {
            c.colors[v] = static_cast<unsigned>(rest % k);
            rest /= k;
        }
        result.satisfiable = true;
        result.nodes = best.load() + 1;
        result.witness = std::move(c);
    }
    return result;
}

std::string vertex_label(const PowerForm& v) { return v.to_string(); }

}  // namespace

std::vector<TripleEdge> check_coloring(const TripleHypergraph& h, const Coloring& coloring) {
    if (coloring.colors.size() != h.vertices.size()) {
        throw DomainError("check_coloring: coloring covers " + std::to_string(coloring.colors.size()) + " of " +
                          std::to_string(h.vertices.size()) + " vertices");
    }
    for (std::size_t v = 0; v < coloring.colors.size(); ++v) {
        if (coloring.colors[v] >= coloring.k) {
            throw DomainError("check_coloring: vertex " + std::to_string(v) + " has color outside [0, k)");
        }
    }
    std::vector<TripleEdge> mono;
    for (const auto& e : h.edges) {
        if (monochromatic(TripleHypergraph::vertex_set(e), coloring.colors)) mono.push_back(e);
    }
    return mono;
}

ColorabilityResult solve_colorability(const TripleHypergraph& h, unsigned k, SolveMethod method,
                                      const Caps& caps, bool deterministic) {
    if (k < 2) throw DomainError("solve_colorability: k must be >= 2");
    if (k > kMaxColors) throw CapacityError("solve_colorability: at most 64 cells supported");
    ColorabilityResult result = method == SolveMethod::Backtracking
                                    ? Backtracker(h, k, caps.search_budget).run()
                                    : solve_exhaustive(h, k, deterministic);
    if (result.witness) {
        result.witness = verified(h, std::move(*result.witness),
                                  method == SolveMethod::Backtracking ? "backtracking" : "exhaustive");
    }
    return result;
}

std::string export_dimacs(const TripleHypergraph& h, unsigned k) {
    if (k < 2) throw DomainError("export_dimacs: k must be >= 2");
    const std::size_t n = h.vertices.size();
    std::ostringstream comments;
    std::ostringstream body;
    std::size_t clause_count = 0;
    auto clause = [&](const std::vector<long long>& literals) {
        for (long long lit : literals) body << lit << ' ';
        body << "0\n";
        ++clause_count;
    };

    std::size_t variables = 0;
    if (k == 2) {
        variables = n;
        for (std::size_t v = 0; v < n; ++v) {
            comments << "c vertex " << v << ' ' << vertex_label(h.vertices[v]) << " var " << v + 1 << '\n';
        }
        for (const auto& e : h.edges) {
            const auto set = TripleHypergraph::vertex_set(e);
            std::vector<long long> positive, negative;
            for (std::size_t v : set) {
                positive.push_back(static_cast<long long>(v) + 1);
                negative.push_back(-(static_cast<long long>(v) + 1));
            }
            clause(positive);
            clause(negative);
        }
    } else {
        variables = n * k;
        auto var = [k](std::size_t v, unsigned c) { return static_cast<long long>(v * k + c + 1); };
        for (std::size_t v = 0; v < n; ++v) {
            for (unsigned c = 0; c < k; ++c) {
                comments << "c vertex " << v << ' ' << vertex_label(h.vertices[v]) << " color " << c << " var "
                         << var(v, c) << '\n';
            }
        }
        for (std::size_t v = 0; v < n; ++v) {
            std::vector<long long> at_least_one;
            for (unsigned c = 0; c < k; ++c) at_least_one.push_back(var(v, c));
            clause(at_least_one);
            for (unsigned c = 0; c < k; ++c) {
                for (unsigned d = c + 1; d < k; ++d) clause({-var(v, c), -var(v, d)});
            }
        }
        for (const auto& e : h.edges) {
            const auto set = TripleHypergraph::vertex_set(e);
            for (unsigned c = 0; c < k; ++c) {
                std::vector<long long> literals;
                for (std::size_t v : set) literals.push_back(-var(v, c));
                clause(literals);
            }
        }
    }
    std::ostringstream out;
    out << "c exporamsey " << k << "-coloring of " << n << " vertices, " << h.edges.size() << " edges\n";
    out << comments.str();
    out << "p cnf " << variables << ' ' << clause_count << '\n';
    out << body.str();
    return out.str();
}

Cnf parse_dimacs(const std::string& text) {
    Cnf cnf;
    std::istringstream in(text);
    std::string line;
    bool header = false;
    std::size_t declared_clauses = 0;
    std::map<std::size_t, std::pair<std::size_t, unsigned>> meaning;
    bool multi_color = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        if (line[0] == 'c') {
            std::string c, tag, label, word;
            std::size_t vertex = 0, var = 0;
            unsigned color = 1;
            fields >> c >> tag;
            if (tag != "vertex") continue;
            fields >> vertex >> label >> word;
            if (word == "color") {
                multi_color = true;
                fields >> color >> word;
            }
            if (word != "var" || !(fields >> var) || var == 0) throw DomainError("parse_dimacs: bad variable map line");
            meaning[var] = {vertex, color};
        } else if (line[0] == 'p') {
            std::string p, fmt;
            fields >> p >> fmt >> cnf.variables >> declared_clauses;
            if (fmt != "cnf") throw DomainError("parse_dimacs: not a cnf header");
            header = true;
        } else {
            if (!header) throw DomainError("parse_dimacs: clause before header");
            std::vector<int> clause;
            int lit = 0;
            while (fields >> lit && lit != 0) clause.push_back(lit);
            cnf.clauses.push_back(std::move(clause));
        }
    }
    if (!header) throw DomainError("parse_dimacs: missing header");
    if (cnf.clauses.size() != declared_clauses) throw DomainError("parse_dimacs: clause count mismatch");
    unsigned max_color = 0;
    cnf.var_meaning.assign(cnf.variables, {0, 0});
    for (const auto& [var, m] : meaning) {
        if (var > cnf.variables) throw DomainError("parse_dimacs: variable map out of range");
        cnf.var_meaning[var - 1] = m;
        max_color = std::max(max_color, m.second);
    }
    cnf.k = multi_color ? max_color + 1 : 2;
    return cnf;
}

bool satisfies(const Cnf& cnf, const std::vector<bool>& model) {
    return std::all_of(cnf.clauses.begin(), cnf.clauses.end(), [&](const std::vector<int>& clause) {
        return std::any_of(clause.begin(), clause.end(), [&](int lit) {
            const bool value = model.at(static_cast<std::size_t>(std::abs(lit)) - 1);
            return lit > 0 ? value : !value;
        });
    });
}

Coloring decode_model(const Cnf& cnf, const std::vector<bool>& model, std::size_t vertex_count) {
    Coloring c{cnf.k, std::vector<unsigned>(vertex_count, 0)};
    if (cnf.k == 2) {
        for (std::size_t var = 0; var < cnf.variables; ++var) {
            const std::size_t v = cnf.var_meaning[var].first;
            if (v >= vertex_count) throw DomainError("decode_model: vertex out of range");
            c.colors[v] = model.at(var) ? 1 : 0;
        }
        return c;
    }
    std::vector<unsigned> hits(vertex_count, 0);
    for (std::size_t var = 0; var < cnf.variables; ++var) {
        if (!model.at(var)) continue;
        const auto [v, color] = cnf.var_meaning[var];
        if (v >= vertex_count) throw DomainError("decode_model: vertex out of range");
        c.colors[v] = color;
        ++hits[v];
    }
    for (std::size_t v = 0; v < vertex_count; ++v) {
        if (hits[v] != 1) throw DomainError("decode_model: vertex " + std::to_string(v) + " is not colored exactly once");
    }
    return c;
}

MonoCounts count_mono_triples(const ColorRule& rule, const Natural& bound, const Caps& caps, bool deterministic) {
    const std::vector<ExpTriple> triples = enumerate_triples(bound, caps);

    std::vector<Natural> values;
    values.reserve(3 * triples.size());
    for (const auto& t : triples) {
        values.push_back(evaluate(t.a, caps));
        values.push_back(evaluate(t.b, caps));
        values.push_back(evaluate(t.c, caps));
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    std::vector<unsigned> colors(values.size());
    std::vector<std::string> failures(values.size());
    detail::parallel_chunks(values.size(), worker_count(deterministic),
                            [&](std::size_t begin, std::size_t end, unsigned) {
                                for (std::size_t i = begin; i < end; ++i) {
                                    try {
                                        colors[i] = rule.color(values[i], caps);
                                    } catch (const DomainError& e) {
                                        failures[i] = e.what();
                                    }
                                }
                            });
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!failures[i].empty()) {
            throw DomainError("rule '" + rule.source() + "' failed at n=" + decimal(values[i]) + ": " + failures[i]);
        }
    }

    auto color_of = [&](const PowerForm& p) {
        const Natural v = evaluate(p, caps);
        return colors[static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), v) - values.begin())];
    };

    MonoCounts counts;
    counts.bound = bound;
    counts.per_cell.assign(rule.k(), 0);
    counts.triples = triples.size();
    for (const auto& t : triples) {
        const unsigned ca = color_of(t.a), cb = color_of(t.b), cc = color_of(t.c);
        if (ca == cb && cb == cc) {
            ++counts.per_cell[ca];
            ++counts.monochromatic;
        } else {
            ++counts.rainbow;
        }
    }
    return counts;
}

}  // namespace exporamsey
