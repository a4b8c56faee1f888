#include "exporamsey/serialize.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "exporamsey/errors.hpp"

namespace exporamsey {

namespace {

Json status_json(const CheckVerdict& v) {
    static const char* names[] = {"holds", "fails", "inconclusive", "skipped"};
    Json out;
    out["verdict"] = names[static_cast<int>(v.status)];
    if (v.element) out["element"] = *v.element;
    return out;
}

Json value_list(const std::vector<Value>& values) {
    Json out = Json::array();
    for (Value v : values) out.push_back(v);
    return out;
}

Value value_from_json(const Json& j) {
    const Natural n = natural_from_json(j);
    if (!n.fits_ulong_p()) throw DomainError("window value too large");
    return n.get_ui();
}

}  // namespace

Json to_json(const PowerForm& p, const Caps& caps) {
    Json out;
    out["root"] = decimal(p.root());
    out["exp"] = decimal(p.exponent());
    out["value"] = is_evaluable(p, caps) ? Json(decimal(evaluate(p, caps))) : Json(nullptr);
    return out;
}

PowerForm power_form_from_json(const Json& j, const Caps& caps) {
    if (j.is_object()) {
        PowerForm p(natural_from_json(j.at("root")), natural_from_json(j.at("exp")));
        if (j.contains("value") && !j.at("value").is_null()) {
            if (!is_evaluable(p, caps) || evaluate(p, caps) != natural_from_json(j.at("value"))) {
                throw DomainError("power form record: value does not match root^exp");
            }
        }
        return p;
    }
    return normalize(natural_from_json(j), caps);
}

Json natural_list(const std::vector<Natural>& values) {
    Json out = Json::array();
    for (const auto& v : values) out.push_back(decimal(v));
    return out;
}

Natural natural_from_json(const Json& j) {
    if (j.is_string()) return parse_natural(j.get<std::string>());
    if (j.is_number_unsigned()) return Natural(std::to_string(j.get<std::uint64_t>()), 10);
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return Natural(std::to_string(j.get<std::int64_t>()), 10);
    throw DomainError("expected a natural number, got " + j.dump());
}

Json fe_to_json(FeType type, const std::vector<Natural>& seeds, const FeLevel& level, const Caps& caps) {
    Json out;
    out["kind"] = type == FeType::One ? "FE1" : "FE2";
    out["seeds"] = natural_list(seeds);
    out["level"] = level.level;
    Json elements = Json::array();
    for (const auto& e : level.elements) elements.push_back(to_json(e, caps));
    out["elements"] = std::move(elements);
    out["dropped"] = level.dropped_count;
    return out;
}

Json fsfp_to_json(bool sums, const std::vector<Natural>& seeds, const std::vector<Natural>& elements) {
    Json out;
    out["kind"] = sums ? "FS" : "FP";
    out["seeds"] = natural_list(seeds);
    out["level"] = seeds.empty() ? 0 : seeds.size() - 1;
    out["elements"] = natural_list(elements);
    out["dropped"] = 0;
    return out;
}

Json caps_to_json(const Caps& caps) {
    Json out;
    out["value_bit_cap"] = caps.value_bit_cap;
    out["exp_bit_cap"] = caps.exp_bit_cap;
    out["vertex_budget"] = caps.vertex_budget;
    out["max_closure_depth"] = caps.max_closure_depth;
    out["search_budget"] = caps.search_budget;
    return out;
}

Json to_json(const TripleHypergraph& h) {
    Json out;
    Json vertices = Json::array();
    for (const auto& v : h.vertices) vertices.push_back(to_json(v, h.meta.caps));
    out["vertices"] = std::move(vertices);
    Json edges = Json::array();
    for (const auto& e : h.edges) edges.push_back({e.a, e.b, e.c});
    out["edges"] = std::move(edges);
    Json meta;
    meta["seeds"] = natural_list(h.meta.seeds);
    meta["depth"] = h.meta.depth;
    meta["caps"] = caps_to_json(h.meta.caps);
    meta["dropped"] = h.meta.dropped_count;
    meta["truncated"] = h.meta.truncated_count;
    out["meta"] = std::move(meta);
    return out;
}

TripleHypergraph hypergraph_from_json(const Json& j, const Caps& caps) {
    TripleHypergraph h;
    h.meta.caps = caps;
    for (const auto& v : j.at("vertices")) h.vertices.push_back(power_form_from_json(v, caps));
    for (std::size_t i = 1; i < h.vertices.size(); ++i) {
        if (compare(h.vertices[i - 1], h.vertices[i], caps) != std::strong_ordering::less) {
            throw DomainError("hypergraph: vertices must be strictly ascending");
        }
    }
    std::set<TripleEdge> seen;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 3) throw DomainError("hypergraph: edges are [a, b, c] index triples");
        TripleEdge edge{e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<std::size_t>()};
        const std::size_t n = h.vertices.size();
        if (edge.a >= n || edge.b >= n || edge.c >= n) throw DomainError("hypergraph: edge index out of range");
        if (!(pow(h.vertices[edge.a], h.vertices[edge.b], caps) == h.vertices[edge.c])) {
            throw DomainError("hypergraph: edge is not an exponential triple");
        }
        if (!seen.insert(edge).second) throw DomainError("hypergraph: duplicate edge");
        h.edges.push_back(edge);
    }
    if (j.contains("meta")) {
        const Json& meta = j.at("meta");
        if (meta.contains("seeds")) {
            for (const auto& s : meta.at("seeds")) h.meta.seeds.push_back(natural_from_json(s));
        }
        h.meta.depth = meta.value("depth", std::size_t{0});
        h.meta.dropped_count = meta.value("dropped", std::size_t{0});
        h.meta.truncated_count = meta.value("truncated", std::size_t{0});
    }
    return h;
}

Json to_json(const TripleHypergraph& h, const Coloring& c) {
    Json out;
    out["k"] = c.k;
    Json colors = Json::object();
    for (std::size_t v = 0; v < c.colors.size() && v < h.vertices.size(); ++v) {
        colors[h.vertices[v].to_string()] = c.colors[v];
    }
    out["colors"] = std::move(colors);
    return out;
}

Coloring coloring_from_json(const TripleHypergraph& h, const Json& j) {
    Coloring c;
    c.k = j.at("k").get<unsigned>();
    const Json& colors = j.at("colors");
    c.colors.resize(h.vertices.size());
    for (std::size_t v = 0; v < h.vertices.size(); ++v) {
        const std::string key = h.vertices[v].to_string();
        if (!colors.contains(key)) throw DomainError("coloring: vertex " + key + " has no color");
        c.colors[v] = colors.at(key).get<unsigned>();
    }
    return c;
}

Json to_json(const WindowSet& w) {
    Json out;
    out["lo"] = w.lo;
    out["hi"] = w.hi;
    out["members"] = value_list(w.members);
    return out;
}

WindowSet window_from_json(const Json& j) {
    std::vector<Value> members;
    for (const auto& m : j.at("members")) members.push_back(value_from_json(m));
    return WindowSet::make(value_from_json(j.at("lo")), value_from_json(j.at("hi")), std::move(members));
}

Json to_json(const SetSpec& s) {
    Json out;
    switch (s.kind()) {
    case SetSpec::Kind::Explicit:
        out["kind"] = "explicit";
        out["members"] = natural_list(s.members());
        break;
    case SetSpec::Kind::Residue:
        out["kind"] = "residue";
        out["modulus"] = decimal(s.modulus());
        out["remainder"] = decimal(s.remainder());
        break;
    case SetSpec::Kind::Rule:
        out["kind"] = "rule";
        out["source"] = s.rule_source();
        out["k"] = s.rule_k();
        out["cell"] = s.rule_cell();
        break;
    case SetSpec::Kind::Complement:
        out["kind"] = "complement";
        out["of"] = to_json(s.inner());
        break;
    }
    if (s.range()) out["range"] = {decimal(s.range()->first), decimal(s.range()->second)};
    return out;
}

SetSpec set_spec_from_json(const Json& j, const Caps& caps) {
    const std::string kind = j.at("kind").get<std::string>();
    auto build = [&]() -> SetSpec {
        if (kind == "explicit") {
            std::vector<Natural> members;
            for (const auto& m : j.at("members")) members.push_back(natural_from_json(m));
            return SetSpec::explicit_list(std::move(members), caps);
        }
        if (kind == "residue") {
            return SetSpec::residue(natural_from_json(j.at("modulus")), natural_from_json(j.at("remainder")));
        }
        if (kind == "rule") {
            return SetSpec::rule(j.at("source").get<std::string>(), j.value("k", 2u), j.value("cell", 1u));
        }
        if (kind == "complement") return SetSpec::complement_of(set_spec_from_json(j.at("of"), caps));
        throw DomainError("unknown set kind '" + kind + "'");
    };
    SetSpec s = build();
    if (j.contains("range")) {
        const Json& r = j.at("range");
        if (!r.is_array() || r.size() != 2) throw DomainError("set range must be [lo, hi]");
        s = s.with_range(natural_from_json(r[0]), natural_from_json(r[1]));
    }
    return s;
}

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

const char* to_string(SearchOutcome o) {
    switch (o) {
    case SearchOutcome::Success: return "success";
    case SearchOutcome::Failure: return "failure";
    case SearchOutcome::Inconclusive: return "inconclusive";
    }
    return "?";
}

Json to_json(const IpStarVerdict& v) {
    Json out;
    out["verdict"] = to_string(v.verdict);
    if (v.verdict == Verdict::Fails) out["witness"] = value_list(v.witness);
    return out;
}

Json to_json(const SeedSearch& s) {
    Json out;
    switch (s.status) {
    case SearchStatus::Found:
        out["status"] = "found";
        out["seed"] = value_list(s.seed);
        break;
    case SearchStatus::None: out["status"] = "none"; break;
    case SearchStatus::Inconclusive: out["status"] = "inconclusive"; break;
    }
    out["nodes"] = s.nodes;
    return out;
}

Json to_json(const GreedyFeResult& r, const Caps& caps) {
    Json out;
    out["status"] = r.success ? "success" : "failure";
    out["chosen"] = natural_list(r.chosen);
    out["level_max"] = natural_list(r.level_max);
    if (r.success) {
        const FeCertificate& cert = *r.certificate;
        Json c;
        c["type"] = cert.type == FeType::One ? "FE1" : "FE2";
        c["seeds"] = natural_list(cert.seeds);
        c["depth"] = cert.depth;
        Json checked = Json::array();
        for (const auto& [element, member] : cert.checked_elements) {
            Json e = to_json(element, caps);
            e["member"] = member;
            checked.push_back(std::move(e));
        }
        c["checked_elements"] = std::move(checked);
        out["certificate"] = std::move(c);
    } else {
        out["step"] = r.failed_step;
        out["reason"] = r.reason;
        if (r.offending) out["offending"] = *r.offending;
    }
    return out;
}

Json to_json(const FegenResult& r) {
    Json out;
    out["status"] = to_string(r.outcome);
    out["nodes"] = r.nodes;
    if (r.state) {
        const GreedyState& s = *r.state;
        Json state;
        state["type"] = s.type == FeType::One ? "fegen1" : "fegen2";
        state["y"] = natural_list(s.y);
        Json blocks = Json::array();
        for (const auto& b : s.blocks) blocks.push_back(b);
        state["blocks"] = std::move(blocks);
        state["chosen"] = natural_list(s.chosen);
        state["level_max"] = natural_list(s.level_max);
        state["f"] = s.f.kind == FSpec::Kind::Constant ? "const:" + decimal(s.f.constant) : std::string("max-fe1");
        out["state"] = std::move(state);
    } else {
        out["reason"] = r.reason;
    }
    return out;
}

Json to_json(const FecorReport& r) {
    Json out;
    out["fs"] = status_json(r.fs);
    out["fe1"] = status_json(r.fe1);
    out["fp"] = status_json(r.fp);
    out["fe2"] = status_json(r.fe2);
    return out;
}

}  // namespace exporamsey
