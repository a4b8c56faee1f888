#pragma once

#include <json.hpp>

#include "exporamsey/coloring.hpp"
#include "exporamsey/config.hpp"
#include "exporamsey/greedy.hpp"
#include "exporamsey/ipsets.hpp"
#include "exporamsey/power_form.hpp"
#include "exporamsey/set_spec.hpp"
#include "exporamsey/structures.hpp"
#include "exporamsey/triples.hpp"

namespace exporamsey {

using Json = nlohmann::ordered_json;

/// {"root": "...", "exp": "...", "value": "..." | null}
Json to_json(const PowerForm& p, const Caps& caps);
/// Accepts the record form or a plain decimal string / integer.
PowerForm power_form_from_json(const Json& j, const Caps& caps);

Json natural_list(const std::vector<Natural>& values);
/// Decimal strings or JSON integers.
Natural natural_from_json(const Json& j);

Json fe_to_json(FeType type, const std::vector<Natural>& seeds, const FeLevel& level, const Caps& caps);
Json fsfp_to_json(bool sums, const std::vector<Natural>& seeds, const std::vector<Natural>& elements);

Json caps_to_json(const Caps& caps);
Json to_json(const TripleHypergraph& h);
TripleHypergraph hypergraph_from_json(const Json& j, const Caps& caps);

/// {"k": k, "colors": {"<vertex>": c}} keyed by PowerForm::to_string().
Json to_json(const TripleHypergraph& h, const Coloring& c);
Coloring coloring_from_json(const TripleHypergraph& h, const Json& j);

Json to_json(const WindowSet& w);
WindowSet window_from_json(const Json& j);

/// {"kind":"explicit","members":[...]} | {"kind":"residue","modulus":m,"remainder":r}
/// | {"kind":"rule","source":"...","k":2,"cell":1} | {"kind":"complement","of":{...}},
/// each with an optional "range": [lo, hi].
Json to_json(const SetSpec& s);
SetSpec set_spec_from_json(const Json& j, const Caps& caps);

Json to_json(const IpStarVerdict& v);
Json to_json(const SeedSearch& s);
Json to_json(const GreedyFeResult& r, const Caps& caps);
Json to_json(const FegenResult& r);
Json to_json(const FecorReport& r);

const char* to_string(SearchOutcome o);
const char* to_string(Verdict v);

}  // namespace exporamsey
