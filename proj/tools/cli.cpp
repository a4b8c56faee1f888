#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "exporamsey/coloring.hpp"
#include "exporamsey/errors.hpp"
#include "exporamsey/greedy.hpp"
#include "exporamsey/ipsets.hpp"
#include "exporamsey/serialize.hpp"
#include "exporamsey/structures.hpp"
#include "exporamsey/triples.hpp"

namespace exporamsey::cli {

namespace {

/// Reported as exit code 2 after the result has been printed.
struct Inconclusive {};

struct RunConfig {
    Caps caps;
    std::uint64_t seed = 1;
    bool deterministic = false;
    std::string format = "json";
};

std::vector<Natural> parse_list(const std::string& text) {
    std::vector<Natural> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) out.push_back(parse_natural(item));
    }
    return out;
}

std::vector<Value> parse_values(const std::string& text) {
    std::vector<Value> out;
    for (const auto& n : parse_list(text)) {
        if (!n.fits_ulong_p()) throw DomainError("window value " + decimal(n) + " is too large");
        out.push_back(n.get_ui());
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Json parse_json_arg(const std::string& text) {
    const std::string body = !text.empty() && text[0] == '@' ? read_file(text.substr(1)) : text;
    return Json::parse(body);
}

// "all", "even", "odd", "empty" or a SetSpec JSON object (inline or @file).
SetSpec parse_set(const std::string& text, const Caps& caps) {
    if (text == "all") return SetSpec::residue(1, 0);
    if (text == "even") return SetSpec::residue(2, 0);
    if (text == "odd") return SetSpec::residue(2, 1);
    if (text == "empty") return SetSpec::explicit_list({}, caps);
    return set_spec_from_json(parse_json_arg(text), caps);
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

// --- shared options -------------------------------------------------------

struct GraphSource {
    std::string seeds;
    std::size_t depth = 0;
    std::string file;
    std::size_t sample = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--seeds", seeds, "comma separated closure seeds (>= 2)");
        cmd->add_option("--depth", depth, "closure depth");
        cmd->add_option("--hypergraph", file, "hypergraph JSON file instead of a closure");
        cmd->add_option("--sample", sample, "keep a random induced sub-hypergraph on this many vertices");
    }

    TripleHypergraph load(const RunConfig& cfg) const {
        TripleHypergraph h;
        if (!file.empty()) {
            h = hypergraph_from_json(Json::parse(read_file(file)), cfg.caps);
        } else {
            if (seeds.empty()) throw CLI::ValidationError("--seeds or --hypergraph is required");
            h = exp_closure(parse_list(seeds), depth, cfg.caps);
        }
        if (sample != 0 && sample < h.vertices.size()) {
            std::mt19937_64 rng(cfg.seed);
            std::vector<std::size_t> idx(h.vertices.size());
            for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
            std::shuffle(idx.begin(), idx.end(), rng);
            idx.resize(sample);
            h = induced_subgraph(h, idx);
        }
        return h;
    }
};

struct WindowSource {
    std::string members;
    std::string set;
    Value lo = 0;
    Value hi = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--members", members, "comma separated members of A");
        cmd->add_option("--set", set, "set spec (all|even|odd|empty|JSON|@file) evaluated on the window");
        cmd->add_option("--lo", lo, "window lower bound")->required();
        cmd->add_option("--hi", hi, "window upper bound")->required();
    }

    WindowSet load(const RunConfig& cfg) const {
        if (!members.empty()) {
            std::vector<Value> values = parse_values(members);
            std::erase_if(values, [&](Value v) { return v < lo || v > hi; });
            return WindowSet::make(lo, hi, std::move(values));
        }
        if (!set.empty()) return WindowSet::from_spec(parse_set(set, cfg.caps), lo, hi, cfg.caps);
        // Empty --members means the empty set.
        return WindowSet::make(lo, hi, {});
    }
};

void apply_config_file(RunConfig& cfg, const std::string& path) {
    const Json j = Json::parse(read_file(path));
    auto take = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    take("value_bit_cap", cfg.caps.value_bit_cap);
    take("exp_bit_cap", cfg.caps.exp_bit_cap);
    take("vertex_budget", cfg.caps.vertex_budget);
    take("max_closure_depth", cfg.caps.max_closure_depth);
    take("search_budget", cfg.caps.search_budget);
    take("seed", cfg.seed);
    take("deterministic", cfg.deterministic);
    take("format", cfg.format);
}

void validate(const RunConfig& cfg) {
    if (cfg.caps.value_bit_cap == 0 || cfg.caps.exp_bit_cap == 0 || cfg.caps.vertex_budget == 0 ||
        cfg.caps.search_budget == 0) {
        throw CLI::ValidationError("caps must be positive");
    }
    if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "dimacs") {
        throw CLI::ValidationError("--format must be json, csv or dimacs");
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exporamsey: finite experiments on exponential patterns in partitions of the naturals"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_help_all_flag("--help-all", "show help for every subcommand");

    RunConfig flags;
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; explicit flags win");
    auto* o_value_cap = app.add_option("--value-bit-cap", flags.caps.value_bit_cap, "max bits of a materialized value");
    auto* o_exp_cap = app.add_option("--exp-bit-cap", flags.caps.exp_bit_cap, "max bits of a power-form exponent");
    auto* o_vertex = app.add_option("--vertex-budget", flags.caps.vertex_budget, "closure vertex budget");
    auto* o_depth = app.add_option("--max-depth", flags.caps.max_closure_depth, "largest closure depth accepted");
    auto* o_budget = app.add_option("--search-budget", flags.caps.search_budget, "node budget for searches");
    auto* o_seed = app.add_option("--seed", flags.seed, "seed for sampling");
    auto* o_det = app.add_flag("--deterministic", flags.deterministic, "single-threaded, reproducible output");
    auto* o_format = app.add_option("--format", flags.format, "json | csv | dimacs");

    RunConfig cfg;
    std::function<void()> action;

    // structures
    auto* structures = app.add_subcommand("structures", "FS, FP, FE^I and FE^II of a seed set");
    structures->require_subcommand(1);
    std::string st_seeds;
    std::optional<std::size_t> st_depth;
    for (const char* kind : {"fs", "fp", "fe1", "fe2"}) {
        auto* cmd = structures->add_subcommand(kind, std::string("generate ") + kind);
        cmd->add_option("--seeds", st_seeds, "comma separated, strictly increasing for fe1/fe2")->required();
        cmd->add_option("--depth", st_depth, "level n (fe1/fe2; default |seeds| - 1)");
        const std::string name = kind;
        cmd->callback([&, name] {
            action = [&, name] {
                const auto seeds = parse_list(st_seeds);
                if (name == "fs" || name == "fp") {
                    const auto elements = name == "fs" ? fs(seeds, cfg.caps) : fp(seeds, cfg.caps);
                    emit(out, fsfp_to_json(name == "fs", seeds, elements));
                    return;
                }
                if (seeds.empty()) throw DomainError("fe needs at least one seed");
                const std::size_t level = st_depth.value_or(seeds.size() - 1);
                const auto forms = to_power_forms(seeds, cfg.caps);
                const FeType type = name == "fe1" ? FeType::One : FeType::Two;
                const FeLevel result = type == FeType::One ? fe1(forms, level, cfg.caps) : fe2(forms, level, cfg.caps);
                emit(out, fe_to_json(type, seeds, result, cfg.caps));
            };
        });
    }

    // triples
    auto* triples = app.add_subcommand("triples", "exponential triples a^b = c");
    triples->require_subcommand(1);
    auto* triples_enum = triples->add_subcommand("enum", "all triples with c <= max, sorted by (c, a, b)");
    std::string tr_max;
    triples_enum->add_option("--max", tr_max, "bound N")->required();
    triples_enum->callback([&] {
        action = [&] {
            const Natural bound = parse_natural(tr_max);
            std::size_t count = 0;
            if (cfg.format == "csv") {
                out << "a,b,c\n";
                for_each_triple(bound, [&](const ExpTriple& t) {
                    out << decimal(evaluate(t.a, cfg.caps)) << ',' << decimal(evaluate(t.b, cfg.caps)) << ','
                        << decimal(evaluate(t.c, cfg.caps)) << '\n';
                }, cfg.caps);
                return;
            }
            out << "{\"max\":\"" << decimal(bound) << "\",\"triples\":[";
            for_each_triple(bound, [&](const ExpTriple& t) {
                out << (count++ == 0 ? "\n" : ",\n") << "[\"" << decimal(evaluate(t.a, cfg.caps)) << "\",\""
                    << decimal(evaluate(t.b, cfg.caps)) << "\",\"" << decimal(evaluate(t.c, cfg.caps)) << "\"]";
            }, cfg.caps);
            out << (count == 0 ? "" : "\n") << "],\"count\":" << count << "}\n";
        };
    });

    // closure
    auto* closure = app.add_subcommand("closure", "exponentiation closure hypergraph of a seed set");
    GraphSource cl_source;
    cl_source.attach(closure);
    closure->callback([&] { action = [&] { emit(out, to_json(cl_source.load(cfg))); }; });

    // color
    auto* color = app.add_subcommand("color", "colorability of triple hypergraphs and coloring rules");
    color->require_subcommand(1);
    GraphSource co_source;
    unsigned co_k = 2;
    std::string co_method = "backtracking";
    std::string co_coloring;

    auto* solve = color->add_subcommand("solve", "decide k-colorability without monochromatic edges");
    co_source.attach(solve);
    solve->add_option("--k", co_k, "number of cells");
    solve->add_option("--method", co_method, "backtracking | exhaustive")
        ->check(CLI::IsMember({"backtracking", "exhaustive"}));
    solve->callback([&] {
        action = [&] {
            const TripleHypergraph h = co_source.load(cfg);
            const SolveMethod method = co_method == "exhaustive" ? SolveMethod::Exhaustive : SolveMethod::Backtracking;
            const ColorabilityResult r = solve_colorability(h, co_k, method, cfg.caps, cfg.deterministic);
            Json j;
            j["status"] = r.satisfiable ? "SAT" : "UNSAT";
            j["method"] = co_method;
            j["vertices"] = h.vertices.size();
            j["edges"] = h.edges.size();
            j["nodes"] = r.nodes;
            if (r.witness) j["coloring"] = to_json(h, *r.witness);
            emit(out, j);
        };
    });

    auto* export_cnf = color->add_subcommand("export-cnf", "DIMACS CNF of k-colorability");
    co_source.attach(export_cnf);
    export_cnf->add_option("--k", co_k, "number of cells");
    export_cnf->callback([&] { action = [&] { out << export_dimacs(co_source.load(cfg), co_k); }; });

    auto* check = color->add_subcommand("check", "list monochromatic edges of a coloring");
    co_source.attach(check);
    check->add_option("--coloring", co_coloring, "coloring JSON (inline or @file)")->required();
    check->callback([&] {
        action = [&] {
            const TripleHypergraph h = co_source.load(cfg);
            const Coloring c = coloring_from_json(h, parse_json_arg(co_coloring));
            const auto mono = check_coloring(h, c);
            Json j;
            Json edges = Json::array();
            for (const auto& e : mono) edges.push_back({e.a, e.b, e.c});
            j["monochromatic"] = std::move(edges);
            j["count"] = mono.size();
            emit(out, j);
        };
    });

    auto* rule_count = color->add_subcommand("rule-count", "count monochromatic triples under a coloring rule");
    std::string rc_rule;
    std::vector<std::string> rc_max;
    unsigned rc_k = 2;
    rule_count->add_option("--rule", rc_rule, "rule expression in n")->required();
    rule_count->add_option("--k", rc_k, "number of cells");
    rule_count->add_option("--max", rc_max, "bound N (repeatable)")->required();
    rule_count->callback([&] {
        action = [&] {
            const ColorRule rule = parse_rule(rc_rule, rc_k);
            if (cfg.format == "json") {
                Json rows = Json::array();
                for (const auto& m : rc_max) {
                    const MonoCounts c = count_mono_triples(rule, parse_natural(m), cfg.caps, cfg.deterministic);
                    Json row;
                    row["N"] = decimal(c.bound);
                    row["per_cell"] = c.per_cell;
                    row["monochromatic"] = c.monochromatic;
                    row["rainbow"] = c.rainbow;
                    row["triples"] = c.triples;
                    rows.push_back(std::move(row));
                }
                Json j;
                j["rule"] = rc_rule;
                j["k"] = rc_k;
                j["counts"] = std::move(rows);
                emit(out, j);
                return;
            }
            out << "N,cell,count\n";
            for (const auto& m : rc_max) {
                const MonoCounts c = count_mono_triples(rule, parse_natural(m), cfg.caps, cfg.deterministic);
                for (std::size_t cell = 0; cell < c.per_cell.size(); ++cell) {
                    out << decimal(c.bound) << ',' << cell << ',' << c.per_cell[cell] << '\n';
                }
                out << decimal(c.bound) << ",total," << c.monochromatic << '\n';
            }
        };
    });

    // ip
    auto* ip = app.add_subcommand("ip", "windowed IP / IP* analysis");
    ip->require_subcommand(1);
    WindowSource ip_window;
    std::string ip_op;
    std::int64_t ip_n = 0;
    std::size_t ip_m = 1;
    std::string ip_kind = "additive";
    std::size_t ip_length = 3;

    auto* ip_transform = ip->add_subcommand("transform", "preimage under shift/divide/log/root");
    ip_window.attach(ip_transform);
    ip_transform->add_option("--op", ip_op, "shift | divide | log | root")
        ->required()
        ->check(CLI::IsMember({"shift", "divide", "log", "root"}));
    ip_transform->add_option("--n", ip_n, "transform parameter")->required();
    ip_transform->callback([&] {
        action = [&] {
            const std::map<std::string, SetTransform::Kind> kinds{{"shift", SetTransform::Kind::Shift},
                                                                  {"divide", SetTransform::Kind::Divide},
                                                                  {"log", SetTransform::Kind::Log},
                                                                  {"root", SetTransform::Kind::Root}};
            emit(out, to_json(transform(ip_window.load(cfg), {kinds.at(ip_op), ip_n})));
        };
    });

    auto* ip_find = ip->add_subcommand("find-seed", "least X with FS(X) (or FP(X)) inside A");
    ip_window.attach(ip_find);
    ip_find->add_option("--m", ip_m, "size of X")->required();
    ip_find->add_option("--kind", ip_kind, "additive | multiplicative")
        ->check(CLI::IsMember({"additive", "multiplicative"}));
    ip_find->callback([&] {
        action = [&] {
            const WindowSet a = ip_window.load(cfg);
            const SeedSearch s = ip_kind == "additive" ? find_fs_seed(a, ip_m, cfg.caps.search_budget)
                                                       : find_fp_seed(a, ip_m, cfg.caps.search_budget);
            emit(out, to_json(s));
            if (s.status == SearchStatus::Inconclusive) throw Inconclusive{};
        };
    });

    auto* ip_star = ip->add_subcommand("ip-star", "windowed IP* verdict for a set spec");
    std::string is_set;
    Value is_lo = 1, is_hi = 100;
    ip_star->add_option("--set", is_set, "set spec (all|even|odd|empty|JSON|@file)")->required();
    ip_star->add_option("--kind", ip_kind, "additive | multiplicative")
        ->check(CLI::IsMember({"additive", "multiplicative"}));
    ip_star->add_option("--m", ip_m, "size of X")->required();
    ip_star->add_option("--lo", is_lo, "window lower bound");
    ip_star->add_option("--hi", is_hi, "window upper bound");
    ip_star->callback([&] {
        action = [&] {
            const IpStarVerdict v =
                is_ip_star_window(parse_set(is_set, cfg.caps), ip_kind == "additive" ? IpKind::Additive : IpKind::Multiplicative,
                                  ip_m, is_lo, is_hi, cfg.caps, cfg.caps.search_budget);
            emit(out, to_json(v));
            if (v.verdict == Verdict::Inconclusive) throw Inconclusive{};
        };
    });

    auto* ip_gp = ip->add_subcommand("gp", "geometric progressions a, ah, ..., ah^(k-1) inside A");
    ip_window.attach(ip_gp);
    ip_gp->add_option("--length", ip_length, "number of terms k");
    ip_gp->callback([&] {
        action = [&] {
            Json list = Json::array();
            for (const auto& [a, h] : find_geometric_progressions(ip_window.load(cfg), ip_length)) list.push_back({a, h});
            Json j;
            j["length"] = ip_length;
            j["progressions"] = std::move(list);
            emit(out, j);
        };
    });

    auto* ip_pp = ip->add_subcommand("powerprog", "progressions h, h^2, ..., h^k inside A");
    ip_window.attach(ip_pp);
    ip_pp->add_option("--length", ip_length, "number of terms k");
    ip_pp->callback([&] {
        action = [&] {
            Json j;
            j["length"] = ip_length;
            j["bases"] = find_power_progressions(ip_window.load(cfg), ip_length);
            emit(out, j);
        };
    });

    // greedy
    auto* greedy = app.add_subcommand("greedy", "finite constructions of FE structures inside a set");
    greedy->require_subcommand(1);
    std::string gr_set;
    std::size_t gr_depth = 1;
    std::string gr_lo = "2", gr_hi = "100";
    std::string gr_y, gr_x, gr_f = "const:2";
    std::size_t gr_steps = 1;
    BlockLimits gr_limits;

    for (const char* kind : {"fe1", "fe2"}) {
        auto* cmd = greedy->add_subcommand(kind, std::string("least-choice ") + kind + " certificate");
        cmd->add_option("--set", gr_set, "set spec A")->required();
        cmd->add_option("--depth", gr_depth, "certificate depth");
        cmd->add_option("--lo", gr_lo, "selection window lower bound");
        cmd->add_option("--hi", gr_hi, "selection window upper bound");
        const std::string name = kind;
        cmd->callback([&, name] {
            action = [&, name] {
                const SetSpec a = parse_set(gr_set, cfg.caps);
                const Window w{parse_natural(gr_lo), parse_natural(gr_hi)};
                const GreedyFeResult r =
                    name == "fe1" ? greedy_fe1(a, gr_depth, w, cfg.caps) : greedy_fe2(a, gr_depth, w, cfg.caps);
                emit(out, to_json(r, cfg.caps));
                if (!r.success && (r.reason == "oracle range" || r.reason == "capacity")) throw Inconclusive{};
            };
        });
    }

    for (const char* kind : {"fegen1", "fegen2"}) {
        auto* cmd = greedy->add_subcommand(kind, std::string("block search for ") + kind);
        cmd->add_option("--set", gr_set, "set spec A")->required();
        cmd->add_option("--y", gr_y, "comma separated y prefix")->required();
        cmd->add_option("--f", gr_f, "const:<c> | max-fe1");
        cmd->add_option("--steps", gr_steps, "number of blocks m");
        cmd->add_option("--max-block", gr_limits.max_block_size, "largest block size");
        cmd->add_option("--max-index", gr_limits.max_index, "block indices stay below this");
        const std::string name = kind;
        cmd->callback([&, name] {
            action = [&, name] {
                FSpec f;
                if (gr_f == "max-fe1") f = FSpec::max_fe1();
                else if (gr_f.rfind("const:", 0) == 0) f = FSpec::constant_value(parse_natural(gr_f.substr(6)));
                else throw CLI::ValidationError("--f must be const:<c> or max-fe1");
                BlockLimits limits = gr_limits;
                limits.budget = cfg.caps.search_budget;
                const SetSpec a = parse_set(gr_set, cfg.caps);
                const auto y = parse_list(gr_y);
                const FegenResult r = name == "fegen1" ? search_fegen1(a, y, f, gr_steps, limits, cfg.caps)
                                                       : search_fegen2(a, y, f, gr_steps, limits, cfg.caps);
                emit(out, to_json(r));
                if (r.outcome == SearchOutcome::Inconclusive) throw Inconclusive{};
            };
        });
    }

    auto* verify = greedy->add_subcommand("verify", "check FS(X), FE^I(X), FP(Y), FE^II(Y) inside A");
    verify->add_option("--set", gr_set, "set spec A")->required();
    verify->add_option("--x", gr_x, "comma separated X");
    verify->add_option("--y", gr_y, "comma separated Y");
    verify->add_option("--depth", gr_depth, "FE depth");
    verify->callback([&] {
        action = [&] {
            std::optional<std::vector<Natural>> x, y;
            if (!gr_x.empty()) x = parse_list(gr_x);
            if (!gr_y.empty()) y = parse_list(gr_y);
            const FecorReport r = verify_fecor(parse_set(gr_set, cfg.caps), x, y, gr_depth, cfg.caps);
            emit(out, to_json(r));
            for (const auto* v : {&r.fs, &r.fe1, &r.fp, &r.fe2}) {
                if (v->status == CheckVerdict::Status::Inconclusive) throw Inconclusive{};
            }
        };
    });

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (!config_path.empty()) apply_config_file(cfg, config_path);
        // Explicit flags override the config file.
        if (o_value_cap->count()) cfg.caps.value_bit_cap = flags.caps.value_bit_cap;
        if (o_exp_cap->count()) cfg.caps.exp_bit_cap = flags.caps.exp_bit_cap;
        if (o_vertex->count()) cfg.caps.vertex_budget = flags.caps.vertex_budget;
        if (o_depth->count()) cfg.caps.max_closure_depth = flags.caps.max_closure_depth;
        if (o_budget->count()) cfg.caps.search_budget = flags.caps.search_budget;
        if (o_seed->count()) cfg.seed = flags.seed;
        if (o_det->count()) cfg.deterministic = flags.deterministic;
        if (o_format->count()) cfg.format = flags.format;
        validate(cfg);
        if (action) action();
        out.flush();
        return kExitOk;
    } catch (const Inconclusive&) {
        out.flush();
        return kExitCapacity;
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return kExitUsage;
    } catch (const CapacityError& e) {
        err << "capacity: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const SyntaxError& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const nlohmann::json::exception& e) {
        err << "error: bad JSON input: " << e.what() << '\n';
        return kExitDomain;
    }
}

}  // namespace exporamsey::cli
