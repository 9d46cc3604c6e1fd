// qex: analyze WHILE programs by compiling them to quantum circuits whose
// superposed execution walks every input at once, then score the recovered
// value sets against brute force. JSON goes to stdout, notes to stderr.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qex/amplify/search.hpp"
#include "qex/classical/enumerate.hpp"
#include "qex/classical/interval.hpp"
#include "qex/cli/corpus.hpp"
#include "qex/hybrid/run.hpp"
#include "qex/lang/parser.hpp"
#include "qex/lang/validate.hpp"
#include "qex/report/approx.hpp"
#include "qex/report/cost.hpp"
#include "qex/sim/measure.hpp"
#include "qex/synth/synthesize.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qex;

struct Settings {
    std::string path;
    int m = 3;
    int k = 8;
    bool m_set = false, k_set = false;
    std::vector<std::string> opt;
    std::string domain_file;
    std::string backend = "auto";
    std::string var;
    std::string target;
    std::string feed = "auto";
    std::string format = "json";
    std::uint64_t shots = 1000;
    std::uint64_t seed = 1;
    double delta = 0.1;
    int rounds = -1;
    int n = 4;
    int split = -1;
    std::uint64_t cap = classical::default_cap;
};

// Loads one program plus its sidecar domain and manifest row, if present.
cli::CorpusEntry file_entry(const std::string& path) {
    fs::path f(path);
    if (fs::is_directory(f)) throw cli::CorpusError("'" + path + "' is a directory");
    cli::CorpusEntry e;
    e.name = f.stem().string();
    e.path = path;
    e.source = cli::slurp(path);
    e.program = lang::parse(e.source);
    e.loops = cli::has_loops(e.program);
    e.pointers = cli::has_pointers(e.program);
    e.exact = !e.loops;

    const fs::path side = f.parent_path() / (e.name + ".dom.json");
    if (fs::exists(side))
        e.dom = classical::domain_from_json(json::parse(cli::slurp(side.string())));

    const fs::path mpath = f.parent_path() / "manifest.json";
    if (fs::exists(mpath)) {
        auto manifest = json::parse(cli::slurp(mpath.string()));
        for (const auto& row : manifest)
            if (row.value("name", "") == e.name) {
                e.m = row.value("m", e.m);
                e.k = row.value("k", e.k);
                e.exact = row.value("exact", e.exact);
                break;
            }
    }
    return e;
}

std::vector<cli::CorpusEntry> entries_for(const std::string& path) {
    if (fs::is_directory(path)) return cli::load_corpus(path);
    return {file_entry(path)};
}

// Command-line overrides beat manifest rows, which beat defaults.
void apply_overrides(cli::CorpusEntry& e, const Settings& s) {
    if (s.m_set) e.m = s.m;
    if (s.k_set) e.k = s.k;
    if (!s.domain_file.empty())
        e.dom = classical::domain_from_json(json::parse(cli::slurp(s.domain_file)));
}

synth::SynthOptions synth_options(const cli::CorpusEntry& e, const Settings& s) {
    synth::SynthOptions o;
    o.m = e.m;
    o.k = e.k;
    for (const auto& f : s.opt) {
        if (f == "uncompute")
            o.uncompute = true;
        else if (f == "share")
            o.share_immediates = true;
        else if (f == "parallel")
            o.parallel_copy = true;
        else if (f == "fourier")
            o.backend = synth::Backend::fourier;
        else
            throw cli::CorpusError("unknown optimization '" + f + "'");
    }
    return o;
}

void emit_notes(const synth::SynthResult& r) {
    for (const auto& d : r.diagnostics) std::fprintf(stderr, "qex: note: %s\n", d.c_str());
}

json counts_json(const classical::ValueDist& d) {
    json c = json::object();
    for (const auto& [v, n] : d.counts) c[std::to_string(v)] = n;
    return c;
}

std::set<std::uint64_t> support_of(const classical::ValueDist& d) {
    std::set<std::uint64_t> s;
    for (const auto& [v, n] : d.counts) s.insert(v);
    return s;
}

// Exact output distribution of one program variable after simulation.
classical::ValueDist var_dist(const synth::SynthResult& r, const sim::SparseState& st,
                              const std::string& var) {
    auto it = r.var_reg.find(var);
    if (it == r.var_reg.end())
        throw cli::CorpusError("program never binds '" + var + "'");
    return sim::marginal_rational(st, r.circuit.reg(it->second));
}

classical::ValueDist oracle_dist(const cli::CorpusEntry& e, const std::string& var) {
    classical::InputDomain dom = e.dom;
    for (const auto& prm : e.program.params)
        if (prm.pointer && !dom.count(prm.name)) dom[prm.name] = classical::VarDomain::set({0});
    auto en = classical::enumerate(e.program, dom, e.m, {var});
    auto it = en.marginals.find(var);
    if (it == en.marginals.end())
        throw cli::CorpusError("program never binds '" + var + "'");
    return it->second;
}

// ---- subcommands ------------------------------------------------------

json cmd_check_one(const cli::CorpusEntry& e, const Settings& s) {
    lang::Backend be = lang::Backend::quantum;
    if (s.backend == "classical" || (s.backend == "auto" && e.pointers))
        be = lang::Backend::classical;
    auto violations = lang::validate(e.program, e.m, be);
    json v = json::array();
    for (const auto& x : violations)
        v.push_back({{"message", x.message}, {"line", x.pos.line}, {"col", x.pos.col}});
    return {{"name", e.name},
            {"backend", be == lang::Backend::quantum ? "quantum" : "classical"},
            {"violations", v}};
}

json cmd_analyze_one(const cli::CorpusEntry& e, const Settings& s) {
    if (e.pointers) {
        auto r = hybrid::run_hybrid(e.program, e.dom, synth_options(e, s));
        emit_notes(r.synth);
        json j = hybrid::hybrid_json(r);
        j["name"] = e.name;
        j["var"] = lang::ret_var;
        j["counts"] = counts_json(r.dist);
        j["total"] = r.dist.total;
        return j;
    }
    auto o = synth_options(e, s);
    auto r = synth::synthesize(e.program, e.dom, o);
    emit_notes(r);
    auto st = sim::run(r.circuit, amplify::initial_state(r));
    const std::string var = s.var.empty() ? r.output_var : s.var;
    auto dist = var_dist(r, st, var);
    // score against brute force on the same variable; loops are enumerated
    // to completion, so a too-small unroll bound shows up as under-rate
    const std::string ovar = s.var.empty() ? lang::ret_var : var;
    auto truth = support_of(oracle_dist(e, ovar));
    auto rates = report::rates(truth, support_of(dist));
    json j;
    j["name"] = e.name;
    j["var"] = var;
    j["qubits"] = r.circuit.qubits;
    j["gates"] = r.circuit.gate_count();
    j["counts"] = counts_json(dist);
    j["total"] = dist.total;
    j["rates"] = report::rates_json(rates);
    return j;
}

json cmd_oracle_one(const cli::CorpusEntry& e, const Settings& s) {
    const std::string var = s.var.empty() ? lang::ret_var : s.var;
    auto dist = oracle_dist(e, var);
    return {{"name", e.name},
            {"var", var},
            {"counts", counts_json(dist)},
            {"total", dist.total}};
}

json cmd_synth_one(const cli::CorpusEntry& e, const Settings& s) {
    auto r = synth::synthesize(e.program, e.dom, synth_options(e, s));
    emit_notes(r);
    json j = synth::layout_json(r);
    j["name"] = e.name;
    return j;
}

json cmd_estimate_one(const cli::CorpusEntry& e, const Settings& s) {
    auto r = synth::synthesize(e.program, e.dom, synth_options(e, s));
    auto est = report::estimate(r.tally, s.n);
    json j;
    j["name"] = e.name;
    j["n"] = s.n;
    j["tally"] = {{"add", r.tally.add},
                  {"sub", r.tally.sub},
                  {"mul", r.tally.mul},
                  {"div", r.tally.div},
                  {"if_else", r.tally.if_else}};
    j["gates"] = est.gates;
    j["depth"] = est.depth;
    j["rows"] = report::cost_row(s.n);
    return j;
}

json cmd_run(const cli::CorpusEntry& e, const Settings& s) {
    auto r = synth::synthesize(e.program, e.dom, synth_options(e, s));
    emit_notes(r);
    auto st = sim::run(r.circuit, amplify::initial_state(r));
    const std::string var = s.var.empty() ? r.output_var : s.var;
    auto it = r.var_reg.find(var);
    if (it == r.var_reg.end()) throw cli::CorpusError("program never binds '" + var + "'");
    auto counts = sim::sample(st, {r.circuit.reg(it->second)}, s.shots, s.seed);
    json c = json::object();
    for (const auto& [tuple, n] : counts) c[std::to_string(tuple[0])] = n;
    return {{"name", e.name}, {"var", var},      {"shots", s.shots},
            {"seed", s.seed}, {"counts", c},     {"qubits", r.circuit.qubits}};
}

json cmd_search(const cli::CorpusEntry& e, const Settings& s) {
    if (s.target.empty()) throw cli::CorpusError("search needs --target");
    auto found = amplify::search(e.program, e.dom, synth_options(e, s), s.target, s.delta,
                                 s.rounds);
    emit_notes(found.synth);
    const std::string var = s.var.empty() ? found.synth.output_var : s.var;
    auto it = found.synth.var_reg.find(var);
    if (it == found.synth.var_reg.end())
        throw cli::CorpusError("program never binds '" + var + "'");
    auto counts =
        sim::sample(found.result.state, {found.synth.circuit.reg(it->second)}, s.shots, s.seed);
    json c = json::object();
    for (const auto& [tuple, n] : counts) c[std::to_string(tuple[0])] = n;
    return {{"name", e.name},     {"target", s.target}, {"var", var},
            {"shots", s.shots},   {"seed", s.seed},     {"stats", amplify::stats_json(found.result.stats)},
            {"counts", c}};
}

json cmd_hybrid(const cli::CorpusEntry& e, const Settings& s) {
    auto o = synth_options(e, s);
    hybrid::Plan pl = s.split >= 0
                          ? hybrid::plan_at(e.program, e.dom, o.m,
                                            static_cast<std::size_t>(s.split), s.cap)
                          : hybrid::plan(e.program, e.dom, o.m, s.cap);
    if (s.feed == "tuples")
        pl.feed = hybrid::Feed::tuples;
    else if (s.feed == "intervals")
        pl.feed = hybrid::Feed::intervals;
    else if (s.feed != "auto")
        throw cli::CorpusError("unknown feed '" + s.feed + "'");
    auto r = hybrid::run_hybrid(e.program, e.dom, o, pl);
    emit_notes(r.synth);
    json j = hybrid::hybrid_json(r);
    j["name"] = e.name;
    return j;
}

// ---- rendering --------------------------------------------------------

void print_table_row(const std::string& a, const std::string& b) {
    std::printf("%-24s %s\n", a.c_str(), b.c_str());
}

// Flat key/value view of one result object; maps render one row per entry.
void print_table(const json& j) {
    for (const auto& [key, val] : j.items()) {
        if (val.is_object()) {
            std::printf("%s:\n", key.c_str());
            for (const auto& [k2, v2] : val.items())
                print_table_row("  " + k2, v2.dump());
        } else {
            print_table_row(key, val.dump());
        }
    }
}

void emit(const json& j, const Settings& s) {
    if (s.format == "table") {
        if (j.is_array()) {
            bool first = true;
            for (const auto& row : j) {
                if (!first) std::printf("\n");
                print_table(row);
                first = false;
            }
        } else {
            print_table(j);
        }
    } else {
        std::printf("%s\n", j.dump(2).c_str());
    }
}

}  // namespace

int main(int argc, char** argv) {
    Settings s;
    CLI::App app{"quantum exploration workbench for WHILE programs"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* c, bool wants_domain = true) {
        c->add_option("path", s.path, "program file or corpus directory")->required();
        c->add_option("--width,-n", s.m, "variable width in bits");
        c->add_option("--unroll,-k", s.k, "loop unrolling bound");
        c->add_option("--opt", s.opt, "optimizations: uncompute,share,parallel,fourier")
            ->delimiter(',');
        if (wants_domain) c->add_option("--domain", s.domain_file, "input domain JSON file");
        c->add_option("--format", s.format, "json or table")
            ->check(CLI::IsMember({"json", "table"}));
    };

    auto* check = app.add_subcommand("check", "validate programs");
    add_common(check, false);
    check->add_option("--backend", s.backend, "auto, quantum, or classical")
        ->check(CLI::IsMember({"auto", "quantum", "classical"}));

    auto* synth_c = app.add_subcommand("synth", "compile to a circuit and print the layout");
    add_common(synth_c);

    auto* run_c = app.add_subcommand("run", "simulate and sample one variable");
    add_common(run_c);
    run_c->add_option("--shots", s.shots, "sample count");
    run_c->add_option("--seed", s.seed, "sampling seed");
    run_c->add_option("--var", s.var, "variable to sample (default: output)");

    auto* analyze = app.add_subcommand("analyze", "exact value sets scored against brute force");
    add_common(analyze);
    analyze->add_option("--var", s.var, "variable to analyze (default: output)");

    auto* oracle = app.add_subcommand("oracle", "brute-force value sets only");
    add_common(oracle);
    oracle->add_option("--var", s.var, "variable to enumerate (default: return value)");

    auto* search = app.add_subcommand("search", "amplify states satisfying a predicate");
    add_common(search);
    search->add_option("--target", s.target, "predicate over program variables")->required();
    search->add_option("--delta", s.delta, "residual error bound");
    search->add_option("--rounds", s.rounds, "amplification rounds (default: derived)");
    search->add_option("--shots", s.shots, "sample count");
    search->add_option("--seed", s.seed, "sampling seed");
    search->add_option("--var", s.var, "variable to sample (default: output)");

    auto* estimate = app.add_subcommand("estimate", "gate and depth budgets from the cost model");
    add_common(estimate);
    estimate->get_option("--width")->description("cost model wires per operand");

    auto* hybrid_c = app.add_subcommand("hybrid", "classical prefix feeding a quantum suffix");
    add_common(hybrid_c);
    hybrid_c->add_option("--split", s.split, "cut index (default: after last pointer statement)");
    hybrid_c->add_option("--cap", s.cap, "exact-feed tuple cap")->envname("QEX_CAP");
    hybrid_c->add_option("--feed", s.feed, "auto, tuples, or intervals")
        ->check(CLI::IsMember({"auto", "tuples", "intervals"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    s.m_set = app.get_subcommands().front()->count("--width") > 0;
    s.k_set = app.get_subcommands().front()->count("--unroll") > 0;

    try {
        CLI::App* sub = app.get_subcommands().front();
        bool failed = false;
        json out;

        auto fan_out = [&](auto&& one) {
            auto entries = entries_for(s.path);
            if (!fs::is_directory(s.path)) {
                auto e = entries.front();
                apply_overrides(e, s);
                return one(e);
            }
            json rows = json::array();
            for (auto& e : entries) {
                apply_overrides(e, s);
                rows.push_back(one(e));
            }
            return rows;
        };

        if (sub == check) {
            out = fan_out([&](const cli::CorpusEntry& e) { return cmd_check_one(e, s); });
            if (out.is_array()) {
                for (const auto& row : out) failed = failed || !row["violations"].empty();
            } else {
                failed = !out["violations"].empty();
            }
        } else if (sub == synth_c) {
            out = fan_out([&](const cli::CorpusEntry& e) { return cmd_synth_one(e, s); });
        } else if (sub == run_c) {
            auto e = file_entry(s.path);
            apply_overrides(e, s);
            out = cmd_run(e, s);
        } else if (sub == analyze) {
            // estimate n doubles as m elsewhere; analyze keeps m semantics
            out = fan_out([&](const cli::CorpusEntry& e) { return cmd_analyze_one(e, s); });
        } else if (sub == oracle) {
            out = fan_out([&](const cli::CorpusEntry& e) { return cmd_oracle_one(e, s); });
        } else if (sub == search) {
            auto e = file_entry(s.path);
            apply_overrides(e, s);
            out = cmd_search(e, s);
        } else if (sub == estimate) {
            if (s.m_set) {
                s.n = s.m;       // --width names the model, not the program
                s.m_set = false;
            }
            out = fan_out([&](const cli::CorpusEntry& e) { return cmd_estimate_one(e, s); });
        } else if (sub == hybrid_c) {
            auto e = file_entry(s.path);
            apply_overrides(e, s);
            out = cmd_hybrid(e, s);
        }

        emit(out, s);
        return failed ? 2 : 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "qex: %s\n", e.what());
        return 2;
    }
}
