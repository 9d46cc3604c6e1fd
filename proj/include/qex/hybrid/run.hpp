#pragma once

// Executes a split program end to end. The prefix runs classically; its
// outcomes become the initial state of the suffix circuit, either as the
// exact joint set of live-variable tuples or as per-variable intervals.
// The recovered return-value set is scored against brute-force enumeration
// of the whole program, so the over/under rates are measured, not assumed.

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qex/amplify/search.hpp"
#include "qex/classical/enumerate.hpp"
#include "qex/classical/interpret.hpp"
#include "qex/classical/interval.hpp"
#include "qex/hybrid/plan.hpp"
#include "qex/report/approx.hpp"
#include "qex/sim/measure.hpp"
#include "qex/sim/state.hpp"
#include "qex/synth/synthesize.hpp"

namespace qex::hybrid {

struct HybridResult {
    Plan plan;
    synth::SynthResult synth;        // suffix circuit and bookkeeping
    classical::ValueDist dist;       // suffix output distribution
    std::set<std::uint64_t> values;  // predicted reachable return values
    std::uint64_t bound_n = 0;       // states the quantum stage explores
    std::set<std::uint64_t> truth;   // full-program enumeration
    report::Rates rates;             // prediction vs truth
};

namespace detail {

// Interprets the prefix once per input tuple and collects the distinct
// joint values of the live variables, in live order. Pointer parameters
// contribute their pointee cell as the axis; the address itself is opaque.
inline std::vector<std::vector<std::uint64_t>> prefix_tuples(const Plan& pl,
                                                             const classical::InputDomain& dom,
                                                             int m) {
    const lang::Program& pre = pl.parts.prefix;
    std::vector<std::string> cells;
    std::vector<std::vector<std::uint64_t>> axes;
    for (const auto& prm : pre.params) {
        cells.push_back(prm.pointer ? lang::pointee_cell(prm.name) : prm.name);
        axes.push_back(classical::lookup(dom, cells.back()).values(m));
        if (axes.back().empty()) throw HybridError("empty domain for '" + cells.back() + "'");
    }
    std::set<std::vector<std::uint64_t>> seen;
    std::vector<std::size_t> idx(cells.size(), 0);
    while (true) {
        classical::ConcreteEnv env;
        for (std::size_t i = 0; i < cells.size(); ++i) env.values[cells[i]] = axes[i][idx[i]];
        classical::interpret(pre, env, m);
        std::vector<std::uint64_t> tup;
        tup.reserve(pl.parts.live.size());
        for (const auto& v : pl.parts.live) {
            auto it = env.values.find(v);
            if (it == env.values.end()) throw HybridError("prefix leaves '" + v + "' unset");
            tup.push_back(it->second);
        }
        seen.insert(std::move(tup));
        std::size_t i = 0;
        for (; i < idx.size(); ++i) {
            if (++idx[i] < axes[i].size()) break;
            idx[i] = 0;
        }
        if (i == idx.size()) break;
    }
    return {seen.begin(), seen.end()};
}

inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    constexpr std::uint64_t sat = std::uint64_t{1} << 63;
    return (b != 0 && a > sat / b) ? sat : a * b;
}

}  // namespace detail

// Full-program ground truth: every return value brute force can reach.
// Pointer parameters are pinned to a single dummy address so they do not
// inflate the walk; their pointee cells keep whatever domain `dom` gives.
inline std::set<std::uint64_t> ground_truth(const lang::Program& p,
                                            const classical::InputDomain& dom, int m) {
    classical::InputDomain gdom = dom;
    for (const auto& prm : p.params)
        if (prm.pointer && !gdom.count(prm.name))
            gdom[prm.name] = classical::VarDomain::set({0});
    auto en = classical::enumerate(p, gdom, m, {lang::ret_var});
    auto vals = en.marginals.at(lang::ret_var).support();
    return {vals.begin(), vals.end()};
}

inline HybridResult run_hybrid(const lang::Program& p, const classical::InputDomain& dom,
                               const synth::SynthOptions& opts, Plan pl) {
    auto violations = lang::validate(p, opts.m, lang::Backend::classical);
    if (!violations.empty())
        throw HybridError("program rejected: " + violations.front().message);
    if (pl.parts.suffix.body.empty())
        throw HybridError("nothing left for the quantum stage after the cut");

    HybridResult out;
    out.truth = ground_truth(p, dom, opts.m);

    if (pl.feed == Feed::tuples) {
        auto tuples = detail::prefix_tuples(pl, dom, opts.m);
        out.bound_n = tuples.size();
        classical::InputDomain sdom;
        for (std::size_t i = 0; i < pl.parts.live.size(); ++i) {
            std::vector<std::uint64_t> vs;
            vs.reserve(tuples.size());
            for (const auto& t : tuples) vs.push_back(t[i]);
            sdom[pl.parts.live[i]] = classical::VarDomain::set(std::move(vs));
        }
        out.synth = synth::synthesize(pl.parts.suffix, sdom, opts);
        std::vector<circuit::Register> regs;
        regs.reserve(out.synth.inputs.size());
        for (const auto& in : out.synth.inputs) regs.push_back(out.synth.circuit.reg(in.reg));
        auto st = sim::init_joint(out.synth.circuit.qubits, regs, tuples);
        st = sim::run(out.synth.circuit, st);
        out.dist = sim::marginal_rational(
            st, out.synth.circuit.reg(out.synth.var_reg.at(out.synth.output_var)));
    } else {
        auto env = classical::interval_analyze(pl.parts.prefix, dom, opts.m);
        classical::InputDomain sdom;
        out.bound_n = 1;
        for (const auto& v : pl.parts.live) {
            auto it = env.vars.find(v);
            if (it == env.vars.end()) throw HybridError("prefix leaves '" + v + "' unset");
            sdom[v] = classical::VarDomain::interval(it->second.lo, it->second.hi);
            out.bound_n = detail::sat_mul(out.bound_n, sdom[v].values(opts.m).size());
        }
        out.synth = synth::synthesize(pl.parts.suffix, sdom, opts);
        auto st = sim::run(out.synth.circuit, amplify::initial_state(out.synth));
        out.dist = sim::marginal_rational(
            st, out.synth.circuit.reg(out.synth.var_reg.at(out.synth.output_var)));
    }

    for (const auto& [v, c] : out.dist.counts) out.values.insert(v);
    out.rates = report::rates(out.truth, out.values);
    out.plan = std::move(pl);
    return out;
}

inline HybridResult run_hybrid(const lang::Program& p, const classical::InputDomain& dom,
                               const synth::SynthOptions& opts,
                               std::uint64_t cap = classical::default_cap) {
    return run_hybrid(p, dom, opts, plan(p, dom, opts.m, cap));
}

inline nlohmann::json hybrid_json(const HybridResult& r) {
    nlohmann::json j;
    j["cut"] = r.plan.cut;
    j["feed"] = feed_name(r.plan.feed);
    j["live"] = r.plan.parts.live;
    j["input_count"] = r.plan.input_count;
    j["bound_n"] = r.bound_n;
    j["qubits"] = r.synth.circuit.qubits;
    j["values"] = std::vector<std::uint64_t>(r.values.begin(), r.values.end());
    j["truth"] = std::vector<std::uint64_t>(r.truth.begin(), r.truth.end());
    j["rates"] = report::rates_json(r.rates);
    return j;
}

}  // namespace qex::hybrid
