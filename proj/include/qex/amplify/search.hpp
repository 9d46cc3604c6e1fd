#pragma once

// Search over a synthesized program's final state. A target predicate
// over program variables marks basis states; fixed-point rounds then
// steer weight onto them. The reflections act on the sparse statevector
// directly, which is exactly what running the phase oracle and the
// inverted preparation circuit would do, minus a global sign.

#include <complex>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qex/amplify/schedule.hpp"
#include "qex/classical/interpret.hpp"
#include "qex/lang/parser.hpp"
#include "qex/sim/state.hpp"
#include "qex/synth/synthesize.hpp"

namespace qex::amplify {

// Loads restricted input domains; full ones are prepared in-circuit.
inline sim::SparseState initial_state(const synth::SynthResult& r) {
    std::vector<sim::InitSpec> specs;
    for (const auto& in : r.inputs)
        if (in.dom.kind != classical::VarDomain::Kind::full)
            specs.push_back({r.circuit.reg(in.reg), in.dom.values(r.opts.m)});
    return sim::init(r.circuit.qubits, specs);
}

inline sim::SparseState final_state(const synth::SynthResult& r) {
    return sim::run(r.circuit, initial_state(r));
}

inline lang::PredPtr parse_target(const std::string& text) {
    try {
        return lang::Parser(text).parse_predicate();
    } catch (const lang::ParseError& e) {
        throw AmplifyError(std::string("bad target predicate: ") + e.what());
    }
}

// Basis states of `st` whose decoded variable values satisfy the target.
inline std::set<std::string> marked_keys(const sim::SparseState& st,
                                         const synth::SynthResult& r,
                                         const lang::PredPtr& target) {
    std::set<std::string> vars;
    synth::detail::pred_reads(target, vars);
    std::vector<std::pair<std::string, circuit::Register>> regs;
    for (const auto& v : vars) {
        auto it = r.var_reg.find(v);
        if (it == r.var_reg.end())
            throw AmplifyError("target mentions '" + v + "', which the program never binds");
        regs.emplace_back(v, r.circuit.reg(it->second));
    }
    const std::uint64_t mask = (std::uint64_t{1} << (r.opts.m + 1)) - 1;
    std::set<std::string> out;
    for (const auto& [key, amp] : st.amps) {
        classical::ConcreteEnv env;
        for (const auto& [v, reg] : regs) env.values[v] = sim::SparseState::decode(key, reg);
        classical::detail::Interp it{r.opts.m, mask, 1, env};
        if (it.pred(target)) out.insert(key);
    }
    return out;
}

inline double success_probability(const sim::SparseState& st,
                                  const std::set<std::string>& marked) {
    double p = 0.0;
    for (const auto& k : marked) {
        auto it = st.amps.find(k);
        if (it != st.amps.end()) p += std::norm(it->second);
    }
    return p;
}

// Multiplies marked amplitudes by e^{i beta}: a selective phase, which is
// all the oracle reflection does.
inline void reflect_marked(sim::SparseState& st, const std::set<std::string>& marked,
                           double beta) {
    const std::complex<double> phase = std::exp(std::complex<double>{0.0, beta});
    for (auto& [k, a] : st.amps)
        if (marked.count(k)) a *= phase;
}

// st -= (1 - e^{i alpha}) <src|st> |src>. The support never leaves the
// source support, so walking src covers every affected key.
inline void reflect_source(sim::SparseState& st, const sim::SparseState& src, double alpha) {
    std::complex<double> overlap = 0.0;
    for (const auto& [k, a] : src.amps) {
        auto it = st.amps.find(k);
        if (it != st.amps.end()) overlap += std::conj(a) * it->second;
    }
    const std::complex<double> f =
        (1.0 - std::exp(std::complex<double>{0.0, alpha})) * overlap;
    for (const auto& [k, a] : src.amps) st.amps[k] -= f * a;
    st.prune();
}

struct SearchStats {
    std::uint64_t N = 0;  // support of the prepared state
    std::uint64_t M = 0;  // marked basis states
    double p0 = 0.0;
    int L = 0;
    double delta = 0.0;
    double gamma = 0.0;
    double p_final = 0.0;
    std::uint64_t queries = 0;  // one marked-phase application per round
};

inline nlohmann::json stats_json(const SearchStats& s) {
    return {{"N", s.N},         {"M", s.M},         {"p0", s.p0},
            {"L", s.L},         {"delta", s.delta}, {"gamma", s.gamma},
            {"p_final", s.p_final}, {"queries", s.queries}};
}

struct SearchResult {
    SearchStats stats;
    Schedule schedule;
    sim::SparseState state;  // post-amplification
};

// Runs the schedule against a prepared state. rounds < 0 picks the
// smallest count whose convergence floor the measured p0 clears; with no
// marked states the state is returned untouched.
inline SearchResult amplify_state(sim::SparseState st, const std::set<std::string>& marked,
                                  double delta, int rounds = -1) {
    check_delta(delta);
    SearchResult out;
    out.stats.N = st.support();
    out.stats.M = marked.size();
    out.stats.delta = delta;
    out.stats.p0 = success_probability(st, marked);
    if (marked.empty()) {
        out.state = std::move(st);
        return out;
    }
    const int L = rounds >= 0 ? rounds : required_rounds(out.stats.p0, delta);
    out.schedule = fixed_point_schedule(L, delta);
    const sim::SparseState src = st;
    for (int j = 0; j < L; ++j) {
        reflect_marked(st, marked, out.schedule.beta[static_cast<std::size_t>(j)]);
        reflect_source(st, src, out.schedule.alpha[static_cast<std::size_t>(j)]);
    }
    out.stats.L = L;
    out.stats.queries = static_cast<std::uint64_t>(L);
    out.stats.gamma = out.schedule.gamma;
    out.stats.p_final = success_probability(st, marked);
    out.state = std::move(st);
    return out;
}

// Whole pipeline: synthesize, simulate, mark, amplify.
struct Search {
    synth::SynthResult synth;
    std::set<std::string> marked;
    SearchResult result;
};

inline Search search(const lang::Program& p, const classical::InputDomain& dom,
                     const synth::SynthOptions& opts, const std::string& target, double delta,
                     int rounds = -1) {
    Search out;
    out.synth = synth::synthesize(p, dom, opts);
    auto st = final_state(out.synth);
    out.marked = marked_keys(st, out.synth, parse_target(target));
    out.result = amplify_state(std::move(st), out.marked, delta, rounds);
    return out;
}

}  // namespace qex::amplify
