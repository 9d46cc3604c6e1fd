// Acceptance suite: one test case per headline claim, each printing a
// single ACCEPT line so the criteria can be scanned from raw test output.
// Each body is wrapped so a thrown error still prints its line before
// failing the case.

#include <catch2/catch_amalgamated.hpp>

#include <bitset>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "qex/amplify/schedule.hpp"
#include "qex/amplify/search.hpp"
#include "qex/classical/enumerate.hpp"
#include "qex/classical/interval.hpp"
#include "qex/cli/corpus.hpp"
#include "qex/hybrid/run.hpp"
#include "qex/lang/printer.hpp"
#include "qex/lang/unroll.hpp"
#include "qex/report/approx.hpp"
#include "qex/report/cost.hpp"
#include "qex/sim/measure.hpp"
#include "qex/synth/synthesize.hpp"

using namespace qex;

namespace {

std::string corpus_path() {
    const char* p = std::getenv("QEX_CORPUS");
#ifdef QEX_SOURCE_DIR
    return p ? p : std::string(QEX_SOURCE_DIR) + "/corpus";
#else
    return p ? p : "../corpus";
#endif
}

const cli::CorpusEntry& corpus_entry(const std::string& name) {
    static std::vector<cli::CorpusEntry> entries = cli::load_corpus(corpus_path());
    for (const auto& e : entries)
        if (e.name == name) return e;
    throw cli::CorpusError("no corpus entry named '" + name + "'");
}

struct Criterion {
    int id;
    bool ok = true;
    std::vector<std::string> notes;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes.push_back(what);
        }
    }
};

void run_criterion(int id, const std::function<void(Criterion&)>& body) {
    Criterion c{id};
    try {
        body(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.notes.push_back(std::string("exception: ") + e.what());
    }
    std::printf("ACCEPT %d %s\n", c.id, c.ok ? "PASS" : "FAIL");
    for (const auto& n : c.notes) std::printf("  - %s\n", n.c_str());
    std::fflush(stdout);
    INFO("criterion " << id);
    for (const auto& n : c.notes) UNSCOPED_INFO(n);
    REQUIRE(c.ok);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

sim::SparseState simulate(const synth::SynthResult& r) {
    return sim::run(r.circuit, amplify::initial_state(r));
}

classical::ValueDist out_dist(const synth::SynthResult& r, const sim::SparseState& st) {
    return sim::marginal_rational(st, r.circuit.reg(r.var_reg.at(r.output_var)));
}

std::set<std::uint64_t> support_set(const classical::ValueDist& d) {
    std::set<std::uint64_t> s;
    for (const auto& [v, c] : d.counts) s.insert(v);
    return s;
}

std::set<std::uint64_t> oracle_set(const lang::Program& p, const classical::InputDomain& dom,
                                   int m) {
    classical::InputDomain gdom = dom;
    for (const auto& prm : p.params)
        if (prm.pointer && !gdom.count(prm.name)) gdom[prm.name] = classical::VarDomain::set({0});
    auto en = classical::enumerate(p, gdom, m, {lang::ret_var});
    auto vals = en.marginals.at(lang::ret_var).support();
    return {vals.begin(), vals.end()};
}

// Least-squares linear fit quality for y over x = 1..n.
double linear_r2(const std::vector<double>& ys) {
    const double n = static_cast<double>(ys.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double x = static_cast<double>(i + 1);
        sx += x;
        sy += ys[i];
        sxx += x * x;
        sxy += x * ys[i];
    }
    const double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double a = (sy - b * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double mean = sy / n;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double x = static_cast<double>(i + 1);
        ss_res += (ys[i] - (a + b * x)) * (ys[i] - (a + b * x));
        ss_tot += (ys[i] - mean) * (ys[i] - mean);
    }
    if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
    return 1.0 - ss_res / ss_tot;
}

}  // namespace

TEST_CASE("criterion 1: branching distribution is exact") {
    run_criterion(1, [](Criterion& c) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto& e = corpus_entry("branch_mix");
        synth::SynthOptions o;
        o.m = e.m;
        auto r = synth::synthesize(e.program, e.dom, o);
        auto dist = out_dist(r, simulate(r));

        classical::ValueDist want;
        want.total = 64;
        for (std::uint64_t v = 1; v <= 5; ++v) want.counts[v] = 5;
        for (std::uint64_t v = 6; v <= 8; ++v) want.counts[v] = 13;
        c.expect(dist == want, "z distribution is not {1..5 -> 5/64, 6..8 -> 13/64}");

        auto oracle = classical::enumerate(e.program, e.dom, e.m, {"z"});
        c.expect(oracle.marginals.at("z") == want, "oracle disagrees with the pinned rationals");
        c.expect(seconds_since(t0) < 1.0, "runtime exceeded 1s");
    });
}

TEST_CASE("criterion 2: final state carries the expected wire pattern") {
    run_criterion(2, [](Criterion& c) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto& e = corpus_entry("branch_mix");
        synth::SynthOptions o;
        o.m = e.m;
        auto r = synth::synthesize(e.program, e.dom, o);  // unoptimized
        auto st = simulate(r);

        c.expect(st.support() == 64, "support is not 64 states");
        const auto& rx = r.circuit.reg(r.var_reg.at("x"));
        const auto& ry = r.circuit.reg(r.var_reg.at("y"));
        const auto& rz = r.circuit.reg(r.var_reg.at("z"));
        const auto& rt = r.circuit.reg("t");
        const auto& c1 = r.circuit.reg("cq");
        const auto& c2 = r.circuit.reg("cq#2");
        bool amps_ok = true, pattern_ok = true;
        for (const auto& [key, amp] : st.amps) {
            if (std::abs(amp - std::complex<double>{0.125, 0.0}) >= 1e-9) amps_ok = false;
            const auto x = sim::SparseState::decode(key, rx);
            const auto y = sim::SparseState::decode(key, ry);
            const auto z = sim::SparseState::decode(key, rz);
            const auto t = sim::SparseState::decode(key, rt);
            const auto q1 = sim::SparseState::decode(key, c1);
            const auto q2 = sim::SparseState::decode(key, c2);
            // scratch carries the comparison offset |x + 3>; its top bit is
            // the predicate, mirrored into the control pair
            if (t != x + 3) pattern_ok = false;
            if (x >= 5) {
                if (z != x + 1 || q1 != 1 || q2 != 0) pattern_ok = false;
            } else {
                if (z != y + 1 || q1 != 0 || q2 != 1) pattern_ok = false;
            }
        }
        c.expect(amps_ok, "an amplitude strays from 1/8 by 1e-9 or more");
        c.expect(pattern_ok, "(z, x, y, scratch, CQ1, CQ2) mismatch the expected kets");
        c.expect(seconds_since(t0) < 1.0, "runtime exceeded 1s");
    });
}

TEST_CASE("criterion 3: qubit counts meet the budget") {
    run_criterion(3, [](Criterion& c) {
        const auto& e = corpus_entry("branch_mix");
        synth::SynthOptions plain;
        plain.m = e.m;
        auto base = synth::synthesize(e.program, e.dom, plain);
        c.expect(base.circuit.qubits == 34, "unoptimized circuit is not 34 qubits");

        synth::SynthOptions opt = plain;
        opt.uncompute = true;
        opt.share_immediates = true;
        auto tight = synth::synthesize(e.program, e.dom, opt);
        c.expect(tight.circuit.qubits <= 18, "optimized circuit exceeds 18 qubits");

        auto aux = [](const synth::SynthResult& r) {
            std::size_t n = 0;
            for (const auto& rg : r.circuit.registers)
                if (rg.role == circuit::Role::scratch || rg.role == circuit::Role::immediate) ++n;
            return n;
        };
        c.expect(aux(tight) < aux(base), "optimization did not shrink scratch allocation");
    });
}

TEST_CASE("criterion 4: sum entangles operand and result") {
    run_criterion(4, [](Criterion& c) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto& e = corpus_entry("entangle");
        synth::SynthOptions o;
        o.m = e.m;
        auto r = synth::synthesize(e.program, e.dom, o);
        auto st = simulate(r);

        const auto& rx = r.circuit.reg(r.var_reg.at("x"));
        const auto& rz = r.circuit.reg(r.var_reg.at("z"));
        std::map<std::pair<std::uint64_t, std::uint64_t>, double> joint;
        for (const auto& [key, amp] : st.amps)
            joint[{sim::SparseState::decode(key, rx), sim::SparseState::decode(key, rz)}] +=
                std::norm(amp);

        c.expect(joint.size() == 4, "joint (x, z) support is not 4 tuples");
        bool quarters = true;
        for (const auto& [xz, p] : joint)
            if (std::abs(p - 0.25) >= 1e-12) quarters = false;
        c.expect(quarters, "a joint tuple strays from probability 1/4");
        c.expect(joint.count({1, 6}) == 0, "impossible tuple (x=1, z=6) has support");
        c.expect(seconds_since(t0) < 1.0, "runtime exceeded 1s");
    });
}

TEST_CASE("criterion 5: cost model matches the closed forms") {
    run_criterion(5, [](Criterion& c) {
        report::CostModel m3{3};
        c.expect(m3.add_gates() == 18 && m3.add_depth() == 13, "Add at n=3 is not 18/13");
        c.expect(m3.if_else_gates() == 109 && m3.if_else_depth() == 27,
                 "If-else at n=3 is not 109/27");

        report::CostModel m64{64};
        const std::uint64_t n = 64;
        c.expect(m64.add_gates() == 3 * n * (n + 1) / 2, "Add gates diverge at n=64");
        c.expect(m64.sub_gates() == 3 * n * (n + 1) / 2, "Sub gates diverge at n=64");
        c.expect(m64.mul_gates() == (11 * n * n * n - 16 * n * n + 5 * n) / 2,
                 "Mul gates diverge at n=64");
        c.expect(m64.div_gates() == n * (28 * n * n + 4 * n + 4), "Div gates diverge at n=64");
        c.expect(m64.if_else_gates() == 9 * n * (n + 1) + 1, "If-else gates diverge at n=64");
        c.expect(m64.add_depth() == 5 * n - 2, "Add depth diverges at n=64");
        c.expect(m64.if_else_depth() == 10 * n - 3, "If-else depth diverges at n=64");

        bool increasing = true;
        for (int w = 1; w < 64; ++w) {
            report::CostModel a{w}, b{w + 1};
            if (!(a.add_gates() < b.add_gates() && a.sub_gates() < b.sub_gates() &&
                  a.mul_gates() < b.mul_gates() && a.div_gates() < b.div_gates() &&
                  a.if_else_gates() < b.if_else_gates() && a.add_depth() < b.add_depth() &&
                  a.mul_depth() < b.mul_depth() && a.div_depth() < b.div_depth()))
                increasing = false;
        }
        c.expect(increasing, "a formula fails to increase strictly over n = 1..64");
    });
}

TEST_CASE("criterion 6: fixed-point amplification meets its floor") {
    run_criterion(6, [](Criterion& c) {
        const auto t0 = std::chrono::steady_clock::now();
        // synthetic states: 100 uniform basis states, the first M marked
        for (double delta : {0.5, 0.2, 0.1}) {
            for (double p0 : {0.02, 0.05, 0.1, 0.2, 0.4, 0.8}) {
                sim::SparseState st;
                st.qubits = 7;
                std::set<std::string> marked;
                const int M = static_cast<int>(p0 * 100.0 + 0.5);
                for (int v = 0; v < 100; ++v) {
                    std::string key = std::bitset<7>(static_cast<unsigned>(v)).to_string();
                    st.amps[key] = {0.1, 0.0};
                    if (v < M) marked.insert(key);
                }
                auto out = amplify::amplify_state(std::move(st), marked, delta);
                if (out.stats.p_final < 1.0 - delta * delta) {
                    c.expect(false, "p_L below 1 - delta^2 at delta=" + std::to_string(delta) +
                                        " p0=" + std::to_string(p0));
                }
            }
        }

        const auto& e = corpus_entry("branch_mix");
        synth::SynthOptions o;
        o.m = e.m;
        auto found = amplify::search(e.program, e.dom, o, "z == 8", 0.1);
        c.expect(found.result.stats.p0 == Catch::Approx(13.0 / 64.0),
                 "initial success probability is not 13/64");
        auto counts = sim::sample(found.result.state,
                                  {found.synth.circuit.reg(found.synth.var_reg.at("z"))}, 1000, 7);
        std::uint64_t hits = 0;
        auto it = counts.find({8});
        if (it != counts.end()) hits = it->second;
        c.expect(hits >= 980, "sampled hit rate below 0.98 over 1000 shots");
        c.expect(seconds_since(t0) < 10.0, "runtime exceeded 10s");
    });
}

TEST_CASE("criterion 7: approximation rates across the corpus") {
    run_criterion(7, [](Criterion& c) {
        auto entries = cli::load_corpus(corpus_path());

        std::size_t exact_runs = 0;
        for (const auto& e : entries) {
            if (e.pointers || !e.exact) continue;
            synth::SynthOptions o;
            o.m = e.m;
            o.k = e.k;
            o.uncompute = true;
            o.share_immediates = true;
            auto r = synth::synthesize(e.program, e.dom, o);
            auto rates = report::rates(oracle_set(e.program, e.dom, e.m),
                                       support_set(out_dist(r, simulate(r))));
            if (rates.over_percent() != 100.0 || rates.under_percent() != 0.0)
                c.expect(false, e.name + ": value set is not exactly 100% / 0%");
            ++exact_runs;
        }
        c.expect(exact_runs >= 10, "fewer than 10 loop-free or fully-unrollable programs");

        // interval analyzer: sound everywhere, strictly over on the pointer
        // program whose return hull is [0,27]
        for (const auto& e : entries) {
            auto env = classical::interval_analyze(e.program, e.dom, e.m);
            const auto hull = env.vars.at(lang::ret_var);
            std::set<std::uint64_t> pred;
            for (std::uint64_t v = hull.lo; v <= hull.hi; ++v) pred.insert(v);
            auto rates = report::rates(oracle_set(e.program, e.dom, e.m), pred);
            if (rates.under_percent() != 0.0)
                c.expect(false, e.name + ": interval analysis missed a reachable value");
            if (rates.over_percent() < 100.0)
                c.expect(false, e.name + ": interval over-rate below 100%");
            if (e.name == "deref_mix") {
                c.expect(hull.lo == 0 && hull.hi == 27, "deref_mix return hull is not [0,27]");
                c.expect(rates.over_percent() > 100.0, "deref_mix interval over-rate not strict");
            }
        }

        // bounded loops: the quantum set equals the bounded enumerator's set
        std::size_t loop_runs = 0;
        for (const auto& e : entries) {
            if (!e.loops) continue;
            synth::SynthOptions o;
            o.m = e.m;
            o.k = e.k;
            o.uncompute = true;
            o.share_immediates = true;
            auto r = synth::synthesize(e.program, e.dom, o);
            auto qex_set = support_set(out_dist(r, simulate(r)));
            auto bounded = classical::enumerate(lang::unroll(e.program, e.k), e.dom, e.m,
                                                {lang::ret_var});
            auto bset = support_set(bounded.marginals.at(lang::ret_var));
            auto truth = oracle_set(e.program, e.dom, e.m);
            auto rq = report::rates(truth, qex_set);
            auto rb = report::rates(truth, bset);
            if (qex_set != bset)
                c.expect(false, e.name + ": bounded sets differ between engines");
            if (rq.under_percent() != rb.under_percent())
                c.expect(false, e.name + ": under-rates differ at the unroll bound");
            ++loop_runs;
        }
        c.expect(loop_runs >= 3, "fewer than 3 loop programs");
    });
}

TEST_CASE("criterion 8: unrolling scales depth, not width") {
    run_criterion(8, [](Criterion& c) {
        const auto& e = corpus_entry("count_up");
        std::vector<double> gates, depth;
        std::set<int> qubits;
        for (int k = 1; k <= 8; ++k) {
            synth::SynthOptions o;
            o.m = e.m;
            o.k = k;
            o.uncompute = true;
            o.share_immediates = true;
            auto r = synth::synthesize(e.program, e.dom, o);
            qubits.insert(r.circuit.qubits);
            gates.push_back(static_cast<double>(r.circuit.gate_count()));
            depth.push_back(static_cast<double>(r.circuit.depth()));
        }
        c.expect(qubits.size() == 1, "qubit count varies with the unroll bound");
        c.expect(linear_r2(gates) >= 0.99, "gate count is not linear in k");
        c.expect(linear_r2(depth) >= 0.99, "depth is not linear in k");
    });
}

TEST_CASE("criterion 9: round-trips and unitarity") {
    run_criterion(9, [](Criterion& c) {
        auto entries = cli::load_corpus(corpus_path());

        for (const auto& e : entries) {
            auto once = lang::parse(e.source);
            auto twice = lang::parse(lang::print(once));
            if (lang::print(once) != lang::print(twice))
                c.expect(false, e.name + ": printer round-trip changed the program");
        }

        // twenty circuits: every synthesizer-clean program plus one
        // optimized variant, run forward then inverted
        std::size_t checked = 0;
        bool identity_ok = true;
        auto check_inverse = [&](const synth::SynthResult& r) {
            auto s0 = amplify::initial_state(r);
            auto fwd = sim::run(r.circuit, s0);
            auto back = sim::run(r.circuit.inverted(), fwd);
            for (const auto& [key, amp] : s0.amps) {
                auto it = back.amps.find(key);
                if (it == back.amps.end() || std::abs(it->second - amp) >= 1e-9)
                    identity_ok = false;
            }
            for (const auto& [key, amp] : back.amps) {
                if (std::abs(amp) < 1e-9) continue;
                if (!s0.amps.count(key)) identity_ok = false;
            }
            ++checked;
        };
        for (const auto& e : entries) {
            if (e.pointers) continue;
            synth::SynthOptions o;
            o.m = e.m;
            o.k = e.k;
            check_inverse(synth::synthesize(e.program, e.dom, o));
        }
        {
            const auto& e = corpus_entry("branch_mix");
            synth::SynthOptions o;
            o.m = e.m;
            o.uncompute = true;
            o.share_immediates = true;
            check_inverse(synth::synthesize(e.program, e.dom, o));
        }
        c.expect(checked >= 20, "fewer than 20 circuits checked");
        c.expect(identity_ok, "run(c) then run(invert(c)) is not the identity within 1e-9");

        // norm preserved after every single gate
        const auto& e = corpus_entry("branch_mix");
        synth::SynthOptions o;
        o.m = e.m;
        auto r = synth::synthesize(e.program, e.dom, o);
        auto st = amplify::initial_state(r);
        bool norms_ok = true;
        for (const auto& g : r.circuit.gates) {
            sim::apply(st, g);
            double norm = 0.0;
            for (const auto& [key, amp] : st.amps) norm += std::norm(amp);
            if (std::abs(norm - 1.0) >= 1e-12) norms_ok = false;
        }
        c.expect(norms_ok, "a gate application drifted the state norm");
    });
}
