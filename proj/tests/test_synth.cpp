#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "qex/classical/enumerate.hpp"
#include "qex/lang/parser.hpp"
#include "qex/sim/measure.hpp"
#include "qex/sim/state.hpp"
#include "qex/synth/arith.hpp"
#include "qex/synth/synthesize.hpp"

using namespace qex;
using synth::SynthOptions;

namespace {

// Builds the initial state a synthesized circuit expects: restricted input
// domains are loaded directly, full domains are prepared in-circuit.
sim::SparseState run_synth(const synth::SynthResult& r) {
    std::vector<sim::InitSpec> specs;
    for (const auto& in : r.inputs)
        if (in.dom.kind != classical::VarDomain::Kind::full)
            specs.push_back({r.circuit.reg(in.reg), in.dom.values(r.opts.m)});
    return sim::run(r.circuit, sim::init(r.circuit.qubits, specs));
}

classical::ValueDist output_dist(const synth::SynthResult& r) {
    auto st = run_synth(r);
    return sim::marginal_rational(st, r.circuit.reg(r.var_reg.at(r.output_var)));
}

// Synthesizes, simulates exactly, and compares the output variable's value
// counts against brute-force enumeration of the same program.
void check_against_oracle(const std::string& src, const classical::InputDomain& dom,
                          SynthOptions o) {
    auto p = lang::parse(src);
    auto r = synth::synthesize(p, dom, o);
    auto oracle = classical::enumerate(p, dom, o.m, {r.output_var});
    CHECK(output_dist(r) == oracle.marginals.at(r.output_var));
}

classical::InputDomain full_xy() {
    return {{"x", classical::VarDomain::full()}, {"y", classical::VarDomain::full()}};
}

classical::InputDomain full_x() { return {{"x", classical::VarDomain::full()}}; }

std::uint64_t decode(const sim::SparseState& st, const circuit::Register& r) {
    REQUIRE(st.support() == 1);
    return sim::SparseState::decode(st.amps.begin()->first, r);
}

const std::string fig_branch = R"(int main(int x, int y) {
    if (x >= 5) { z := x + 1; } else { z := y + 1; }
    return z;
})";

}  // namespace

TEST_CASE("ripple blocks match integer arithmetic on every operand pair") {
    for (int w : {2, 3}) {
        const std::uint64_t n = std::uint64_t{1} << w;
        for (std::uint64_t a = 0; a < n; ++a) {
            for (std::uint64_t b = 0; b < n; ++b) {
                circuit::Circuit c;
                auto ra = c.add_register("a", w, circuit::Role::value);
                auto rb = c.add_register("b", w, circuit::Role::value);
                auto rr = c.add_register("r", w, circuit::Role::scratch);
                auto rbw = c.add_register("bw", 1, circuit::Role::scratch);
                int anc = c.add_register("anc", 1, circuit::Role::scratch).qubits[0];
                synth::Emitter e{c, {}, -1};

                std::size_t start = c.gates.size();
                synth::rev::add_into(e, ra.qubits, rb.qubits, rr.qubits);
                auto st = sim::run(c, sim::init(c.qubits, {{ra, {a}}, {rb, {b}}}));
                auto key = st.amps.begin()->first;
                CHECK(sim::SparseState::decode(key, rr) == ((a + b) & (n - 1)));
                CHECK(sim::SparseState::decode(key, ra) == a);
                CHECK(sim::SparseState::decode(key, rb) == b);
                CHECK(c.gates.size() - start == 5 * static_cast<std::size_t>(w) - 2);

                c.gates.clear();
                synth::rev::sub_into(e, ra.qubits, rb.qubits, rr.qubits);
                st = sim::run(c, sim::init(c.qubits, {{ra, {a}}, {rb, {b}}}));
                CHECK(sim::SparseState::decode(st.amps.begin()->first, rr) ==
                      ((a - b) & (n - 1)));

                c.gates.clear();
                synth::rev::sub_borrow_into(e, ra.qubits, rb.qubits, rr.qubits, rbw.qubits[0]);
                st = sim::run(c, sim::init(c.qubits, {{ra, {a}}, {rb, {b}}}));
                key = st.amps.begin()->first;
                CHECK(sim::SparseState::decode(key, rr) == ((a - b) & (n - 1)));
                CHECK(sim::SparseState::decode(key, rbw) == (a < b ? 1 : 0));

                c.gates.clear();
                synth::rev::add_inplace(e, ra.qubits, rb.qubits, anc);
                st = sim::run(c, sim::init(c.qubits, {{ra, {a}}, {rb, {b}}}));
                key = st.amps.begin()->first;
                CHECK(sim::SparseState::decode(key, ra) == ((a + b) & (n - 1)));
                CHECK(sim::SparseState::decode(key, rb) == b);
                CHECK(key[static_cast<std::size_t>(anc)] == '0');
                CHECK(std::abs(st.amps.begin()->second - std::complex<double>{1.0, 0.0}) < 1e-9);

                c.gates.clear();
                synth::rev::sub_inplace(e, ra.qubits, rb.qubits, anc);
                st = sim::run(c, sim::init(c.qubits, {{ra, {a}}, {rb, {b}}}));
                key = st.amps.begin()->first;
                CHECK(sim::SparseState::decode(key, ra) == ((a - b) & (n - 1)));
                CHECK(key[static_cast<std::size_t>(anc)] == '0');

                c.gates.clear();
                synth::rev::mul_into(e, ra.qubits, rb.qubits, rr.qubits, anc);
                st = sim::run(c, sim::init(c.qubits, {{ra, {a}}, {rb, {b}}}));
                key = st.amps.begin()->first;
                CHECK(sim::SparseState::decode(key, rr) == ((a * b) & (n - 1)));
                CHECK(sim::SparseState::decode(key, ra) == a);
                CHECK(key[static_cast<std::size_t>(anc)] == '0');
            }
        }
    }
}

TEST_CASE("restoring divider computes quotients and zeroes its flags") {
    const int w = 3;
    const std::uint64_t n = 8;
    for (std::uint64_t a = 0; a < n; ++a) {
        for (std::uint64_t b = 0; b < n; ++b) {
            circuit::Circuit c;
            auto ra = c.add_register("a", w, circuit::Role::value);
            auto rb = c.add_register("b", w, circuit::Role::value);
            auto rq = c.add_register("q", w, circuit::Role::scratch);
            auto rrem = c.add_register("rem", w + 1, circuit::Role::scratch);
            auto rbank = c.add_register("bank", w, circuit::Role::scratch);
            auto rbz = c.add_register("bz", 1, circuit::Role::scratch);
            auto rbp = c.add_register("bp", 1, circuit::Role::scratch);
            auto ranc = c.add_register("anc", 1, circuit::Role::scratch);
            synth::Emitter e{c, {}, -1};
            synth::rev::div_into(e, ra.qubits, rb.qubits, rq.qubits, rrem.qubits, rbank.qubits,
                                 rbz.qubits[0], rbp.qubits[0], ranc.qubits[0]);
            auto st = sim::run(c, sim::init(c.qubits, {{ra, {a}}, {rb, {b}}}));
            auto key = st.amps.begin()->first;
            CHECK(sim::SparseState::decode(key, rq) == (b == 0 ? 0 : a / b));
            CHECK(sim::SparseState::decode(key, ra) == a);
            CHECK(sim::SparseState::decode(key, rb) == b);
            CHECK(sim::SparseState::decode(key, rbz) == 0);
            CHECK(sim::SparseState::decode(key, rbp) == 0);
            CHECK(sim::SparseState::decode(key, ranc) == 0);
        }
    }
}

TEST_CASE("fourier adder is exact, 18 gates and depth 13 at three wires") {
    const int w = 3;
    const std::uint64_t n = 8;
    circuit::Circuit c;
    auto ra = c.add_register("a", w, circuit::Role::value);
    auto rb = c.add_register("b", w, circuit::Role::value);
    synth::Emitter e{c, {}, -1};
    synth::fourier::add_inplace(e, ra.qubits, rb.qubits);
    CHECK(c.gate_count() == 18);
    CHECK(c.depth() == 13);
    for (std::uint64_t a = 0; a < n; ++a) {
        for (std::uint64_t b = 0; b < n; ++b) {
            auto st = sim::run(c, sim::init(c.qubits, {{ra, {a}}, {rb, {b}}}));
            REQUIRE(st.support() == 1);
            auto key = st.amps.begin()->first;
            CHECK(sim::SparseState::decode(key, ra) == ((a + b) & (n - 1)));
            CHECK(sim::SparseState::decode(key, rb) == b);
            // basis states map to basis states with no residual phase
            CHECK(std::abs(st.amps.begin()->second - std::complex<double>{1.0, 0.0}) < 1e-7);
        }
    }
}

TEST_CASE("lifted blocks fire only when their control is set") {
    const int w = 3;
    const std::uint64_t n = 8;
    for (std::uint64_t ctl : {0, 1}) {
        for (std::uint64_t a = 0; a < n; ++a) {
            for (std::uint64_t b = 0; b < n; ++b) {
                circuit::Circuit c;
                auto ra = c.add_register("a", w, circuit::Role::value);
                auto rb = c.add_register("b", w, circuit::Role::value);
                auto ranc = c.add_register("anc", 1, circuit::Role::scratch);
                auto rcq = c.add_register("cq", 1, circuit::Role::control);
                synth::Emitter e{c, {rcq.qubits[0]}, -1};
                synth::rev::add_inplace(e, ra.qubits, rb.qubits, ranc.qubits[0]);
                auto st = sim::run(
                    c, sim::init(c.qubits, {{ra, {a}}, {rb, {b}}, {rcq, {ctl}}}));
                auto key = st.amps.begin()->first;
                CHECK(sim::SparseState::decode(key, ra) ==
                      (ctl ? (a + b) & (n - 1) : a));
                CHECK(sim::SparseState::decode(key, ranc) == 0);
            }
        }
    }
}

TEST_CASE("lifting a phase-family gate is rejected") {
    circuit::Circuit c;
    c.add_register("a", 2, circuit::Role::value);
    synth::Emitter e{c, {1}, -1};
    CHECK_THROWS_AS(e.g(circuit::h(0)), synth::SynthError);
    CHECK_THROWS_AS(e.g(circuit::phase(0, 0.5)), synth::SynthError);
}

TEST_CASE("straight-line arithmetic matches the enumeration oracle") {
    SynthOptions o;
    o.m = 2;
    for (std::string op : {"+", "-", "*", "/"}) {
        std::string src = "int main(int x, int y) { z := x " + op + " y; return z; }";
        check_against_oracle(src, full_xy(), o);
    }
    SynthOptions f = o;
    f.backend = synth::Backend::fourier;
    check_against_oracle("int main(int x, int y) { z := x + y; return z; }", full_xy(), f);
    check_against_oracle("int main(int x, int y) { z := x - y; return z; }", full_xy(), f);
}

TEST_CASE("operands reused on both sides are copied first") {
    SynthOptions o;
    o.m = 2;
    check_against_oracle("int main(int x) { z := x + x; return z; }", full_x(), o);
    check_against_oracle("int main(int x) { z := x * x; return z; }", full_x(), o);
}

TEST_CASE("a variable copy costs one CX per wire") {
    SynthOptions o;
    auto r = synth::synthesize(lang::parse("int main(int x) { z := x; return z; }"), full_x(), o);
    auto h = r.circuit.gate_histogram();
    CHECK(h["H"] == 3);
    CHECK(h["CX"] == 4);
    CHECK(r.circuit.gate_count() == 7);
}

TEST_CASE("branching program uses 34 qubits and lands the exact distribution") {
    auto p = lang::parse(fig_branch);
    SynthOptions o;
    auto r = synth::synthesize(p, full_xy(), o);
    CHECK(r.circuit.qubits == 34);
    CHECK(r.circuit.registers.size() == 10);
    CHECK(r.tally.add == 2);
    CHECK(r.tally.if_else == 1);
    CHECK(r.output_var == "z");

    auto st = run_synth(r);
    CHECK(st.support() == 64);
    auto d = sim::marginal_rational(st, r.circuit.reg(r.var_reg.at("z")));
    CHECK(d.total == 64);
    for (std::uint64_t v = 1; v <= 5; ++v) CHECK(d.counts.at(v) == 5);
    for (std::uint64_t v = 6; v <= 8; ++v) CHECK(d.counts.at(v) == 13);
    CHECK(d.counts.size() == 8);

    auto oracle = classical::enumerate(p, full_xy(), o.m, {"z"});
    CHECK(d == oracle.marginals.at("z"));
}

TEST_CASE("uncompute and immediate sharing shrink the branch to 18 qubits") {
    auto p = lang::parse(fig_branch);
    SynthOptions o;
    o.uncompute = true;
    o.share_immediates = true;
    auto r = synth::synthesize(p, full_xy(), o);
    CHECK(r.circuit.qubits == 18);
    CHECK(r.circuit.registers.size() == 6);

    SynthOptions plain;
    auto base = synth::synthesize(p, full_xy(), plain);
    auto aux_regs = [](const synth::SynthResult& res) {
        int n = 0;
        for (const auto& rg : res.circuit.registers)
            if (rg.role == circuit::Role::scratch || rg.role == circuit::Role::immediate) ++n;
        return n;
    };
    CHECK(aux_regs(r) < aux_regs(base));
    CHECK(r.circuit.qubits < base.circuit.qubits);
    CHECK(output_dist(r) == output_dist(base));
}

TEST_CASE("optimized branch state is uniform with the expected wire pattern") {
    auto p = lang::parse(fig_branch);
    SynthOptions o;
    o.uncompute = true;
    o.share_immediates = true;
    auto r = synth::synthesize(p, full_xy(), o);
    auto st = run_synth(r);
    REQUIRE(st.support() == 64);
    const auto& rx = r.circuit.reg(r.var_reg.at("x"));
    const auto& ry = r.circuit.reg(r.var_reg.at("y"));
    const auto& rz = r.circuit.reg(r.var_reg.at("z"));
    const auto& c1 = r.circuit.reg("cq");
    const auto& c2 = r.circuit.reg("cq#2");
    for (const auto& [key, amp] : st.amps) {
        CHECK(std::abs(amp - std::complex<double>{0.125, 0.0}) < 1e-9);
        auto xv = sim::SparseState::decode(key, rx);
        auto yv = sim::SparseState::decode(key, ry);
        auto zv = sim::SparseState::decode(key, rz);
        auto q1 = sim::SparseState::decode(key, c1);
        auto q2 = sim::SparseState::decode(key, c2);
        if (xv >= 5) {
            CHECK(zv == xv + 1);
            CHECK(q1 == 1);
            CHECK(q2 == 0);
        } else {
            CHECK(zv == yv + 1);
            CHECK(q1 == 0);
            CHECK(q2 == 1);
        }
    }
}

TEST_CASE("interval facts fold decided predicates away") {
    SynthOptions o;
    auto p = lang::parse(
        "int main(int x) { if (x >= 1) { z := x + 1; } else { z := 0; } return z; }");
    classical::InputDomain dom{{"x", classical::VarDomain::set({1, 3, 5})}};
    auto r = synth::synthesize(p, dom, o);
    CHECK(r.tally.if_else == 0);
    CHECK(r.circuit.find_register("cq") == nullptr);
    auto oracle = classical::enumerate(p, dom, o.m, {"z"});
    CHECK(output_dist(r) == oracle.marginals.at("z"));

    auto always = lang::parse(
        "int main(int x) { if (x >= 0) { z := x; } else { z := 7; } return z; }");
    auto ra = synth::synthesize(always, full_x(), o);
    CHECK(ra.tally.if_else == 0);
    auto oa = classical::enumerate(always, full_x(), o.m, {"z"});
    CHECK(output_dist(ra) == oa.marginals.at("z"));
}

TEST_CASE("every predicate form agrees with the oracle") {
    SynthOptions o;
    check_against_oracle(
        "int main(int x) { if (x >= 2 and x <= 5) { z := 1; } else { z := 0; } return z; }",
        full_x(), o);
    check_against_oracle(
        "int main(int x) { if (x <= 1 or x >= 6) { z := 1; } else { z := 0; } return z; }",
        full_x(), o);
    check_against_oracle(
        "int main(int x) { if (!(x >= 3)) { z := 1; } else { z := 0; } return z; }", full_x(), o);
    check_against_oracle(
        "int main(int x) { if (x == 4) { z := 1; } else { z := 0; } return z; }", full_x(), o);
    check_against_oracle(
        "int main(int x) { if (x != 4) { z := 1; } else { z := 0; } return z; }", full_x(), o);
    check_against_oracle(
        "int main(int x) { if (3 > x) { z := 1; } else { z := 0; } return z; }", full_x(), o);
    SynthOptions o2;
    o2.m = 2;
    check_against_oracle(
        "int main(int x, int y) { if (x < y) { z := 1; } else { z := 0; } return z; }", full_xy(),
        o2);
}

TEST_CASE("comparisons past the value range fall back to a full-width subtractor") {
    SynthOptions o;
    auto p = lang::parse(
        "int main(int x) { y := x + x; if (y >= 3) { z := 1; } else { z := 0; } return z; }");
    auto r = synth::synthesize(p, full_x(), o);
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].find("full-width subtractor") != std::string::npos);
    auto oracle = classical::enumerate(p, full_x(), o.m, {"z"});
    CHECK(output_dist(r) == oracle.marginals.at("z"));
}

TEST_CASE("fourier arithmetic falls back to ripple inside branches") {
    SynthOptions o;
    o.m = 2;
    o.backend = synth::Backend::fourier;
    auto p = lang::parse(
        "int main(int x, int y) { z := 0; if (x >= 2) { z := x + y; } return z; }");
    auto r = synth::synthesize(p, full_xy(), o);
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].find("no controlled form") != std::string::npos);
    auto oracle = classical::enumerate(p, full_xy(), o.m, {"z"});
    CHECK(output_dist(r) == oracle.marginals.at("z"));
}

TEST_CASE("nested branches agree with the oracle under every flag set") {
    const std::string nested = R"(int main(int x, int y) {
        if (x >= 2) { if (y >= 2) { z := x + y; } else { z := x - y; } }
        else { z := y; }
        return z;
    })";
    for (int flags = 0; flags < 8; ++flags) {
        SynthOptions o;
        o.m = 2;
        o.uncompute = flags & 1;
        o.share_immediates = flags & 2;
        o.parallel_copy = flags & 4;
        check_against_oracle(nested, full_xy(), o);
    }
}

TEST_CASE("one-armed and non-exclusive writes merge correctly") {
    SynthOptions o;
    o.m = 2;
    // write only in one arm
    check_against_oracle(
        "int main(int x) { z := x; if (x >= 2) { z := x + 1; } return z; }", full_x(), o);
    // rebind in both arms of one variable, keep another
    check_against_oracle(R"(int main(int x, int y) {
        w := y;
        if (x >= 2) { z := x; w := x + y; } else { z := y; }
        u := w + z;
        return u;
    })",
                         full_xy(), o);
    for (int flags = 1; flags < 4; ++flags) {
        SynthOptions f = o;
        f.uncompute = flags & 1;
        f.share_immediates = flags & 2;
        check_against_oracle(
            "int main(int x) { z := x; if (x >= 2) { z := x + 1; } return z; }", full_x(), f);
    }
}

TEST_CASE("parallel copy shortens the critical path for a shared read") {
    auto p = lang::parse(
        "int main(int x) { if (x >= 4) { z := x + 1; } else { z := x + 2; } return z; }");
    SynthOptions plain, par;
    par.parallel_copy = true;
    auto r1 = synth::synthesize(p, full_x(), plain);
    auto r2 = synth::synthesize(p, full_x(), par);
    CHECK(r2.circuit.find_register("x'") != nullptr);
    CHECK(r2.circuit.depth() < r1.circuit.depth());
    CHECK(output_dist(r1) == output_dist(r2));
}

TEST_CASE("uncompute and sharing never grow the register file") {
    for (const std::string& src :
         {fig_branch,
          std::string("int main(int x) { z := x + 3; w := z * x; return w; }")}) {
        auto p = lang::parse(src);
        classical::InputDomain dom = full_xy();
        SynthOptions plain;
        auto base = synth::synthesize(p, dom, plain);
        for (int flags = 1; flags < 4; ++flags) {
            SynthOptions o;
            o.uncompute = flags & 1;
            o.share_immediates = flags & 2;
            auto r = synth::synthesize(p, dom, o);
            CHECK(r.circuit.qubits <= base.circuit.qubits);
        }
    }
}

TEST_CASE("unrolled counting loop keeps a flat register file") {
    auto p = lang::parse(R"(int main(int x) {
        i := 0; s := 0;
        while (i < 12) { s := s + x; i := i + 1; }
        return s;
    })");
    for (int k : {4, 6, 8}) {
        SynthOptions o;
        o.m = 4;
        o.k = k;
        o.uncompute = true;
        o.share_immediates = true;
        auto r = synth::synthesize(p, full_x(), o);
        CHECK(r.circuit.qubits == 21);
        CHECK(r.circuit.gate_count() == 5 + 60 * static_cast<std::size_t>(k));
        CHECK(r.tally.if_else == 0);
        CHECK(r.tally.add == 2 * static_cast<std::uint64_t>(k));
    }
    // with the guard inside the unroll budget the loop runs to completion
    auto done = lang::parse(R"(int main(int x) {
        i := 0; s := 0;
        while (i < 8) { s := s + x; i := i + 1; }
        return s;
    })");
    SynthOptions o;
    o.m = 4;
    o.k = 8;
    o.uncompute = true;
    o.share_immediates = true;
    auto r = synth::synthesize(done, full_x(), o);
    auto oracle = classical::enumerate(done, full_x(), o.m, {"s"});
    CHECK(output_dist(r) == oracle.marginals.at("s"));
}

TEST_CASE("gcd by repeated subtraction matches the oracle") {
    auto p = lang::parse(R"(int main(int x, int y) {
        while (x != y) { if (x > y) { x := x - y; } else { y := y - x; } }
        return x;
    })");
    classical::InputDomain dom{{"x", classical::VarDomain::interval(1, 4)},
                               {"y", classical::VarDomain::interval(1, 4)}};
    SynthOptions o;
    o.k = 8;
    o.uncompute = true;
    o.share_immediates = true;
    auto r = synth::synthesize(p, dom, o);
    CHECK(r.output_var == "x");
    auto st = run_synth(r);
    CHECK(st.support() == 16);
    auto d = sim::marginal_rational(st, r.circuit.reg(r.var_reg.at("x")));
    auto oracle = classical::enumerate(p, dom, o.m, {"x"});
    CHECK(d == oracle.marginals.at("x"));
    CHECK(d.counts.at(1) == 11);
    CHECK(d.counts.at(2) == 3);
    CHECK(d.counts.at(3) == 1);
    CHECK(d.counts.at(4) == 1);
}

TEST_CASE("in-place self-updates reuse the target register") {
    auto p = lang::parse("int main(int x, int y) { x := x + y; x := x - y; return x; }");
    SynthOptions o;
    o.m = 2;
    auto r = synth::synthesize(p, full_xy(), o);
    CHECK(r.var_reg.at("x") == r.inputs[0].reg);
    check_against_oracle("int main(int x, int y) { x := x + y; x := x - y; return x; }",
                         full_xy(), o);
}

TEST_CASE("returning an expression materializes a result register") {
    auto p = lang::parse("int main(int x, int y) { return x + y; }");
    SynthOptions o;
    o.m = 2;
    auto r = synth::synthesize(p, full_xy(), o);
    CHECK(r.output_var == lang::ret_var);
    auto oracle = classical::enumerate(p, full_xy(), o.m, {lang::ret_var});
    CHECK(output_dist(r) == oracle.marginals.at(lang::ret_var));
}

TEST_CASE("rejected programs throw before any qubits are allocated") {
    SynthOptions o;
    CHECK_THROWS_WITH(synth::synthesize(lang::parse("int main(int *p) { return 0; }"), {}, o),
                      Catch::Matchers::ContainsSubstring("pointer"));
    CHECK_THROWS_WITH(
        synth::synthesize(lang::parse("int main(int x) { z := 12; return z; }"), full_x(), o),
        Catch::Matchers::ContainsSubstring("program rejected"));
    SynthOptions tiny;
    tiny.qubit_cap = 10;
    CHECK_THROWS_WITH(synth::synthesize(lang::parse("int main(int x, int y) { z := x + y; return z; }"),
                                        full_xy(), tiny),
                      Catch::Matchers::ContainsSubstring("register budget exceeded"));
}

TEST_CASE("optimize re-synthesizes with merged flags") {
    auto p = lang::parse(fig_branch);
    SynthOptions plain;
    auto base = synth::synthesize(p, full_xy(), plain);
    SynthOptions flags;
    flags.uncompute = true;
    flags.share_immediates = true;
    auto opt = synth::optimize(base, flags);
    CHECK(opt.opts.uncompute);
    CHECK(opt.opts.share_immediates);
    CHECK(opt.circuit.qubits == 18);
    CHECK(output_dist(opt) == output_dist(base));
}

TEST_CASE("gates carry their source statement, preparation aside") {
    auto p = lang::parse(fig_branch);
    SynthOptions o;
    auto r = synth::synthesize(p, full_xy(), o);
    std::size_t prep = 0;
    for (const auto& g : r.circuit.gates) {
        if (g.src < 0) {
            ++prep;
            CHECK(g.kind == circuit::Kind::h);
        }
    }
    CHECK(prep == 6);  // three value bits per superposed input
}

TEST_CASE("layout sidecar names registers, counts and diagnostics") {
    auto p = lang::parse(fig_branch);
    SynthOptions o;
    o.uncompute = true;
    o.share_immediates = true;
    auto r = synth::synthesize(p, full_xy(), o);
    auto j = synth::layout_json(r);
    CHECK(j.at("qubits") == 18);
    CHECK(j.at("output") == "z");
    CHECK(j.at("tally").at("add") == 2);
    CHECK(j.at("tally").at("if_else") == 1);
    CHECK(j.at("vars").contains("z"));
    CHECK(j.at("vars").at("z").at("register").size() == 3);
    CHECK(j.at("inputs").size() == 2);
    CHECK(j.at("inputs")[0].at("domain") == "full");
    CHECK(j.at("diagnostics").empty());
}
