#pragma once

// Statement-to-circuit compiler. Programs are unrolled first, so only
// assignments, branches and returns reach the emitter. Every variable
// lives in a register of m value bits plus a sign bit; assignments write
// fresh registers except self-updates (v := v + e), which run in place.
// Branch bodies are lifted under control qubits derived from the
// predicate, and rebound variables are merged register-by-register.
//
// Interval facts are tracked per register so predicates decided by the
// input domains fold away instead of emitting comparison machinery. That
// is what keeps unrolled counting loops flat: a trip count the intervals
// can prove never re-tests the guard.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qex/circuit/circuit.hpp"
#include "qex/classical/domain.hpp"
#include "qex/classical/interval.hpp"
#include "qex/lang/ast.hpp"
#include "qex/lang/unroll.hpp"
#include "qex/lang/validate.hpp"
#include "qex/synth/arith.hpp"
#include "qex/synth/options.hpp"

namespace qex::synth {

struct InputReg {
    std::string var;
    std::string reg;
    classical::VarDomain dom;
};

struct Tally {
    std::uint64_t add = 0, sub = 0, mul = 0, div = 0, if_else = 0;
    bool operator==(const Tally&) const = default;
};

struct SynthResult {
    circuit::Circuit circuit;
    std::map<std::string, std::string> var_reg;  // live variable -> register
    std::vector<InputReg> inputs;                // superposed input registers
    std::string output_var;                      // variable a bare return names, else ""
    Tally tally;
    std::vector<std::string> diagnostics;

    // Everything needed to re-run synthesis with more flags turned on.
    lang::Program unrolled;
    classical::InputDomain domain;
    SynthOptions opts;
};

namespace detail {

inline void expr_reads(const lang::ExprPtr& e, std::set<std::string>& out) {
    if (!e) return;
    if (e->kind == lang::Expr::Kind::var) out.insert(e->name);
    expr_reads(e->lhs, out);
    expr_reads(e->rhs, out);
}

inline void pred_reads(const lang::PredPtr& p, std::set<std::string>& out) {
    if (!p) return;
    expr_reads(p->rel_lhs, out);
    expr_reads(p->rel_rhs, out);
    pred_reads(p->lhs, out);
    pred_reads(p->rhs, out);
}

inline void stmt_reads(const std::vector<lang::StmtPtr>& body, std::set<std::string>& out) {
    for (const auto& s : body) {
        expr_reads(s->value, out);
        pred_reads(s->cond, out);
        stmt_reads(s->body, out);
        stmt_reads(s->else_body, out);
    }
}

inline void stmt_writes(const std::vector<lang::StmtPtr>& body, std::set<std::string>& out) {
    for (const auto& s : body) {
        if (s->kind == lang::Stmt::Kind::assign) out.insert(s->target);
        stmt_writes(s->body, out);
        stmt_writes(s->else_body, out);
    }
}

inline bool mentions(const lang::ExprPtr& e, const std::string& v) {
    if (!e) return false;
    if (e->kind == lang::Expr::Kind::var && e->name == v) return true;
    return mentions(e->lhs, v) || mentions(e->rhs, v);
}

inline bool contains_lit(const lang::ExprPtr& e) {
    if (!e) return false;
    if (e->kind == lang::Expr::Kind::lit) return true;
    return contains_lit(e->lhs) || contains_lit(e->rhs);
}

class Synthesizer {
  public:
    Synthesizer(lang::Program unrolled, classical::InputDomain dom, SynthOptions o)
        : prog(std::move(unrolled)),
          domain(std::move(dom)),
          opts(o),
          w(o.width()),
          mmax((std::uint64_t{1} << o.m) - 1),
          ia{(std::uint64_t{1} << (o.m + 1)) - 1} {}

    SynthResult run() {
        for (const auto& prm : prog.params) {
            if (prm.pointer)
                throw SynthError("pointer parameter '" + prm.name +
                                 "' cannot be lowered to registers");
            classical::VarDomain d = classical::lookup(domain, prm.name);
            std::string r = alloc(prm.name, w, circuit::Role::value);
            var_reg[prm.name] = r;
            inputs.push_back({prm.name, r, d});
            if (d.kind == classical::VarDomain::Kind::full) {
                Emitter e = raw();
                for (int i = 0; i < opts.m; ++i) e.g(circuit::h(qs(r)[i]));
                reg_iv[r] = {0, mmax};
            } else {
                auto vs = d.values(opts.m);
                reg_iv[r] = {vs.front(), vs.back()};
            }
        }
        for (const auto& s : prog.body) emit_stmt(s);

        SynthResult out;
        out.circuit = std::move(c);
        out.var_reg = std::move(var_reg);
        out.inputs = std::move(inputs);
        out.output_var = output_var;
        out.tally = tally;
        out.diagnostics = std::move(diags);
        out.unrolled = std::move(prog);
        out.domain = std::move(domain);
        out.opts = opts;
        return out;
    }

  private:
    lang::Program prog;
    classical::InputDomain domain;
    SynthOptions opts;
    int w;
    std::uint64_t mmax;
    classical::detail::IntervalInterp ia;

    circuit::Circuit c;
    std::map<std::string, std::string> var_reg;
    std::map<std::string, classical::Interval> reg_iv;
    std::map<int, std::vector<std::string>> pool;  // width -> zeroed registers
    std::map<std::string, std::string> dest_hint;  // var -> zero register the then arm bound
    std::set<std::string> hint_used;
    std::string shared_imm;
    std::uint64_t shared_imm_val = 0;
    int anc = -1;
    int bpad = -1;
    Tally tally;
    std::vector<std::string> diags;
    std::set<std::string> diag_seen;
    std::vector<int> lift;  // current control context: empty or one qubit
    int cur_src = -1;
    std::string output_var;
    std::vector<InputReg> inputs;

    // An open predicate-scratch block: gates from `gate_start` on compute
    // comparison scratch that can be inverted once its verdict is copied
    // out, returning `regs` to the pool.
    struct Block {
        std::size_t gate_start = 0;
        std::vector<std::string> regs;
    };
    std::optional<Block> blk;

    struct PredBit {
        int q = -1;
        bool is_const = false;
        bool const_val = false;
        bool in_block = false;
    };

    // ---- registers ------------------------------------------------------

    std::string fresh_name(const std::string& hint) {
        if (!c.find_register(hint)) return hint;
        for (int n = 2;; ++n) {
            std::string cand = hint + "#" + std::to_string(n);
            if (!c.find_register(cand)) return cand;
        }
    }

    std::string alloc(const std::string& hint, int width, circuit::Role role,
                      bool block_scratch = false) {
        std::string name;
        auto it = pool.find(width);
        if (opts.uncompute && it != pool.end() && !it->second.empty()) {
            name = it->second.back();
            it->second.pop_back();
        } else {
            if (c.qubits + width > opts.qubit_cap)
                throw SynthError("register budget exceeded: " + std::to_string(c.qubits) + "+" +
                                 std::to_string(width) + " qubits against a cap of " +
                                 std::to_string(opts.qubit_cap));
            name = c.add_register(fresh_name(hint), width, role).name;
        }
        if (block_scratch && blk) blk->regs.push_back(name);
        return name;
    }

    void pool_return(const std::string& name) {
        if (!opts.uncompute) return;
        reg_iv[name] = {0, 0};
        pool[c.reg(name).width()].push_back(name);
    }

    const std::vector<int>& qs(const std::string& r) { return c.reg(r).qubits; }

    std::vector<int> value_bits(const std::string& r) {
        const auto& q = qs(r);
        return {q.begin(), q.begin() + opts.m};
    }

    int anc_qubit() {
        if (anc < 0) anc = qs(alloc("carry", 1, circuit::Role::scratch))[0];
        return anc;
    }

    int bpad_qubit() {
        if (bpad < 0) bpad = qs(alloc("zext", 1, circuit::Role::scratch))[0];
        return bpad;
    }

    // ---- emission helpers ------------------------------------------------

    Emitter em() { return Emitter{c, lift, cur_src}; }
    Emitter raw() { return Emitter{c, {}, cur_src}; }

    void diag(const std::string& msg) {
        if (diag_seen.insert(msg).second) diags.push_back(msg);
    }

    void copy_reg(const std::string& src, const std::string& dst, bool lifted = true) {
        Emitter e = lifted ? em() : raw();
        const auto& s = qs(src);
        const auto& d = qs(dst);
        for (std::size_t i = 0; i < s.size(); ++i) e.g(circuit::cx(s[i], d[i]));
    }

    // Immediates are loaded with plain X gates even inside branches: the
    // register holds a classical constant on every path, which keeps it
    // separable from the controls.
    std::string imm_reg(std::uint64_t v) {
        if (!opts.share_immediates) {
            std::string r = alloc("imm" + std::to_string(v), w, circuit::Role::immediate);
            set_bits(r, v);
            reg_iv[r] = {v, v};
            return r;
        }
        if (shared_imm.empty()) {
            shared_imm = alloc("imm", w, circuit::Role::immediate);
            set_bits(shared_imm, v);
        } else if (shared_imm_val != v) {
            set_bits(shared_imm, shared_imm_val ^ v);
        }
        shared_imm_val = v;
        reg_iv[shared_imm] = {v, v};
        return shared_imm;
    }

    void set_bits(const std::string& r, std::uint64_t mask) {
        Emitter e = raw();
        const auto& q = qs(r);
        for (std::size_t i = 0; i < q.size(); ++i)
            if (mask >> i & 1) e.g(circuit::x(q[i]));
    }

    // ---- intervals --------------------------------------------------------

    classical::Interval iv_of(const std::string& r) {
        auto it = reg_iv.find(r);
        return it == reg_iv.end() ? ia.top() : it->second;
    }

    classical::Interval expr_iv(const lang::ExprPtr& e) {
        using K = lang::Expr::Kind;
        switch (e->kind) {
            case K::lit:
                return {e->value, e->value};
            case K::var: {
                auto it = var_reg.find(e->name);
                return it == var_reg.end() ? ia.top() : iv_of(it->second);
            }
            case K::bin: {
                classical::Interval a = expr_iv(e->lhs), b = expr_iv(e->rhs);
                switch (e->op) {
                    case lang::BinOp::add: return ia.add(a, b);
                    case lang::BinOp::sub: return ia.sub(a, b);
                    case lang::BinOp::mul: return ia.mul(a, b);
                    case lang::BinOp::divide: return ia.div(a, b);
                }
            }
        }
        return ia.top();
    }

    // The interval a register may hold after a write that only happens on
    // the current path: off-path it keeps its initial zero.
    classical::Interval guarded(classical::Interval v) {
        return lift.empty() ? v : classical::Interval::hull({0, 0}, v);
    }

    // ---- expressions --------------------------------------------------------

    std::string compile_expr(const lang::ExprPtr& e, const std::string& preferred = "") {
        using K = lang::Expr::Kind;
        switch (e->kind) {
            case K::var:
                return var_reg.at(e->name);
            case K::lit:
                return imm_reg(e->value);
            case K::bin: {
                std::string l = compile_expr(e->lhs);
                if (opts.share_immediates && l == shared_imm && contains_lit(e->rhs)) {
                    // The right side may morph the shared immediate before
                    // the operation reads it; keep this operand by value.
                    std::string cp = alloc("t", w, circuit::Role::scratch);
                    reg_iv[cp] = guarded(iv_of(l));
                    copy_reg(l, cp);
                    l = cp;
                }
                std::string r = compile_expr(e->rhs);
                if (l == r) {
                    // One register cannot feed both operand ports.
                    std::string cp = alloc("t", w, circuit::Role::scratch);
                    reg_iv[cp] = guarded(iv_of(l));
                    copy_reg(l, cp);
                    r = cp;
                }
                return emit_bin(e->op, l, r, preferred);
            }
        }
        throw SynthError("unreachable expression kind");
    }

    bool fourier_here() {
        if (opts.backend != Backend::fourier) return false;
        if (lift.empty()) return true;
        diag("fourier arithmetic has no controlled form; branch bodies use ripple blocks");
        return false;
    }

    std::string emit_bin(lang::BinOp op, const std::string& l, const std::string& r,
                         const std::string& preferred) {
        std::string dest = preferred.empty() ? alloc("t", w, circuit::Role::scratch) : preferred;
        classical::Interval liv = iv_of(l), riv = iv_of(r);
        Emitter e = em();
        switch (op) {
            case lang::BinOp::add:
                ++tally.add;
                if (fourier_here()) fourier::add_into(e, qs(l), qs(r), qs(dest));
                else rev::add_into(e, qs(l), qs(r), qs(dest));
                reg_iv[dest] = guarded(ia.add(liv, riv));
                break;
            case lang::BinOp::sub:
                ++tally.sub;
                if (fourier_here()) fourier::add_into(e, qs(l), qs(r), qs(dest), -1.0);
                else rev::sub_into(e, qs(l), qs(r), qs(dest));
                reg_iv[dest] = guarded(ia.sub(liv, riv));
                break;
            case lang::BinOp::mul:
                ++tally.mul;
                rev::mul_into(e, qs(l), qs(r), qs(dest), anc_qubit());
                reg_iv[dest] = guarded(ia.mul(liv, riv));
                break;
            case lang::BinOp::divide: {
                ++tally.div;
                std::string rem = alloc("t", w + 1, circuit::Role::scratch);
                std::string bank = alloc("t", w, circuit::Role::scratch);
                std::string bz = alloc("b", 1, circuit::Role::scratch);
                rev::div_into(e, qs(l), qs(r), qs(dest), qs(rem), qs(bank), qs(bz)[0],
                              bpad_qubit(), anc_qubit());
                pool_return(bz);  // div restores its zero-divisor flag
                reg_iv[rem] = ia.top();
                reg_iv[bank] = ia.top();
                reg_iv[dest] = guarded(ia.div(liv, riv));
                break;
            }
        }
        return dest;
    }

    // ---- assignment -----------------------------------------------------------

    std::string dest_for(const std::string& v) {
        auto it = dest_hint.find(v);
        if (it != dest_hint.end()) {
            std::string r = it->second;
            dest_hint.erase(it);
            hint_used.insert(v);
            return r;
        }
        return alloc(v, w, circuit::Role::value);
    }

    void bind(const std::string& v, const std::string& r) { var_reg[v] = r; }

    // v := v + e, v := e + v and v := v - e update v's register in place,
    // so unrolled loop iterations re-target the same qubits instead of
    // trailing a fresh register per step.
    bool try_inplace(const lang::StmtPtr& s) {
        const auto& e = s->value;
        if (e->kind != lang::Expr::Kind::bin) return false;
        if (!var_reg.count(s->target)) return false;
        const std::string& v = s->target;
        auto is_v = [&](const lang::ExprPtr& x) {
            return x->kind == lang::Expr::Kind::var && x->name == v;
        };
        lang::ExprPtr other;
        if (e->op == lang::BinOp::add && is_v(e->lhs) && !mentions(e->rhs, v)) other = e->rhs;
        else if (e->op == lang::BinOp::add && is_v(e->rhs) && !mentions(e->lhs, v)) other = e->lhs;
        else if (e->op == lang::BinOp::sub && is_v(e->lhs) && !mentions(e->rhs, v)) other = e->rhs;
        else return false;

        std::string operand = compile_expr(other);
        std::string target = var_reg.at(v);
        classical::Interval tv = iv_of(target), ov = iv_of(operand);
        Emitter e2 = em();
        if (e->op == lang::BinOp::add) {
            ++tally.add;
            if (fourier_here()) fourier::add_inplace(e2, qs(target), qs(operand));
            else rev::add_inplace(e2, qs(target), qs(operand), anc_qubit());
            tv = lift.empty() ? ia.add(tv, ov) : classical::Interval::hull(tv, ia.add(tv, ov));
        } else {
            ++tally.sub;
            if (fourier_here()) fourier::add_inplace(e2, qs(target), qs(operand), -1.0);
            else rev::sub_inplace(e2, qs(target), qs(operand), anc_qubit());
            tv = lift.empty() ? ia.sub(tv, ov) : classical::Interval::hull(tv, ia.sub(tv, ov));
        }
        reg_iv[target] = tv;
        return true;
    }

    void emit_assign(const lang::StmtPtr& s) {
        const std::string& v = s->target;
        using K = lang::Expr::Kind;
        if (s->value->kind == K::lit) {
            std::string dest = dest_for(v);
            Emitter e = em();
            const auto& q = qs(dest);
            for (int i = 0; i < w; ++i)
                if (s->value->value >> i & 1) e.g(circuit::x(q[i]));
            reg_iv[dest] = guarded({s->value->value, s->value->value});
            bind(v, dest);
            return;
        }
        if (s->value->kind == K::var) {
            if (s->value->name == v) return;
            std::string src = var_reg.at(s->value->name);
            std::string dest = dest_for(v);
            copy_reg(src, dest);
            reg_iv[dest] = guarded(iv_of(src));
            bind(v, dest);
            return;
        }
        if (try_inplace(s)) return;
        bind(v, compile_expr(s->value, dest_for(v)));
    }

    // ---- predicates -----------------------------------------------------------

    void open_block() { blk = Block{c.gates.size(), {}}; }

    // Inverts the scratch computation recorded up to `end_at` (the
    // verdict having been copied out already) and pools its registers.
    void close_block(std::size_t end_at) {
        if (!blk) return;
        Block b = std::move(*blk);
        blk.reset();
        if (!opts.uncompute) return;
        for (std::size_t i = b.gate_start; i < end_at; ++i) {
            using K = circuit::Kind;
            K k = c.gates[i].kind;
            if (k == K::h || k == K::phase || k == K::cphase || k == K::u3) {
                diag("predicate scratch kept live: its block is not a plain permutation");
                return;
            }
        }
        std::vector<circuit::Gate> seg(c.gates.begin() + b.gate_start,
                                       c.gates.begin() + end_at);
        for (auto it = seg.rbegin(); it != seg.rend(); ++it) c.append(circuit::inverse_of(*it));
        for (const auto& r : b.regs) pool_return(r);
    }

    // -1 undecided, 0 constant false, 1 constant true.
    static int fold_rel(lang::RelOp op, classical::Interval a, classical::Interval b) {
        switch (op) {
            case lang::RelOp::lt:
                if (a.hi < b.lo) return 1;
                if (a.lo >= b.hi) return 0;
                return -1;
            case lang::RelOp::le:
                if (a.hi <= b.lo) return 1;
                if (a.lo > b.hi) return 0;
                return -1;
            case lang::RelOp::gt:
                if (a.lo > b.hi) return 1;
                if (a.hi <= b.lo) return 0;
                return -1;
            case lang::RelOp::ge:
                if (a.lo >= b.hi) return 1;
                if (a.hi < b.lo) return 0;
                return -1;
        }
        return -1;
    }

    static PredBit const_bit(bool v) { return {-1, true, v, false}; }

    // Moves an in-block verdict onto a bit that survives the block, so
    // another relation can open its own block.
    PredBit finish(PredBit b) {
        if (b.is_const || !b.in_block) return b;
        if (!opts.uncompute) {
            blk.reset();  // nothing will invert the block; the bit stays valid
            b.in_block = false;
            return b;
        }
        std::size_t block_end = c.gates.size();
        std::string keep = alloc("b", 1, circuit::Role::scratch);
        Emitter e = raw();
        e.g(circuit::cx(b.q, qs(keep)[0]));
        close_block(block_end);
        return {qs(keep)[0], false, false, false};
    }

    PredBit compile_pred(const lang::PredPtr& p) {
        using K = lang::Pred::Kind;
        switch (p->kind) {
            case K::truth:
                return const_bit(p->truth_value);
            case K::negation: {
                PredBit b = compile_pred(p->lhs);
                if (b.is_const) return const_bit(!b.const_val);
                Emitter e = raw();
                e.g(circuit::x(b.q));
                return b;
            }
            case K::conjunction:
            case K::disjunction: {
                const bool conj = p->kind == K::conjunction;
                PredBit l = compile_pred(p->lhs);
                if (l.is_const) {
                    if (conj != l.const_val) return l;  // false && _, true || _
                    return compile_pred(p->rhs);        // true && _, false || _
                }
                l = finish(l);
                PredBit r = compile_pred(p->rhs);
                if (r.is_const) return conj != r.const_val ? r : l;
                r = finish(r);
                std::string out = alloc("b", 1, circuit::Role::scratch);
                int oq = qs(out)[0];
                Emitter e = raw();
                if (conj) {
                    e.g(circuit::ccx(l.q, r.q, oq));
                } else {
                    e.g(circuit::x(l.q));
                    e.g(circuit::x(r.q));
                    e.g(circuit::ccx(l.q, r.q, oq));
                    e.g(circuit::x(r.q));
                    e.g(circuit::x(l.q));
                    e.g(circuit::x(oq));
                }
                return {oq, false, false, false};
            }
            case K::relation:
                return compile_rel(p);
        }
        throw SynthError("unreachable predicate kind");
    }

    PredBit compile_rel(const lang::PredPtr& p) {
        int fold = fold_rel(p->op, expr_iv(p->rel_lhs), expr_iv(p->rel_rhs));
        if (fold >= 0) return const_bit(fold == 1);

        using EK = lang::Expr::Kind;
        lang::ExprPtr a = p->rel_lhs, b = p->rel_rhs;
        lang::RelOp op = p->op;
        if (a->kind == EK::lit && b->kind != EK::lit) {
            std::swap(a, b);
            switch (p->op) {  // c OP x  ==  x OP' c
                case lang::RelOp::lt: op = lang::RelOp::gt; break;
                case lang::RelOp::le: op = lang::RelOp::ge; break;
                case lang::RelOp::gt: op = lang::RelOp::lt; break;
                case lang::RelOp::ge: op = lang::RelOp::le; break;
            }
        }

        if (b->kind == EK::lit) {
            // Normalize onto x >= c', negating for the below forms.
            bool negate = false;
            std::uint64_t cp = b->value;
            switch (op) {
                case lang::RelOp::ge: break;
                case lang::RelOp::gt: cp += 1; break;
                case lang::RelOp::lt: negate = true; break;
                case lang::RelOp::le: cp += 1, negate = true; break;
            }
            std::string areg = compile_expr(a);
            classical::Interval av = iv_of(areg);
            if (cp >= 1 && cp <= mmax && av.hi <= mmax) {
                // x >= c' iff the m-bit sum x + (2^m - c') carries out.
                std::string immr = imm_reg(mmax + 1 - cp);
                open_block();
                std::string sum = alloc("t", w, circuit::Role::scratch, true);
                Emitter e = raw();
                rev::add_carry_into(e, value_bits(areg), value_bits(immr), value_bits(sum),
                                    qs(sum)[opts.m]);
                if (negate) e.g(circuit::x(qs(sum)[opts.m]));
                return {qs(sum)[opts.m], false, false, true};
            }
            if (av.hi > mmax)
                diag("comparison operand may exceed " + std::to_string(mmax) +
                     "; using a full-width subtractor");
            std::string breg = imm_reg(b->value);
            return borrow_rel(areg, breg, op);
        }
        std::string lreg = compile_expr(a);
        std::string rreg = compile_expr(b);
        return borrow_rel(lreg, rreg, op);
    }

    // Full-width comparison: x < y is the borrow of x - y; the other
    // relations reuse it with swapped operands or a flip.
    PredBit borrow_rel(const std::string& l, const std::string& r, lang::RelOp op) {
        open_block();
        std::string diff = alloc("t", w, circuit::Role::scratch, true);
        std::string bw = alloc("b", 1, circuit::Role::scratch, true);
        int bq = qs(bw)[0];
        Emitter e = raw();
        const bool swapped = op == lang::RelOp::gt || op == lang::RelOp::le;
        const bool negate = op == lang::RelOp::ge || op == lang::RelOp::le;
        if (swapped) rev::sub_borrow_into(e, qs(r), qs(l), qs(diff), bq);
        else rev::sub_borrow_into(e, qs(l), qs(r), qs(diff), bq);
        if (negate) e.g(circuit::x(bq));
        return {bq, false, false, true};
    }

    // ---- branches ---------------------------------------------------------------

    void emit_branch(const lang::StmtPtr& s) {
        PredBit pb = compile_pred(s->cond);
        if (pb.is_const) {
            blk.reset();
            for (const auto& st : pb.const_val ? s->body : s->else_body) emit_stmt(st);
            return;
        }
        ++tally.if_else;
        const std::vector<int> enclosing = lift;

        std::string cq1 = alloc("cq", 1, circuit::Role::control);
        int q1 = qs(cq1)[0];
        std::size_t block_end = c.gates.size();
        {
            Emitter e = raw();
            e.g(circuit::cx(pb.q, q1));
        }
        close_block(block_end);

        std::string cq2 = alloc("cq", 1, circuit::Role::control);
        int q2 = qs(cq2)[0];
        {
            Emitter e = raw();
            e.g(circuit::cx(q1, q2));
            e.g(circuit::x(q2));
        }

        // Arm controls, combined with the enclosing control on demand.
        int tq = -1, eq = -1;
        auto arm_ctrl = [&](int base) {
            if (enclosing.empty()) return base;
            std::string cc = alloc("cc", 1, circuit::Role::control);
            Emitter e = raw();
            e.g(circuit::ccx(enclosing[0], base, qs(cc)[0]));
            return qs(cc)[0];
        };
        std::function<int()> then_ctrl = [&] { return tq >= 0 ? tq : tq = arm_ctrl(q1); };
        std::function<int()> else_ctrl = [&] { return eq >= 0 ? eq : eq = arm_ctrl(q2); };

        // Read-only variables both arms consume can be duplicated so the
        // arms stop competing for the same wires.
        std::map<std::string, std::string> redirect;
        if (opts.parallel_copy && !s->body.empty() && !s->else_body.empty()) {
            std::set<std::string> tr, er, ew;
            stmt_reads(s->body, tr);
            stmt_reads(s->else_body, er);
            stmt_writes(s->else_body, ew);
            for (const auto& v : er) {
                if (!tr.count(v) || ew.count(v) || !var_reg.count(v)) continue;
                std::string cp = alloc(v + "'", w, circuit::Role::value);
                copy_reg(var_reg[v], cp, false);
                reg_iv[cp] = iv_of(var_reg[v]);
                redirect[v] = cp;
            }
        }

        auto pre_map = var_reg;
        auto saved_hint = std::move(dest_hint);
        auto saved_used = std::move(hint_used);
        dest_hint.clear();
        hint_used.clear();

        if (!s->body.empty()) {
            lift.assign(1, then_ctrl());
            for (const auto& st : s->body) emit_stmt(st);
        }
        auto map_then = var_reg;

        var_reg = pre_map;
        if (opts.uncompute)
            for (const auto& [v, r] : map_then) {
                auto it = pre_map.find(v);
                if (it == pre_map.end() || it->second != r) dest_hint[v] = r;
            }
        for (const auto& [v, cp] : redirect) var_reg[v] = cp;

        if (!s->else_body.empty()) {
            lift.assign(1, else_ctrl());
            for (const auto& st : s->else_body) emit_stmt(st);
        }
        auto map_else = var_reg;
        for (const auto& [v, cp] : redirect)
            if (map_else[v] == cp) map_else[v] = pre_map[v];

        var_reg = pre_map;
        lift = enclosing;
        dest_hint.clear();

        merge_arms(pre_map, map_then, map_else, then_ctrl, else_ctrl);

        dest_hint = std::move(saved_hint);
        hint_used = std::move(saved_used);
    }

    void merge_arms(const std::map<std::string, std::string>& pre,
                    const std::map<std::string, std::string>& map_then,
                    const std::map<std::string, std::string>& map_else,
                    const std::function<int()>& then_ctrl,
                    const std::function<int()>& else_ctrl) {
        std::set<std::string> vars;
        for (const auto& [v, r] : map_then) vars.insert(v);
        for (const auto& [v, r] : map_else) vars.insert(v);
        auto get = [](const std::map<std::string, std::string>& m, const std::string& k,
                      const std::string& dflt) {
            auto it = m.find(k);
            return it == m.end() ? dflt : it->second;
        };
        for (const auto& v : vars) {
            std::string p = get(pre, v, "");
            std::string tr = get(map_then, v, p);
            std::string er = get(map_else, v, p);
            if (tr == er) {
                if (!tr.empty()) bind(v, tr);
                continue;
            }
            if (tr.empty()) {
                bind(v, er);
                continue;
            }
            if (er.empty()) {
                bind(v, tr);
                continue;
            }
            Emitter e = raw();
            if (er == p) {
                // then rebound, else kept: fill the new register on the else path
                int ec = else_ctrl();
                for (int i = 0; i < w; ++i) e.g(circuit::ccx(ec, qs(er)[i], qs(tr)[i]));
                reg_iv[tr] = classical::Interval::hull(iv_of(tr), iv_of(er));
                bind(v, tr);
            } else if (tr == p) {
                int tc = then_ctrl();
                for (int i = 0; i < w; ++i) e.g(circuit::ccx(tc, qs(tr)[i], qs(er)[i]));
                reg_iv[er] = classical::Interval::hull(iv_of(tr), iv_of(er));
                bind(v, er);
            } else {
                // both arms rebound: route the else value across
                int ec = else_ctrl();
                for (int i = 0; i < w; ++i) e.g(circuit::cswap(ec, qs(tr)[i], qs(er)[i]));
                reg_iv[tr] = classical::Interval::hull(iv_of(tr), iv_of(er));
                bind(v, tr);
                if (!hint_used.count(v)) pool_return(er);  // zero on every path
            }
        }
    }

    // ---- statements ---------------------------------------------------------------

    void emit_stmt(const lang::StmtPtr& s) {
        cur_src = s->id;
        switch (s->kind) {
            case lang::Stmt::Kind::assign:
                emit_assign(s);
                return;
            case lang::Stmt::Kind::branch:
                emit_branch(s);
                return;
            case lang::Stmt::Kind::ret:
                if (lift.empty() && s->value->kind == lang::Expr::Kind::var &&
                    var_reg.count(s->value->name)) {
                    output_var = s->value->name;
                    return;
                }
                emit_assign(lang::Stmt::make_assign(lang::ret_var, s->value, s->pos));
                output_var = lang::ret_var;
                return;
            case lang::Stmt::Kind::loop:
                throw SynthError("loop reached the emitter without being unrolled");
            default:
                throw SynthError("pointer statement cannot be lowered to registers");
        }
    }
};

}  // namespace detail

inline SynthResult synthesize(const lang::Program& p, const classical::InputDomain& dom,
                              const SynthOptions& opts) {
    auto violations = lang::validate(p, opts.m, lang::Backend::quantum);
    if (!violations.empty())
        throw SynthError("program rejected: " + violations.front().message);
    lang::Program unrolled = lang::unroll(p, opts.k);
    return detail::Synthesizer(std::move(unrolled), dom, opts).run();
}

// Re-runs synthesis with extra optimization flags enabled on top of the
// ones the result was built with.
inline SynthResult optimize(const SynthResult& base, const SynthOptions& flags) {
    SynthOptions merged = base.opts;
    merged.uncompute = merged.uncompute || flags.uncompute;
    merged.share_immediates = merged.share_immediates || flags.share_immediates;
    merged.parallel_copy = merged.parallel_copy || flags.parallel_copy;
    return detail::Synthesizer(base.unrolled, base.domain, merged).run();
}

// Sidecar describing where variables ended up, for decoding measurements.
inline nlohmann::json layout_json(const SynthResult& r) {
    nlohmann::json vars = nlohmann::json::object();
    for (const auto& [v, reg] : r.var_reg) {
        const auto& q = r.circuit.reg(reg).qubits;
        vars[v] = {{"register", std::vector<int>(q.begin(), q.end() - 1)}, {"sign", q.back()}};
    }
    nlohmann::json inputs = nlohmann::json::array();
    for (const auto& in : r.inputs) {
        nlohmann::json d = classical::domain_to_json({{in.var, in.dom}});
        inputs.push_back({{"var", in.var}, {"register", in.reg}, {"domain", d[in.var]}});
    }
    return {{"vars", vars},
            {"tally",
             {{"add", r.tally.add},
              {"sub", r.tally.sub},
              {"mul", r.tally.mul},
              {"div", r.tally.div},
              {"if_else", r.tally.if_else}}},
            {"inputs", inputs},
            {"output", r.output_var},
            {"qubits", r.circuit.qubits},
            {"diagnostics", r.diagnostics}};
}

}  // namespace qex::synth
