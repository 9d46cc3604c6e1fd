#pragma once

// Non-relational interval analysis. Cells live in [0, 2^(m+1) - 1];
// a transfer result that could wrap widens to the full range, so every
// result stays an over-approximation of the concrete semantics.
// Branches join by hull. Loops widen unstable variables to top after
// three passes. Pointers use may-point-to sets with weak updates.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qex/classical/domain.hpp"
#include "qex/lang/ast.hpp"

namespace qex::classical {

struct Interval {
    std::uint64_t lo = 0, hi = 0;

    bool operator==(const Interval&) const = default;
    std::uint64_t size() const { return hi - lo + 1; }
    bool contains(std::uint64_t v) const { return lo <= v && v <= hi; }

    static Interval hull(Interval a, Interval b) {
        return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
    }
};

struct IntervalEnv {
    std::map<std::string, Interval> vars;
    std::map<std::string, std::set<std::string>> points_to;

    bool operator==(const IntervalEnv&) const = default;

    static IntervalEnv join(const IntervalEnv& a, const IntervalEnv& b) {
        IntervalEnv out = a;
        for (const auto& [name, iv] : b.vars) {
            auto it = out.vars.find(name);
            out.vars[name] = it == out.vars.end() ? iv : Interval::hull(it->second, iv);
        }
        for (const auto& [name, tgts] : b.points_to)
            out.points_to[name].insert(tgts.begin(), tgts.end());
        return out;
    }
};

namespace detail {

struct IntervalInterp {
    std::uint64_t cell_max;

    Interval top() const { return {0, cell_max}; }

    Interval add(Interval a, Interval b) const {
        if (a.hi > cell_max - b.hi) return top();  // may wrap
        return {a.lo + b.lo, a.hi + b.hi};
    }
    Interval sub(Interval a, Interval b) const {
        if (a.lo < b.hi) return top();  // may wrap
        return {a.lo - b.hi, a.hi - b.lo};
    }
    Interval mul(Interval a, Interval b) const {
        if (b.hi != 0 && a.hi > cell_max / b.hi) return top();  // may wrap
        return {a.lo * b.lo, a.hi * b.hi};
    }
    Interval div(Interval a, Interval b) const {
        // x / 0 := 0, so a zero divisor contributes the value 0.
        if (b.hi == 0) return {0, 0};
        std::uint64_t lo = a.lo / b.hi;
        std::uint64_t hi = a.hi / std::max<std::uint64_t>(b.lo, 1);
        if (b.lo == 0) lo = 0;
        return {lo, hi};
    }

    Interval expr(const lang::ExprPtr& e, const IntervalEnv& env) const {
        using K = lang::Expr::Kind;
        switch (e->kind) {
            case K::lit: return {e->value, e->value};
            case K::var: {
                auto it = env.vars.find(e->name);
                return it == env.vars.end() ? top() : it->second;
            }
            case K::bin: {
                Interval a = expr(e->lhs, env), b = expr(e->rhs, env);
                switch (e->op) {
                    case lang::BinOp::add: return add(a, b);
                    case lang::BinOp::sub: return sub(a, b);
                    case lang::BinOp::mul: return mul(a, b);
                    case lang::BinOp::divide: return div(a, b);
                }
            }
        }
        return top();
    }

    void stmts(const std::vector<lang::StmtPtr>& body, IntervalEnv& env) const {
        for (const auto& s : body) stmt(s, env);
    }

    void stmt(const lang::StmtPtr& s, IntervalEnv& env) const {
        using K = lang::Stmt::Kind;
        switch (s->kind) {
            case K::assign:
                env.vars[s->target] = expr(s->value, env);
                return;
            case K::addr_of:
                env.points_to[s->target] = {s->source_var};
                env.vars[s->target] = {0, 0};
                return;
            case K::load: {
                auto it = env.points_to.find(s->source_var);
                if (it == env.points_to.end() || it->second.empty()) {
                    env.vars[s->target] = top();
                    return;
                }
                Interval acc{cell_max, 0};
                bool first = true;
                for (const auto& t : it->second) {
                    auto vt = env.vars.find(t);
                    Interval iv = vt == env.vars.end() ? top() : vt->second;
                    acc = first ? iv : Interval::hull(acc, iv);
                    first = false;
                }
                env.vars[s->target] = acc;
                return;
            }
            case K::store: {
                Interval val = expr(s->value, env);
                auto it = env.points_to.find(s->target);
                if (it == env.points_to.end()) return;
                for (const auto& t : it->second) {
                    auto vt = env.vars.find(t);
                    env.vars[t] = vt == env.vars.end() ? val : Interval::hull(vt->second, val);
                }
                return;
            }
            case K::branch: {
                IntervalEnv then_env = env, else_env = env;
                stmts(s->body, then_env);
                stmts(s->else_body, else_env);
                env = IntervalEnv::join(then_env, else_env);
                return;
            }
            case K::loop: {
                IntervalEnv cur = env;
                for (int pass = 1;; ++pass) {
                    IntervalEnv body_env = cur;
                    stmts(s->body, body_env);
                    IntervalEnv next = IntervalEnv::join(cur, body_env);
                    if (next == cur) break;
                    if (pass >= 3) {
                        // Widen whatever is still moving to top.
                        for (auto& [name, iv] : next.vars) {
                            auto it = cur.vars.find(name);
                            if (it == cur.vars.end() || !(it->second == iv)) iv = top();
                        }
                    }
                    cur = std::move(next);
                }
                env = cur;
                return;
            }
            case K::ret:
                env.vars[lang::ret_var] = expr(s->value, env);
                return;
        }
    }
};

}  // namespace detail

// Analyzes p from the given input domains at width m.
inline IntervalEnv interval_analyze(const lang::Program& p, const InputDomain& dom, int m) {
    std::uint64_t cell_max = (std::uint64_t{1} << (m + 1)) - 1;
    detail::IntervalInterp it{cell_max};
    IntervalEnv env;
    for (const auto& name : input_vars(p)) {
        VarDomain d = lookup(dom, name);
        switch (d.kind) {
            case VarDomain::Kind::full:
                env.vars[name] = {0, (std::uint64_t{1} << m) - 1};
                break;
            case VarDomain::Kind::interval:
                env.vars[name] = {d.lo, d.hi};
                break;
            case VarDomain::Kind::set:
                env.vars[name] = {d.values_.front(), d.values_.back()};
                break;
        }
    }
    for (const auto& prm : p.params)
        if (prm.pointer) env.points_to[prm.name] = {lang::pointee_cell(prm.name)};
    it.stmts(p.body, env);
    return env;
}

// Values an interval admits, as an explicit set (for rate comparisons).
inline std::vector<std::uint64_t> interval_values(Interval iv) {
    std::vector<std::uint64_t> out;
    out.reserve(iv.hi - iv.lo + 1);
    for (std::uint64_t v = iv.lo; v <= iv.hi; ++v) out.push_back(v);
    return out;
}

}  // namespace qex::classical
