#pragma once

// Concrete interpreter: the ground truth for every other backend.
// Arithmetic is unsigned modulo 2^(m+1) (m value bits plus one carry
// bit), division is floor with x/0 := 0, comparisons read the full
// (m+1)-bit value. While loops run concretely under a step limit.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qex/lang/ast.hpp"

namespace qex::classical {

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConcreteEnv {
    std::map<std::string, std::uint64_t> values;
    std::map<std::string, std::string> pointers;  // pointer var -> target var
};

namespace detail {

struct Interp {
    int m;
    std::uint64_t mask;
    std::uint64_t steps_left;
    ConcreteEnv& env;

    std::uint64_t var(const std::string& name, lang::Pos pos) const {
        auto it = env.values.find(name);
        if (it == env.values.end())
            throw EvalError("unbound variable '" + name + "' at " + std::to_string(pos.line) +
                            ":" + std::to_string(pos.col));
        return it->second;
    }

    std::uint64_t expr(const lang::ExprPtr& e) {
        using K = lang::Expr::Kind;
        switch (e->kind) {
            case K::lit: return e->value & mask;
            case K::var: return var(e->name, e->pos);
            case K::bin: {
                std::uint64_t a = expr(e->lhs), b = expr(e->rhs);
                switch (e->op) {
                    case lang::BinOp::add: return (a + b) & mask;
                    case lang::BinOp::sub: return (a - b) & mask;
                    case lang::BinOp::mul: return (a * b) & mask;
                    case lang::BinOp::divide: return b == 0 ? 0 : a / b;
                }
            }
        }
        return 0;
    }

    bool pred(const lang::PredPtr& q) {
        using K = lang::Pred::Kind;
        switch (q->kind) {
            case K::truth: return q->truth_value;
            case K::negation: return !pred(q->lhs);
            case K::conjunction: return pred(q->lhs) && pred(q->rhs);
            case K::disjunction: return pred(q->lhs) || pred(q->rhs);
            case K::relation: {
                std::uint64_t a = expr(q->rel_lhs), b = expr(q->rel_rhs);
                switch (q->op) {
                    case lang::RelOp::lt: return a < b;
                    case lang::RelOp::le: return a <= b;
                    case lang::RelOp::gt: return a > b;
                    case lang::RelOp::ge: return a >= b;
                }
            }
        }
        return false;
    }

    void tick(lang::Pos pos) {
        if (steps_left == 0)
            throw EvalError("step limit exceeded at " + std::to_string(pos.line) + ":" +
                            std::to_string(pos.col) + " (non-terminating loop?)");
        --steps_left;
    }

    const std::string& deref(const std::string& ptr, lang::Pos pos) const {
        auto it = env.pointers.find(ptr);
        if (it == env.pointers.end())
            throw EvalError("'" + ptr + "' is not a pointer at " + std::to_string(pos.line) +
                            ":" + std::to_string(pos.col));
        return it->second;
    }

    void stmts(const std::vector<lang::StmtPtr>& body) {
        for (const auto& s : body) stmt(s);
    }

    void stmt(const lang::StmtPtr& s) {
        using K = lang::Stmt::Kind;
        tick(s->pos);
        switch (s->kind) {
            case K::assign:
                env.values[s->target] = expr(s->value);
                return;
            case K::addr_of:
                env.pointers[s->target] = s->source_var;
                env.values[s->target] = 0;  // pointers carry no numeric value
                return;
            case K::load:
                env.values[s->target] = var(deref(s->source_var, s->pos), s->pos);
                return;
            case K::store:
                env.values[deref(s->target, s->pos)] = expr(s->value);
                return;
            case K::branch:
                if (pred(s->cond)) stmts(s->body);
                else stmts(s->else_body);
                return;
            case K::loop:
                while (pred(s->cond)) {
                    tick(s->pos);
                    stmts(s->body);
                }
                return;
            case K::ret:
                env.values[lang::ret_var] = expr(s->value);
                return;
        }
    }
};

}  // namespace detail

constexpr std::uint64_t default_step_limit = 1'000'000;

// Runs p over env in place. env must bind every input; pointer
// parameters are pre-bound to their implicit pointee cells.
inline void interpret(const lang::Program& p, ConcreteEnv& env, int m,
                      std::uint64_t step_limit = default_step_limit) {
    detail::Interp it{m, (std::uint64_t{1} << (m + 1)) - 1, step_limit, env};
    for (const auto& prm : p.params)
        if (prm.pointer) env.pointers[prm.name] = lang::pointee_cell(prm.name);
    it.stmts(p.body);
}

}  // namespace qex::classical
