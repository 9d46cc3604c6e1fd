#pragma once

// Static checks. The quantum backend rejects pointer statements; both
// backends check literal width, definedness, and return placement.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "qex/lang/ast.hpp"

namespace qex::lang {

enum class Backend { classical, quantum };

struct Violation {
    std::string message;
    Pos pos;
};

namespace detail {

struct Checker {
    int width;
    Backend backend;
    std::vector<Violation>& out;
    std::set<std::string> defined;
    std::set<std::string> pointers;

    std::uint64_t max_literal() const { return (std::uint64_t{1} << width) - 1; }

    void expr(const ExprPtr& e) {
        switch (e->kind) {
            case Expr::Kind::lit:
                if (e->value > max_literal())
                    out.push_back({"literal " + std::to_string(e->value) +
                                       " exceeds width m=" + std::to_string(width),
                                   e->pos});
                return;
            case Expr::Kind::var:
                if (!defined.count(e->name))
                    out.push_back({"variable '" + e->name + "' used before assignment", e->pos});
                return;
            case Expr::Kind::bin:
                expr(e->lhs);
                expr(e->rhs);
                return;
        }
    }

    void pred(const PredPtr& q) {
        switch (q->kind) {
            case Pred::Kind::truth: return;
            case Pred::Kind::negation: pred(q->lhs); return;
            case Pred::Kind::conjunction:
            case Pred::Kind::disjunction:
                pred(q->lhs);
                pred(q->rhs);
                return;
            case Pred::Kind::relation:
                expr(q->rel_lhs);
                expr(q->rel_rhs);
                return;
        }
    }

    void stmts(const std::vector<StmtPtr>& body, bool tail) {
        for (size_t i = 0; i < body.size(); ++i)
            stmt(body[i], tail && i + 1 == body.size());
    }

    void stmt(const StmtPtr& s, bool tail) {
        switch (s->kind) {
            case Stmt::Kind::assign:
                expr(s->value);
                defined.insert(s->target);
                return;
            case Stmt::Kind::addr_of:
                if (backend == Backend::quantum)
                    out.push_back({"pointer statement not supported by the quantum backend",
                                   s->pos});
                if (!defined.count(s->source_var))
                    out.push_back({"variable '" + s->source_var + "' used before assignment",
                                   s->pos});
                pointers.insert(s->target);
                defined.insert(s->target);
                return;
            case Stmt::Kind::load:
                if (backend == Backend::quantum)
                    out.push_back({"pointer statement not supported by the quantum backend",
                                   s->pos});
                if (!pointers.count(s->source_var))
                    out.push_back({"'" + s->source_var + "' is not a pointer", s->pos});
                defined.insert(s->target);
                return;
            case Stmt::Kind::store:
                if (backend == Backend::quantum)
                    out.push_back({"pointer statement not supported by the quantum backend",
                                   s->pos});
                if (!pointers.count(s->target))
                    out.push_back({"'" + s->target + "' is not a pointer", s->pos});
                expr(s->value);
                return;
            case Stmt::Kind::branch:
                pred(s->cond);
                stmts(s->body, tail);
                stmts(s->else_body, tail);
                return;
            case Stmt::Kind::loop:
                pred(s->cond);
                stmts(s->body, false);
                return;
            case Stmt::Kind::ret:
                expr(s->value);
                if (!tail)
                    out.push_back({"return must be the final statement on its path", s->pos});
                defined.insert(ret_var);
                return;
        }
    }
};

}  // namespace detail

// Returns all violations (empty list means valid).
inline std::vector<Violation> validate(const Program& p, int width,
                                       Backend backend = Backend::quantum) {
    std::vector<Violation> out;
    detail::Checker ck{width, backend, out, {}, {}};
    for (const auto& prm : p.params) {
        ck.defined.insert(prm.name);
        if (prm.pointer) {
            ck.pointers.insert(prm.name);
            ck.defined.insert(pointee_cell(prm.name));
        }
    }
    ck.stmts(p.body, true);
    return out;
}

}  // namespace qex::lang
