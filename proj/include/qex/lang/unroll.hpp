#pragma once

// Loop unrolling: while (b) { S } becomes a k-deep nest of
// if (b) { S if (b) { S ... } }. k = 0 removes the loop. Nested loops
// unroll recursively at the same bound. Statement ids survive the
// rewrite so provenance still points at source statements.

#include <vector>

#include "qex/lang/ast.hpp"

namespace qex::lang {

namespace detail {

inline std::vector<StmtPtr> unroll_stmts(const std::vector<StmtPtr>& body, int k);

inline StmtPtr with_id(StmtPtr s, int id) {
    const_cast<Stmt*>(s.get())->id = id;
    return s;
}

inline StmtPtr unroll_stmt(const StmtPtr& s, int k) {
    switch (s->kind) {
        case Stmt::Kind::branch:
            return with_id(Stmt::make_branch(s->cond, unroll_stmts(s->body, k),
                                             unroll_stmts(s->else_body, k), s->pos),
                           s->id);
        case Stmt::Kind::loop: {
            std::vector<StmtPtr> iter_body = unroll_stmts(s->body, k);
            std::vector<StmtPtr> nest;  // empty: behavior past the bound is dropped
            for (int i = 0; i < k; ++i) {
                std::vector<StmtPtr> level = iter_body;
                for (auto& inner : nest) level.push_back(inner);
                nest.clear();
                nest.push_back(with_id(Stmt::make_branch(s->cond, std::move(level), {}, s->pos),
                                       s->id));
            }
            return nest.empty() ? nullptr : nest.front();
        }
        default:
            return s;
    }
}

inline std::vector<StmtPtr> unroll_stmts(const std::vector<StmtPtr>& body, int k) {
    std::vector<StmtPtr> out;
    for (const auto& s : body) {
        StmtPtr u = unroll_stmt(s, k);
        if (u) out.push_back(std::move(u));
    }
    return out;
}

}  // namespace detail

inline Program unroll(const Program& p, int k) {
    Program out = p;
    out.body = detail::unroll_stmts(p.body, k);
    return out;
}

inline bool has_loop(const std::vector<StmtPtr>& body) {
    for (const auto& s : body) {
        if (s->kind == Stmt::Kind::loop) return true;
        if (s->kind == Stmt::Kind::branch &&
            (has_loop(s->body) || has_loop(s->else_body)))
            return true;
    }
    return false;
}

inline bool has_loop(const Program& p) { return has_loop(p.body); }

// Counts AST nodes; used by the unroll growth checks.
inline int node_count(const ExprPtr& e) {
    if (!e) return 0;
    return 1 + (e->kind == Expr::Kind::bin ? node_count(e->lhs) + node_count(e->rhs) : 0);
}

inline int node_count(const PredPtr& q) {
    if (!q) return 0;
    switch (q->kind) {
        case Pred::Kind::truth: return 1;
        case Pred::Kind::negation: return 1 + node_count(q->lhs);
        case Pred::Kind::conjunction:
        case Pred::Kind::disjunction: return 1 + node_count(q->lhs) + node_count(q->rhs);
        case Pred::Kind::relation:
            return 1 + node_count(q->rel_lhs) + node_count(q->rel_rhs);
    }
    return 1;
}

inline int node_count(const std::vector<StmtPtr>& body);

inline int node_count(const StmtPtr& s) {
    int n = 1;
    n += node_count(s->value);
    n += node_count(s->cond);
    n += node_count(s->body);
    n += node_count(s->else_body);
    return n;
}

inline int node_count(const std::vector<StmtPtr>& body) {
    int n = 0;
    for (const auto& s : body) n += node_count(s);
    return n;
}

inline int node_count(const Program& p) { return node_count(p.body); }

}  // namespace qex::lang
