#pragma once

// Canonical pretty printer. print(parse(print(p))) == print(p).

#include <sstream>
#include <string>

#include "qex/lang/ast.hpp"

namespace qex::lang {

struct PrintOptions {
    bool resugar = true;  // print == / != instead of their desugared form
    std::string indent = "    ";
};

namespace detail {

inline int expr_prec(const Expr& e) {
    if (e.kind != Expr::Kind::bin) return 3;
    return (e.op == BinOp::mul || e.op == BinOp::divide) ? 2 : 1;
}

inline void print_expr(std::ostream& os, const ExprPtr& e, int parent_prec = 0) {
    switch (e->kind) {
        case Expr::Kind::var: os << e->name; return;
        case Expr::Kind::lit: os << e->value; return;
        case Expr::Kind::bin: break;
    }
    int prec = expr_prec(*e);
    bool paren = prec < parent_prec;
    if (paren) os << "(";
    print_expr(os, e->lhs, prec);
    switch (e->op) {
        case BinOp::add: os << " + "; break;
        case BinOp::sub: os << " - "; break;
        case BinOp::mul: os << " * "; break;
        case BinOp::divide: os << " / "; break;
    }
    // Left-associative grammar: a right child of equal precedence needs parens.
    print_expr(os, e->rhs, prec + 1);
    if (paren) os << ")";
}

inline const char* rel_text(RelOp op) {
    switch (op) {
        case RelOp::lt: return " < ";
        case RelOp::le: return " <= ";
        case RelOp::gt: return " > ";
        case RelOp::ge: return " >= ";
    }
    return "";
}

inline int pred_prec(const Pred& q) {
    switch (q.kind) {
        case Pred::Kind::disjunction: return 1;
        case Pred::Kind::conjunction: return 2;
        default: return 3;
    }
}

inline void print_pred(std::ostream& os, const PredPtr& q, const PrintOptions& opt,
                       int parent_prec = 0) {
    if (opt.resugar && q->sugar == Sugar::eq && q->kind == Pred::Kind::conjunction) {
        print_expr(os, q->lhs->rel_lhs);
        os << " == ";
        print_expr(os, q->lhs->rel_rhs);
        return;
    }
    if (opt.resugar && q->sugar == Sugar::ne && q->kind == Pred::Kind::negation) {
        print_expr(os, q->lhs->lhs->rel_lhs);
        os << " != ";
        print_expr(os, q->lhs->lhs->rel_rhs);
        return;
    }
    switch (q->kind) {
        case Pred::Kind::truth:
            os << (q->truth_value ? "true" : "false");
            return;
        case Pred::Kind::negation:
            os << "!";
            if (q->lhs->kind == Pred::Kind::truth || q->lhs->kind == Pred::Kind::negation) {
                print_pred(os, q->lhs, opt, 3);
            } else {
                os << "(";
                print_pred(os, q->lhs, opt);
                os << ")";
            }
            return;
        case Pred::Kind::relation:
            print_expr(os, q->rel_lhs);
            os << rel_text(q->op);
            print_expr(os, q->rel_rhs);
            return;
        case Pred::Kind::conjunction:
        case Pred::Kind::disjunction: {
            int prec = pred_prec(*q);
            bool paren = prec < parent_prec;
            if (paren) os << "(";
            print_pred(os, q->lhs, opt, prec);
            os << (q->kind == Pred::Kind::conjunction ? " and " : " or ");
            print_pred(os, q->rhs, opt, prec + 1);
            if (paren) os << ")";
            return;
        }
    }
}

inline void print_stmts(std::ostream& os, const std::vector<StmtPtr>& body,
                        const PrintOptions& opt, int depth);

inline void print_stmt(std::ostream& os, const StmtPtr& s, const PrintOptions& opt, int depth) {
    for (int i = 0; i < depth; ++i) os << opt.indent;
    switch (s->kind) {
        case Stmt::Kind::assign:
            if (s->declared) os << "int ";
            os << s->target << " := ";
            print_expr(os, s->value);
            os << ";\n";
            return;
        case Stmt::Kind::addr_of:
            if (s->declared) os << "int ";
            os << s->target << " := &" << s->source_var << ";\n";
            return;
        case Stmt::Kind::load:
            if (s->declared) os << "int ";
            os << s->target << " := *" << s->source_var << ";\n";
            return;
        case Stmt::Kind::store:
            os << "*" << s->target << " := ";
            print_expr(os, s->value);
            os << ";\n";
            return;
        case Stmt::Kind::ret:
            os << "return ";
            print_expr(os, s->value);
            os << ";\n";
            return;
        case Stmt::Kind::branch:
            os << "if (";
            print_pred(os, s->cond, opt);
            os << ") {\n";
            print_stmts(os, s->body, opt, depth + 1);
            for (int i = 0; i < depth; ++i) os << opt.indent;
            os << "}";
            if (!s->else_body.empty()) {
                os << " else {\n";
                print_stmts(os, s->else_body, opt, depth + 1);
                for (int i = 0; i < depth; ++i) os << opt.indent;
                os << "}";
            }
            os << "\n";
            return;
        case Stmt::Kind::loop:
            os << "while (";
            print_pred(os, s->cond, opt);
            os << ") {\n";
            print_stmts(os, s->body, opt, depth + 1);
            for (int i = 0; i < depth; ++i) os << opt.indent;
            os << "}\n";
            return;
    }
}

inline void print_stmts(std::ostream& os, const std::vector<StmtPtr>& body,
                        const PrintOptions& opt, int depth) {
    for (const auto& s : body) print_stmt(os, s, opt, depth);
}

}  // namespace detail

inline std::string print(const Program& p, const PrintOptions& opt = {}) {
    std::ostringstream os;
    os << "int " << p.name << "(";
    for (size_t i = 0; i < p.params.size(); ++i) {
        if (i) os << ", ";
        os << "int" << (p.params[i].pointer ? "* " : " ") << p.params[i].name;
    }
    os << ") {\n";
    detail::print_stmts(os, p.body, opt, 1);
    os << "}\n";
    return os.str();
}

inline std::string print(const ExprPtr& e) {
    std::ostringstream os;
    detail::print_expr(os, e);
    return os.str();
}

inline std::string print(const PredPtr& q, const PrintOptions& opt = {}) {
    std::ostringstream os;
    detail::print_pred(os, q, opt);
    return os.str();
}

}  // namespace qex::lang
