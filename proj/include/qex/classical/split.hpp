#pragma once

// Splits a program at a top-level statement boundary. The suffix's
// inputs are the variables live at the split: read in the suffix
// before any suffix assignment reaches them.

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "qex/lang/ast.hpp"

namespace qex::classical {

struct SplitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SplitResult {
    lang::Program prefix;
    lang::Program suffix;
    std::vector<std::string> live;  // suffix inputs, in first-use order
};

namespace detail {

struct LiveScan {
    std::vector<std::string> live_order;
    std::set<std::string> live;

    void read(const std::string& name, const std::set<std::string>& defined) {
        if (defined.count(name) || live.count(name)) return;
        live.insert(name);
        live_order.push_back(name);
    }

    void expr(const lang::ExprPtr& e, const std::set<std::string>& defined) {
        using K = lang::Expr::Kind;
        switch (e->kind) {
            case K::lit: return;
            case K::var: read(e->name, defined); return;
            case K::bin:
                expr(e->lhs, defined);
                expr(e->rhs, defined);
                return;
        }
    }

    void pred(const lang::PredPtr& q, const std::set<std::string>& defined) {
        using K = lang::Pred::Kind;
        switch (q->kind) {
            case K::truth: return;
            case K::negation: pred(q->lhs, defined); return;
            case K::conjunction:
            case K::disjunction:
                pred(q->lhs, defined);
                pred(q->rhs, defined);
                return;
            case K::relation:
                expr(q->rel_lhs, defined);
                expr(q->rel_rhs, defined);
                return;
        }
    }

    // Returns the definitely-assigned set after the block.
    std::set<std::string> stmts(const std::vector<lang::StmtPtr>& body,
                                std::set<std::string> defined) {
        using K = lang::Stmt::Kind;
        for (const auto& s : body) {
            switch (s->kind) {
                case K::assign:
                    expr(s->value, defined);
                    defined.insert(s->target);
                    break;
                case K::addr_of:
                    read(s->source_var, defined);
                    defined.insert(s->target);
                    break;
                case K::load:
                    read(s->source_var, defined);
                    read(lang::pointee_cell(s->source_var), defined);
                    defined.insert(s->target);
                    break;
                case K::store:
                    read(s->target, defined);
                    expr(s->value, defined);
                    break;
                case K::branch: {
                    pred(s->cond, defined);
                    auto then_def = stmts(s->body, defined);
                    auto else_def = stmts(s->else_body, defined);
                    std::set<std::string> both;
                    for (const auto& v : then_def)
                        if (else_def.count(v)) both.insert(v);
                    defined = std::move(both);
                    break;
                }
                case K::loop:
                    pred(s->cond, defined);
                    stmts(s->body, defined);  // body may not run; keep entry set
                    break;
                case K::ret:
                    expr(s->value, defined);
                    defined.insert(lang::ret_var);
                    break;
            }
        }
        return defined;
    }
};

}  // namespace detail

inline SplitResult split(const lang::Program& p, size_t index) {
    if (index > p.body.size())
        throw SplitError("split index " + std::to_string(index) + " out of range (0.." +
                         std::to_string(p.body.size()) + ")");
    SplitResult out;
    out.prefix = p;
    out.prefix.body.assign(p.body.begin(), p.body.begin() + index);
    out.suffix.name = p.name + "_suffix";
    out.suffix.pos = p.pos;
    out.suffix.body.assign(p.body.begin() + index, p.body.end());

    detail::LiveScan scan;
    scan.stmts(out.suffix.body, {});
    out.live = scan.live_order;
    for (const auto& v : out.live) out.suffix.params.push_back({v, false, {}});
    return out;
}

}  // namespace qex::classical
