#pragma once

// Abstract syntax for the WHILE language with the pointer extension.
// Trees are immutable and shared; rewrites build new nodes.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qex::lang {

struct Pos {
    int line = 0;
    int col = 0;
};

enum class BinOp { add, sub, mul, divide };
enum class RelOp { lt, le, gt, ge };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { var, lit, bin };

    Kind kind;
    Pos pos;
    std::string name;      // var
    std::uint64_t value = 0;  // lit
    BinOp op = BinOp::add; // bin
    ExprPtr lhs, rhs;      // bin

    static ExprPtr make_var(std::string n, Pos p = {}) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::var;
        e->name = std::move(n);
        e->pos = p;
        return e;
    }
    static ExprPtr make_lit(std::uint64_t v, Pos p = {}) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::lit;
        e->value = v;
        e->pos = p;
        return e;
    }
    static ExprPtr make_bin(BinOp o, ExprPtr l, ExprPtr r, Pos p = {}) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::bin;
        e->op = o;
        e->lhs = std::move(l);
        e->rhs = std::move(r);
        e->pos = p;
        return e;
    }
};

struct Pred;
using PredPtr = std::shared_ptr<const Pred>;

// Equality operators are stored desugared: a == b becomes
// (a <= b) and (a >= b), a != b becomes !(a == b). The sugar tag lets
// the printer reproduce the surface form; structural equality ignores it.
enum class Sugar { none, eq, ne };

struct Pred {
    enum class Kind { truth, negation, conjunction, disjunction, relation };

    Kind kind;
    Pos pos;
    Sugar sugar = Sugar::none;
    bool truth_value = false;       // truth
    PredPtr lhs, rhs;               // negation (lhs only), conjunction, disjunction
    RelOp op = RelOp::lt;           // relation
    ExprPtr rel_lhs, rel_rhs;       // relation

    static PredPtr make_truth(bool v, Pos p = {}) {
        auto q = std::make_shared<Pred>();
        q->kind = Kind::truth;
        q->truth_value = v;
        q->pos = p;
        return q;
    }
    static PredPtr make_not(PredPtr a, Pos p = {}, Sugar s = Sugar::none) {
        auto q = std::make_shared<Pred>();
        q->kind = Kind::negation;
        q->lhs = std::move(a);
        q->pos = p;
        q->sugar = s;
        return q;
    }
    static PredPtr make_and(PredPtr a, PredPtr b, Pos p = {}, Sugar s = Sugar::none) {
        auto q = std::make_shared<Pred>();
        q->kind = Kind::conjunction;
        q->lhs = std::move(a);
        q->rhs = std::move(b);
        q->pos = p;
        q->sugar = s;
        return q;
    }
    static PredPtr make_or(PredPtr a, PredPtr b, Pos p = {}) {
        auto q = std::make_shared<Pred>();
        q->kind = Kind::disjunction;
        q->lhs = std::move(a);
        q->rhs = std::move(b);
        q->pos = p;
        return q;
    }
    static PredPtr make_rel(RelOp o, ExprPtr l, ExprPtr r, Pos p = {}) {
        auto q = std::make_shared<Pred>();
        q->kind = Kind::relation;
        q->op = o;
        q->rel_lhs = std::move(l);
        q->rel_rhs = std::move(r);
        q->pos = p;
        return q;
    }
};

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct Stmt {
    enum class Kind {
        assign,   // x := e;        (declared marks "int x := e;")
        addr_of,  // x := &y;
        load,     // x := *p;
        store,    // *p := e;
        branch,   // if (c) {..} else {..}
        loop,     // while (c) {..}
        ret,      // return e;
    };

    Kind kind;
    Pos pos;
    int id = -1;               // stable source id, preserved across rewrites
    bool declared = false;     // assign only
    std::string target;        // assign/addr_of/load destination; store pointer var
    std::string source_var;    // addr_of: &source_var, load: *source_var
    ExprPtr value;             // assign/store/ret
    PredPtr cond;              // branch/loop
    std::vector<StmtPtr> body;        // loop body / branch then-body
    std::vector<StmtPtr> else_body;   // branch only

    static StmtPtr make_assign(std::string t, ExprPtr e, Pos p = {}, bool decl = false) {
        auto s = std::make_shared<Stmt>();
        s->kind = Kind::assign;
        s->target = std::move(t);
        s->value = std::move(e);
        s->pos = p;
        s->declared = decl;
        return s;
    }
    static StmtPtr make_addr_of(std::string t, std::string src, Pos p = {}) {
        auto s = std::make_shared<Stmt>();
        s->kind = Kind::addr_of;
        s->target = std::move(t);
        s->source_var = std::move(src);
        s->pos = p;
        return s;
    }
    static StmtPtr make_load(std::string t, std::string ptr, Pos p = {}) {
        auto s = std::make_shared<Stmt>();
        s->kind = Kind::load;
        s->target = std::move(t);
        s->source_var = std::move(ptr);
        s->pos = p;
        return s;
    }
    static StmtPtr make_store(std::string ptr, ExprPtr e, Pos p = {}) {
        auto s = std::make_shared<Stmt>();
        s->kind = Kind::store;
        s->target = std::move(ptr);
        s->value = std::move(e);
        s->pos = p;
        return s;
    }
    static StmtPtr make_branch(PredPtr c, std::vector<StmtPtr> then_b,
                               std::vector<StmtPtr> else_b, Pos p = {}) {
        auto s = std::make_shared<Stmt>();
        s->kind = Kind::branch;
        s->cond = std::move(c);
        s->body = std::move(then_b);
        s->else_body = std::move(else_b);
        s->pos = p;
        return s;
    }
    static StmtPtr make_loop(PredPtr c, std::vector<StmtPtr> b, Pos p = {}) {
        auto s = std::make_shared<Stmt>();
        s->kind = Kind::loop;
        s->cond = std::move(c);
        s->body = std::move(b);
        s->pos = p;
        return s;
    }
    static StmtPtr make_ret(ExprPtr e, Pos p = {}) {
        auto s = std::make_shared<Stmt>();
        s->kind = Kind::ret;
        s->value = std::move(e);
        s->pos = p;
        return s;
    }
};

struct Param {
    std::string name;
    bool pointer = false;
    Pos pos;
};

struct Program {
    std::string name;
    std::vector<Param> params;
    std::vector<StmtPtr> body;
    Pos pos;
};

// Name of the pseudo-variable that receives a compound return expression.
inline const std::string ret_var = "ret";

// Name of the implicit cell a pointer parameter points at.
inline std::string pointee_cell(const std::string& param) { return "*" + param; }

inline bool equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Expr::Kind::var: return a->name == b->name;
        case Expr::Kind::lit: return a->value == b->value;
        case Expr::Kind::bin:
            return a->op == b->op && equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    }
    return false;
}

inline bool equal(const PredPtr& a, const PredPtr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Pred::Kind::truth: return a->truth_value == b->truth_value;
        case Pred::Kind::negation: return equal(a->lhs, b->lhs);
        case Pred::Kind::conjunction:
        case Pred::Kind::disjunction:
            return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
        case Pred::Kind::relation:
            return a->op == b->op && equal(a->rel_lhs, b->rel_lhs) && equal(a->rel_rhs, b->rel_rhs);
    }
    return false;
}

inline bool equal(const StmtPtr& a, const StmtPtr& b);

inline bool equal(const std::vector<StmtPtr>& a, const std::vector<StmtPtr>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!equal(a[i], b[i])) return false;
    return true;
}

inline bool equal(const StmtPtr& a, const StmtPtr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Stmt::Kind::assign:
            return a->target == b->target && equal(a->value, b->value);
        case Stmt::Kind::addr_of:
        case Stmt::Kind::load:
            return a->target == b->target && a->source_var == b->source_var;
        case Stmt::Kind::store:
            return a->target == b->target && equal(a->value, b->value);
        case Stmt::Kind::branch:
            return equal(a->cond, b->cond) && equal(a->body, b->body) &&
                   equal(a->else_body, b->else_body);
        case Stmt::Kind::loop:
            return equal(a->cond, b->cond) && equal(a->body, b->body);
        case Stmt::Kind::ret:
            return equal(a->value, b->value);
    }
    return false;
}

inline bool equal(const Program& a, const Program& b) {
    if (a.name != b.name || a.params.size() != b.params.size()) return false;
    for (size_t i = 0; i < a.params.size(); ++i)
        if (a.params[i].name != b.params[i].name || a.params[i].pointer != b.params[i].pointer)
            return false;
    return equal(a.body, b.body);
}

}  // namespace qex::lang
