#pragma once

// Recursive-descent parser. Reports the first error with its position.
//
// Precedence: ! binds tighter than and, and tighter than or; both are
// left-associative. Relations are a single non-associative level.
// a == b parses as (a <= b) and (a >= b); a != b as its negation.

#include <string>
#include <vector>

#include "qex/lang/ast.hpp"
#include "qex/lang/lexer.hpp"

namespace qex::lang {

class Parser {
  public:
    explicit Parser(const std::string& src) : toks_(lex(src)) {}

    Program parse_program() {
        Program p;
        expect(Tok::kw_int, "expected 'int'");
        p.pos = peek().pos;
        p.name = expect(Tok::ident, "expected function name").text;
        expect(Tok::lparen, "expected '('");
        if (!check(Tok::rparen)) {
            for (;;) {
                Param prm;
                expect(Tok::kw_int, "expected 'int' in parameter");
                if (match(Tok::star)) prm.pointer = true;
                Token t = expect(Tok::ident, "expected parameter name");
                prm.name = t.text;
                prm.pos = t.pos;
                p.params.push_back(prm);
                if (!match(Tok::comma)) break;
            }
        }
        expect(Tok::rparen, "expected ')'");
        expect(Tok::lbrace, "expected '{'");
        while (!check(Tok::rbrace)) p.body.push_back(parse_stmt());
        expect(Tok::rbrace, "expected '}'");
        if (!check(Tok::end)) throw ParseError("trailing input after program", peek().pos);
        return p;
    }

    // Parses a bare predicate (used for search targets).
    PredPtr parse_predicate() {
        PredPtr q = parse_pred();
        if (!check(Tok::end)) throw ParseError("trailing input after predicate", peek().pos);
        return q;
    }

  private:
    std::vector<Token> toks_;
    size_t cur_ = 0;
    int next_id_ = 0;

    const Token& peek(int ahead = 0) const {
        size_t k = cur_ + static_cast<size_t>(ahead);
        return k < toks_.size() ? toks_[k] : toks_.back();
    }
    const Token& advance() { return toks_[cur_ < toks_.size() - 1 ? cur_++ : cur_]; }
    bool check(Tok k) const { return peek().kind == k; }
    bool match(Tok k) {
        if (!check(k)) return false;
        advance();
        return true;
    }
    Token expect(Tok k, const std::string& msg) {
        if (!check(k)) throw ParseError(msg, peek().pos);
        return advance();
    }

    StmtPtr finish(StmtPtr s) {
        const_cast<Stmt*>(s.get())->id = next_id_++;
        return s;
    }

    StmtPtr parse_stmt() {
        Pos here = peek().pos;
        if (match(Tok::kw_if)) {
            expect(Tok::lparen, "expected '(' after if");
            PredPtr c = parse_pred();
            expect(Tok::rparen, "expected ')' after condition");
            std::vector<StmtPtr> then_b = parse_block();
            std::vector<StmtPtr> else_b;
            if (match(Tok::kw_else)) else_b = parse_block();
            return finish(Stmt::make_branch(std::move(c), std::move(then_b), std::move(else_b), here));
        }
        if (match(Tok::kw_while)) {
            expect(Tok::lparen, "expected '(' after while");
            PredPtr c = parse_pred();
            expect(Tok::rparen, "expected ')' after condition");
            std::vector<StmtPtr> b = parse_block();
            return finish(Stmt::make_loop(std::move(c), std::move(b), here));
        }
        if (match(Tok::kw_return)) {
            ExprPtr e = parse_expr();
            expect(Tok::semi, "expected ';' after return");
            return finish(Stmt::make_ret(std::move(e), here));
        }
        if (match(Tok::star)) {
            std::string ptr = expect(Tok::ident, "expected pointer variable after '*'").text;
            expect(Tok::assign, "expected ':='");
            ExprPtr e = parse_expr();
            expect(Tok::semi, "expected ';'");
            return finish(Stmt::make_store(std::move(ptr), std::move(e), here));
        }
        bool declared = false;
        if (match(Tok::kw_int)) {
            declared = true;
            match(Tok::star);  // pointer declaration
        }
        std::string target = expect(Tok::ident, "expected variable name").text;
        expect(Tok::assign, "expected ':='");
        if (match(Tok::amp)) {
            std::string src = expect(Tok::ident, "expected variable after '&'").text;
            expect(Tok::semi, "expected ';'");
            auto s = Stmt::make_addr_of(std::move(target), std::move(src), here);
            const_cast<Stmt*>(s.get())->declared = declared;
            return finish(std::move(s));
        }
        if (check(Tok::star) && peek(1).kind == Tok::ident && peek(2).kind == Tok::semi) {
            advance();
            std::string ptr = advance().text;
            advance();
            auto s = Stmt::make_load(std::move(target), std::move(ptr), here);
            const_cast<Stmt*>(s.get())->declared = declared;
            return finish(std::move(s));
        }
        ExprPtr e = parse_expr();
        expect(Tok::semi, "expected ';'");
        auto s = Stmt::make_assign(std::move(target), std::move(e), here, declared);
        return finish(s);
    }

    std::vector<StmtPtr> parse_block() {
        expect(Tok::lbrace, "expected '{'");
        std::vector<StmtPtr> body;
        while (!check(Tok::rbrace)) body.push_back(parse_stmt());
        expect(Tok::rbrace, "expected '}'");
        return body;
    }

    PredPtr parse_pred() {
        PredPtr q = parse_and();
        while (check(Tok::kw_or)) {
            Pos p = advance().pos;
            q = Pred::make_or(std::move(q), parse_and(), p);
        }
        return q;
    }

    PredPtr parse_and() {
        PredPtr q = parse_pred_unary();
        while (check(Tok::kw_and)) {
            Pos p = advance().pos;
            q = Pred::make_and(std::move(q), parse_pred_unary(), p);
        }
        return q;
    }

    PredPtr parse_pred_unary() {
        Pos here = peek().pos;
        if (match(Tok::bang)) return Pred::make_not(parse_pred_unary(), here);
        if (match(Tok::kw_true)) return Pred::make_truth(true, here);
        if (match(Tok::kw_false)) return Pred::make_truth(false, here);
        if (check(Tok::lparen)) {
            // A '(' opens either a nested predicate or the left expression of
            // a relation; try the predicate reading first and backtrack.
            size_t save = cur_;
            advance();
            try {
                PredPtr inner = parse_pred();
                expect(Tok::rparen, "expected ')'");
                if (is_relop(peek().kind))
                    throw ParseError("relation after predicate group", peek().pos);
                return inner;
            } catch (const ParseError&) {
                cur_ = save;
            }
        }
        return parse_relation();
    }

    static bool is_relop(Tok k) {
        return k == Tok::lt || k == Tok::le || k == Tok::gt || k == Tok::ge ||
               k == Tok::eq_eq || k == Tok::bang_eq;
    }

    PredPtr parse_relation() {
        ExprPtr l = parse_expr();
        Token op = peek();
        if (!is_relop(op.kind)) throw ParseError("expected relational operator", op.pos);
        advance();
        ExprPtr r = parse_expr();
        switch (op.kind) {
            case Tok::lt: return Pred::make_rel(RelOp::lt, std::move(l), std::move(r), op.pos);
            case Tok::le: return Pred::make_rel(RelOp::le, std::move(l), std::move(r), op.pos);
            case Tok::gt: return Pred::make_rel(RelOp::gt, std::move(l), std::move(r), op.pos);
            case Tok::ge: return Pred::make_rel(RelOp::ge, std::move(l), std::move(r), op.pos);
            case Tok::eq_eq:
                return Pred::make_and(Pred::make_rel(RelOp::le, l, r, op.pos),
                                      Pred::make_rel(RelOp::ge, l, r, op.pos), op.pos, Sugar::eq);
            case Tok::bang_eq:
                return Pred::make_not(
                    Pred::make_and(Pred::make_rel(RelOp::le, l, r, op.pos),
                                   Pred::make_rel(RelOp::ge, l, r, op.pos), op.pos, Sugar::eq),
                    op.pos, Sugar::ne);
            default: throw ParseError("expected relational operator", op.pos);
        }
    }

    ExprPtr parse_expr() {
        ExprPtr e = parse_term();
        for (;;) {
            if (check(Tok::plus)) {
                Pos p = advance().pos;
                e = Expr::make_bin(BinOp::add, std::move(e), parse_term(), p);
            } else if (check(Tok::minus)) {
                Pos p = advance().pos;
                e = Expr::make_bin(BinOp::sub, std::move(e), parse_term(), p);
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_term() {
        ExprPtr e = parse_factor();
        for (;;) {
            if (check(Tok::star)) {
                Pos p = advance().pos;
                e = Expr::make_bin(BinOp::mul, std::move(e), parse_factor(), p);
            } else if (check(Tok::slash)) {
                Pos p = advance().pos;
                e = Expr::make_bin(BinOp::divide, std::move(e), parse_factor(), p);
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_factor() {
        Token t = peek();
        if (match(Tok::number)) return Expr::make_lit(t.number, t.pos);
        if (match(Tok::ident)) return Expr::make_var(t.text, t.pos);
        if (match(Tok::lparen)) {
            ExprPtr e = parse_expr();
            expect(Tok::rparen, "expected ')'");
            return e;
        }
        throw ParseError("expected expression", t.pos);
    }
};

inline Program parse(const std::string& src) { return Parser(src).parse_program(); }

inline PredPtr parse_pred_text(const std::string& src) { return Parser(src).parse_predicate(); }

}  // namespace qex::lang
