#pragma once

// Tokenizer for the WHILE language. Supports // line comments.

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qex/lang/ast.hpp"

namespace qex::lang {

struct ParseError : std::runtime_error {
    Pos pos;
    ParseError(const std::string& msg, Pos p)
        : std::runtime_error(msg + " at " + std::to_string(p.line) + ":" + std::to_string(p.col)),
          pos(p) {}
};

enum class Tok {
    ident, number,
    kw_int, kw_if, kw_else, kw_while, kw_return, kw_and, kw_or, kw_true, kw_false,
    lparen, rparen, lbrace, rbrace, semi, comma,
    assign,                      // :=
    plus, minus, star, slash,
    amp, bang,
    lt, le, gt, ge, eq_eq, bang_eq,
    end,
};

struct Token {
    Tok kind;
    std::string text;
    std::uint64_t number = 0;
    Pos pos;
};

inline std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto push = [&](Tok k, std::string text, Pos p, std::uint64_t num = 0) {
        out.push_back({k, std::move(text), num, p});
    };
    while (i < src.size()) {
        char c = src[i];
        Pos here{line, col};
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++col;
            ++i;
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') ++i;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            std::string word = src.substr(i, j - i);
            col += static_cast<int>(j - i);
            i = j;
            Tok k = Tok::ident;
            if (word == "int") k = Tok::kw_int;
            else if (word == "if") k = Tok::kw_if;
            else if (word == "else") k = Tok::kw_else;
            else if (word == "while") k = Tok::kw_while;
            else if (word == "return") k = Tok::kw_return;
            else if (word == "and") k = Tok::kw_and;
            else if (word == "or") k = Tok::kw_or;
            else if (word == "true") k = Tok::kw_true;
            else if (word == "false") k = Tok::kw_false;
            push(k, word, here);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            std::string digits = src.substr(i, j - i);
            col += static_cast<int>(j - i);
            i = j;
            push(Tok::number, digits, here, std::stoull(digits));
            continue;
        }
        auto two = [&](char a, char b) {
            return c == a && i + 1 < src.size() && src[i + 1] == b;
        };
        if (two(':', '=')) { push(Tok::assign, ":=", here); i += 2; col += 2; continue; }
        if (two('<', '=')) { push(Tok::le, "<=", here); i += 2; col += 2; continue; }
        if (two('>', '=')) { push(Tok::ge, ">=", here); i += 2; col += 2; continue; }
        if (two('=', '=')) { push(Tok::eq_eq, "==", here); i += 2; col += 2; continue; }
        if (two('!', '=')) { push(Tok::bang_eq, "!=", here); i += 2; col += 2; continue; }
        Tok k;
        switch (c) {
            case '(': k = Tok::lparen; break;
            case ')': k = Tok::rparen; break;
            case '{': k = Tok::lbrace; break;
            case '}': k = Tok::rbrace; break;
            case ';': k = Tok::semi; break;
            case ',': k = Tok::comma; break;
            case '+': k = Tok::plus; break;
            case '-': k = Tok::minus; break;
            case '*': k = Tok::star; break;
            case '/': k = Tok::slash; break;
            case '&': k = Tok::amp; break;
            case '!': k = Tok::bang; break;
            case '<': k = Tok::lt; break;
            case '>': k = Tok::gt; break;
            default:
                throw ParseError("unexpected character '" + std::string(1, c) + "'", here);
        }
        push(k, std::string(1, c), here);
        ++i;
        ++col;
    }
    out.push_back({Tok::end, "", 0, {line, col}});
    return out;
}

}  // namespace qex::lang
