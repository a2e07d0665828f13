#include <cctype>
#include <vector>

#include "alambda/syntax.hpp"

namespace alambda {

namespace {

struct Token {
    enum class Kind { LParen, RParen, Lambda, Dot, Plus, Ident, Number, End };
    Kind kind;
    std::string text;
    int line;
    int col;
};

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto push = [&](Token::Kind k, std::string s, int l, int c) {
        out.push_back(Token{k, std::move(s), l, c});
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++col;
            ++i;
            continue;
        }
        int tl = line, tc = col;
        if (c == '(') { push(Token::Kind::LParen, "(", tl, tc); ++i; ++col; continue; }
        if (c == ')') { push(Token::Kind::RParen, ")", tl, tc); ++i; ++col; continue; }
        if (c == '.') { push(Token::Kind::Dot, ".", tl, tc); ++i; ++col; continue; }
        if (c == '+') { push(Token::Kind::Plus, "+", tl, tc); ++i; ++col; continue; }
        if (c == '\\') { push(Token::Kind::Lambda, "\\", tl, tc); ++i; ++col; continue; }
        // UTF-8 lambda U+03BB
        if (static_cast<unsigned char>(c) == 0xCE && i + 1 < text.size() &&
            static_cast<unsigned char>(text[i + 1]) == 0xBB) {
            push(Token::Kind::Lambda, "λ", tl, tc);
            i += 2;
            ++col;
            continue;
        }
        if (ident_start(c)) {
            std::size_t b = i;
            while (i < text.size() && ident_char(text[i])) ++i;
            col += static_cast<int>(i - b);
            push(Token::Kind::Ident, std::string(text.substr(b, i - b)), tl, tc);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '-' && i + 1 < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            std::size_t b = i;
            if (c == '-') ++i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            // fraction literal: digits '/' digits as a single lexeme
            if (i < text.size() && text[i] == '/' && i + 1 < text.size() &&
                std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
                ++i;
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            }
            col += static_cast<int>(i - b);
            push(Token::Kind::Number, std::string(text.substr(b, i - b)), tl, tc);
            continue;
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", line, col);
    }
    push(Token::Kind::End, "", line, col);
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> toks, Semiring ring)
        : toks_(std::move(toks)), ring_(ring) {}

    RawPtr run() {
        auto t = parse_term();
        expect(Token::Kind::End, "end of input");
        return t;
    }

private:
    const Token& cur() const { return toks_[i_]; }
    const Token& ahead() const { return i_ + 1 < toks_.size() ? toks_[i_ + 1] : toks_.back(); }
    void advance() { if (i_ + 1 < toks_.size()) ++i_; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, cur().line, cur().col);
    }

    void expect(Token::Kind k, const char* what) {
        if (cur().kind != k) fail(std::string("expected ") + what);
        advance();
    }

    bool atom_start() const {
        switch (cur().kind) {
        case Token::Kind::LParen:
        case Token::Kind::Lambda:
        case Token::Kind::Ident: return true;
        case Token::Kind::Number: return cur().text == "0";
        default: return false;
        }
    }

    // A coefficient literal position: number, or T/F over bool, followed by '.'
    bool coeff_ahead() const {
        if (ahead().kind != Token::Kind::Dot) return false;
        if (cur().kind == Token::Kind::Number) return true;
        return ring_ == Semiring::Bool && cur().kind == Token::Kind::Ident &&
               (cur().text == "T" || cur().text == "F");
    }

    RawPtr parse_term() { return parse_sum(); }

    RawPtr parse_sum() {
        auto t = parse_scale();
        while (cur().kind == Token::Kind::Plus) {
            advance();
            t = rsum(std::move(t), parse_scale());
        }
        return t;
    }

    RawPtr parse_scale() {
        if (coeff_ahead()) {
            const Token tok = cur();
            advance();
            advance(); // '.'
            Coeff c = [&] {
                try {
                    return Coeff::parse(tok.text, ring_);
                } catch (const ParseError& e) {
                    throw ParseError(e.what(), tok.line, tok.col);
                }
            }();
            return rscale(std::move(c), parse_scale());
        }
        return parse_app();
    }

    RawPtr parse_app() {
        auto t = parse_atom();
        while (atom_start()) t = rapp(std::move(t), parse_atom());
        return t;
    }

    RawPtr parse_atom() {
        switch (cur().kind) {
        case Token::Kind::Ident: {
            std::string name = cur().text;
            advance();
            return resolve(name);
        }
        case Token::Kind::Number: {
            if (cur().text != "0") fail("unexpected number '" + cur().text + "'");
            advance();
            return rzero();
        }
        case Token::Kind::Lambda: {
            advance();
            if (cur().kind != Token::Kind::Ident) fail("expected binder name");
            std::string binder = cur().text;
            advance();
            expect(Token::Kind::Dot, "'.' after binder");
            binders_.push_back(binder);
            auto body = parse_term();
            binders_.pop_back();
            return rlam(std::move(body));
        }
        case Token::Kind::LParen: {
            advance();
            auto t = parse_term();
            expect(Token::Kind::RParen, "')'");
            if (atom_start()) return rapp(std::move(t), parse_atom());
            return t;
        }
        default:
            fail("expected a term");
        }
    }

    RawPtr resolve(const std::string& name) {
        for (std::size_t k = binders_.size(); k-- > 0;) {
            if (binders_[k] == name)
                return rbound(static_cast<int>(binders_.size() - 1 - k));
        }
        return rvar(name);
    }

    std::vector<Token> toks_;
    Semiring ring_;
    std::size_t i_ = 0;
    std::vector<std::string> binders_;
};

} // namespace

RawPtr parse(std::string_view text, Semiring ring) {
    return Parser(lex(text), ring).run();
}

} // namespace alambda
