#pragma once

#include <cctype>
#include <functional>
#include <map>
#include <string>
#include <string_view>

#include "fcw/ratfunc.hpp"

namespace fcw {

/// Recursive-descent parser for ring expressions: integers, named atoms,
/// + - * / ^ (integer exponents) and parentheses. Division and negative
/// powers go through `invert`, which may reject non-units.
template <class Ring>
class ExprParser {
public:
    using Invert = std::function<Ring(const Ring&)>;

    ExprParser(std::string_view text, std::map<std::string, Ring> atoms, Invert invert)
        : s_(text), atoms_(std::move(atoms)), invert_(std::move(invert)) {}

    Ring parse() {
        Ring r = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw InputError("cannot parse '" + std::string(s_) + "' at offset " + std::to_string(pos_) +
                         ": " + what);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char ch) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == ch) { ++pos_; return true; }
        return false;
    }
    Ring inverted(const Ring& r) {
        try {
            return invert_(r);
        } catch (const DomainError& e) {
            fail(e.what());
        }
    }
    Ring expr() {
        Ring r = term();
        for (;;) {
            if (accept('+')) r = r + term();
            else if (accept('-')) r = r - term();
            else return r;
        }
    }
    Ring term() {
        Ring r = unary();
        for (;;) {
            if (accept('*')) r = r * unary();
            else if (accept('/')) r = r * inverted(unary());
            else return r;
        }
    }
    Ring unary() {
        if (accept('-')) return Ring(Scalar(-1)) * unary();
        if (accept('+')) return unary();
        return power();
    }
    Ring power() {
        Ring base = atom();
        if (!accept('^')) return base;
        bool neg = accept('-');
        skip();
        long e = 0;
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            e = e * 10 + (s_[pos_++] - '0');
        if (start == pos_) fail("expected integer exponent");
        if (neg) base = inverted(base);
        Ring r(Scalar(1));
        for (long i = 0; i < e; ++i) r = r * base;
        return r;
    }
    Ring atom() {
        skip();
        if (accept('(')) {
            Ring r = expr();
            if (!accept(')')) fail("expected ')'");
            return r;
        }
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return Ring(Scalar(mpz_class(std::string(s_.substr(start, pos_ - start)))));
        }
        // longest matching atom name
        const Ring* best = nullptr;
        std::size_t best_len = 0;
        for (const auto& [name, value] : atoms_)
            if (name.size() > best_len && s_.compare(pos_, name.size(), name) == 0) {
                best = &value;
                best_len = name.size();
            }
        if (!best) fail("expected a number, an atom or '('");
        pos_ += best_len;
        return *best;
    }

    std::string_view s_;
    std::map<std::string, Ring> atoms_;
    Invert invert_;
    std::size_t pos_ = 0;
};

inline RationalFunction parse_ratfunc(std::string_view text, const std::string& var = "x") {
    return ExprParser<RationalFunction>(text, {{var, RationalFunction::x()}},
                                        [](const RationalFunction& f) { return f.inverse(); })
        .parse();
}

} // namespace fcw
