#pragma once

#include "psicalc/laurent.hpp"

#include <cctype>
#include <string>
#include <string_view>

namespace psicalc {

class ExprError : public std::invalid_argument {
  public:
    ExprError(const std::string& what, size_t where)
        : std::invalid_argument(what + " (at position " + std::to_string(where) + ")") {}
};

namespace detail {

// Recursive descent over: expr := ['-'] term (('+'|'-') term)*
//                         term := factor ('*' factor)*
//                         factor := atom ['^' int]
//                         atom := int | 'pi' | '(' expr ')'
// Whitespace-insensitive; integers may be negative after '^'.
class SeriesParser {
  public:
    SeriesParser(std::string_view text, const PadicContext& ctx, long pi_precision)
        : text_(text), ctx_(ctx), m_(pi_precision) {}

    LaurentSeries parse() {
        LaurentSeries value = expr();
        skip_space();
        if (pos_ != text_.size()) {
            throw ExprError("trailing input", pos_);
        }
        return value;
    }

  private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool eat(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    LaurentSeries expr() {
        bool negative = false;
        if (eat('-')) {
            negative = true;
        } else {
            eat('+');
        }
        LaurentSeries acc = term();
        if (negative) {
            acc = negate(acc);
        }
        for (;;) {
            if (eat('+')) {
                acc = add(acc, term());
            } else if (eat('-')) {
                acc = sub(acc, term());
            } else {
                break;
            }
        }
        return acc;
    }

    LaurentSeries term() {
        LaurentSeries acc = factor();
        while (eat('*')) {
            acc = mul(acc, factor());
        }
        return acc;
    }

    LaurentSeries factor() {
        const bool was_pi = is_pi_ahead();
        LaurentSeries base = atom();
        if (!eat('^')) {
            return base;
        }
        const long long k = integer();
        if (was_pi) {
            // exact monomial, no inversion detour for pi^(-k)
            return from_monomials({{static_cast<long>(k), BigInt(1)}}, ctx_, m_);
        }
        if (k == 0) {
            return constant(BigInt(1), ctx_, m_);
        }
        LaurentSeries b = k > 0 ? base : invert_unit(base);
        LaurentSeries acc = b;
        for (long long i = 1; i < (k > 0 ? k : -k); ++i) {
            acc = mul(acc, b);
        }
        return acc;
    }

    bool is_pi_ahead() {
        skip_space();
        return text_.substr(pos_, 2) == "pi";
    }

    LaurentSeries atom() {
        skip_space();
        if (pos_ >= text_.size()) {
            throw ExprError("unexpected end of expression", pos_);
        }
        if (eat('(')) {
            LaurentSeries inner = expr();
            if (!eat(')')) {
                throw ExprError("expected ')'", pos_);
            }
            return inner;
        }
        if (text_.substr(pos_, 2) == "pi") {
            pos_ += 2;
            return from_monomials({{1, BigInt(1)}}, ctx_, m_);
        }
        if (std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            return constant(BigInt(digits()), ctx_, m_);
        }
        throw ExprError("expected a number, 'pi' or '('", pos_);
    }

    long long integer() {
        skip_space();
        bool negative = eat('-');
        skip_space();
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            throw ExprError("expected an integer", pos_);
        }
        const long long v = std::stoll(digits());
        return negative ? -v : v;
    }

    std::string digits() {
        std::string out;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            out.push_back(text_[pos_++]);
        }
        return out;
    }

    std::string_view text_;
    const PadicContext& ctx_;
    long m_;
    size_t pos_ = 0;
};

}  // namespace detail

inline LaurentSeries parse_series(std::string_view text, const PadicContext& ctx,
                                  long pi_precision) {
    return detail::SeriesParser(text, ctx, pi_precision).parse();
}

}  // namespace psicalc
