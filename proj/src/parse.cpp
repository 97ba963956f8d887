#include "hamsec/parse.hpp"

#include <cctype>

namespace hamsec {

namespace {

struct Parser {
    const std::string& s;
    Chart chart;
    int order;
    size_t pos = 0;
    int line = 1, col = 1;

    [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, line, col); }

    int peek() const { return pos < s.size() ? (unsigned char)s[pos] : -1; }

    void advance() {
        if (s[pos] == '\n') { ++line; col = 1; } else { ++col; }
        ++pos;
    }

    void skip_ws() {
        while (pos < s.size() && std::isspace((unsigned char)s[pos])) advance();
    }

    bool accept(char c) {
        skip_ws();
        if (peek() == c) { advance(); return true; }
        return false;
    }

    mpz_class integer() {
        skip_ws();
        if (!std::isdigit(peek())) fail("expected a number");
        std::string digits;
        while (std::isdigit(peek())) { digits += char(peek()); advance(); }
        return mpz_class(digits);
    }

    Jet number() {
        mpz_class num = integer();
        if (accept('/')) {
            mpz_class den = integer();
            if (den == 0) fail("zero denominator");
            Rat r(num, den);
            r.canonicalize();
            return Jet::constant(chart, order, r);
        }
        return Jet::constant(chart, order, Rat(num));
    }

    Jet variable() {
        skip_ws();
        int vline = line, vcol = col;
        std::string name;
        while (std::isalnum(peek())) { name += char(peek()); advance(); }
        int idx = chart.var_index(name);
        if (idx < 0)
            throw parse_error("unknown variable '" + name + "' in chart " + chart.describe(), vline, vcol);
        return Jet::variable(chart, order, idx);
    }

    Jet base() {
        skip_ws();
        if (accept('(')) {
            Jet e = expression();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(peek())) return number();
        if (std::isalpha(peek())) return variable();
        fail(pos < s.size() ? std::string("unexpected character '") + char(peek()) + "'"
                            : "unexpected end of input");
    }

    Jet factor() {
        Jet b = base();
        if (accept('^')) {
            mpz_class e = integer();
            if (e > 100) fail("exponent too large");
            long k = e.get_si();
            Jet r = Jet::constant(chart, order, 1);
            for (long i = 0; i < k; ++i) r *= b;
            return r;
        }
        return b;
    }

    Jet term() {
        Jet r = factor();
        for (;;) {
            skip_ws();
            if (accept('*')) {
                r *= factor();
            } else if (std::isalpha(peek()) || peek() == '(') {
                r *= factor();  // implicit product, e.g. 2x or q1(1+y)
            } else {
                return r;
            }
        }
    }

    Jet expression() {
        Jet r = Jet::zero(chart, order);
        bool neg = false;
        skip_ws();
        if (accept('-')) neg = true;
        else accept('+');
        for (;;) {
            Jet t = term();
            r += neg ? -t : t;
            skip_ws();
            if (accept('-')) neg = true;
            else if (accept('+')) neg = false;
            else return r;
        }
    }
};

}  // namespace

Jet parse_polynomial(const std::string& text, Chart chart, int order) {
    // parse at a generous working order so that over-order terms are caught
    // rather than silently truncated
    Parser p{text, chart, 200};
    p.skip_ws();
    if (p.pos == text.size()) p.fail("empty input");
    Jet r = p.expression();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    for (auto& [m, c] : r.coeffs())
        if (m.deg() > order)
            throw parse_error("term of degree " + std::to_string(m.deg()) +
                                  " exceeds the requested jet order " + std::to_string(order),
                              1, 1);
    return r.truncated(order);
}

}  // namespace hamsec
