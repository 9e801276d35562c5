#pragma once

// Text form of polynomials: terms like "c*X^i" (or "c*X^i*T^j" for the
// bivariate layer) joined by + and -.  Parsing is whitespace-tolerant and
// accepts exponent-free and coefficient-free abbreviations (X, 2*X, X^3, T).
// Printing uses balanced residue representatives so small negative
// coefficients render as "-3" rather than a huge positive lift, with terms
// in descending degree.

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

#include "bivar.hpp"

namespace iwa {

namespace detail {

struct term_scanner {
    const std::string& s;
    size_t i = 0;

    explicit term_scanner(const std::string& text) : s(text) {}

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool done() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }

    mpz_class read_integer() {
        skip_ws();
        size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == start) throw parse_error("expected integer at position " + std::to_string(start));
        return mpz_class(s.substr(start, i - start), 10);
    }

    int read_exponent() {
        skip_ws();
        if (i < s.size() && s[i] == '^') {
            ++i;
            mpz_class e = read_integer();
            if (e < 0 || e > 4096) throw parse_error("exponent out of range");
            return static_cast<int>(e.get_si());
        }
        return 1;
    }
};

// one term: optional integer, then zero or more variable factors; '*' between
// factors is optional.  Returns (coefficient, x-degree, t-degree).
struct parsed_term {
    mpz_class c;
    int xdeg;
    int tdeg;
};

inline parsed_term scan_term(term_scanner& sc, bool allow_t) {
    parsed_term t{1, 0, 0};
    bool saw_factor = false;
    for (;;) {
        char ch = sc.peek();
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            t.c *= sc.read_integer();
            saw_factor = true;
        } else if (ch == 'X' || ch == 'x') {
            ++sc.i;
            t.xdeg += sc.read_exponent();
            saw_factor = true;
        } else if (ch == 'T' || ch == 't') {
            if (!allow_t) throw parse_error("variable T not allowed here");
            ++sc.i;
            t.tdeg += sc.read_exponent();
            saw_factor = true;
        } else if (ch == '*') {
            ++sc.i;
            continue;
        } else {
            break;
        }
    }
    if (!saw_factor) throw parse_error("expected a term at position " + std::to_string(sc.i));
    return t;
}

}  // namespace detail

inline bivar parse_bivar(const padic_context& ctx, const std::string& text) {
    detail::term_scanner sc(text);
    bivar out(ctx);
    bool first = true;
    while (!sc.done()) {
        int sign = 1;
        char ch = sc.peek();
        if (ch == '+' || ch == '-') {
            sign = ch == '-' ? -1 : 1;
            ++sc.i;
        } else if (!first) {
            throw parse_error("expected + or - between terms at position " + std::to_string(sc.i));
        }
        detail::parsed_term t = detail::scan_term(sc, true);
        out.add_term(t.xdeg, t.tdeg, padic_int(ctx, sign < 0 ? mpz_class(-t.c) : t.c));
        first = false;
    }
    if (first) throw parse_error("empty polynomial text");
    return out;
}

inline poly parse_poly(const padic_context& ctx, const std::string& text) {
    detail::term_scanner sc(text);
    std::vector<std::pair<int, mpz_class>> terms;
    bool first = true;
    while (!sc.done()) {
        int sign = 1;
        char ch = sc.peek();
        if (ch == '+' || ch == '-') {
            sign = ch == '-' ? -1 : 1;
            ++sc.i;
        } else if (!first) {
            throw parse_error("expected + or - between terms at position " + std::to_string(sc.i));
        }
        detail::parsed_term t = detail::scan_term(sc, false);
        terms.emplace_back(t.xdeg, sign < 0 ? mpz_class(-t.c) : t.c);
        first = false;
    }
    if (first) throw parse_error("empty polynomial text");
    int deg = 0;
    for (const auto& [d, c] : terms) deg = std::max(deg, d);
    std::vector<mpz_class> cs(static_cast<size_t>(deg) + 1, 0);
    for (const auto& [d, c] : terms) cs[static_cast<size_t>(d)] += c;
    return poly(ctx, cs);
}

// comma- or semicolon-separated list of univariate polynomials
inline std::vector<poly> parse_poly_list(const padic_context& ctx, const std::string& text) {
    std::vector<poly> out;
    size_t start = 0;
    for (size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == ',' || text[i] == ';') {
            std::string piece = text.substr(start, i - start);
            bool blank = true;
            for (char c : piece)
                if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
            if (!blank) out.push_back(parse_poly(ctx, piece));
            start = i + 1;
        }
    }
    return out;
}

namespace detail {

inline void append_monomial(std::string& out, bool first, const mpz_class& balanced, int xdeg,
                            int tdeg) {
    mpz_class mag = balanced < 0 ? mpz_class(-balanced) : balanced;
    if (first) {
        if (balanced < 0) out += "-";
    } else {
        out += balanced < 0 ? "-" : "+";
    }
    bool has_var = xdeg > 0 || tdeg > 0;
    if (!has_var || mag != 1) {
        out += mag.get_str();
        if (has_var) out += "*";
    }
    if (xdeg > 0) {
        out += "X";
        if (xdeg > 1) out += "^" + std::to_string(xdeg);
        if (tdeg > 0) out += "*";
    }
    if (tdeg > 0) {
        out += "T";
        if (tdeg > 1) out += "^" + std::to_string(tdeg);
    }
}

}  // namespace detail

inline std::string to_text(const poly& f) {
    if (f.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (int d = f.degree(); d >= 0; --d) {
        padic_int c = f.coeff(d);
        if (c.is_zero()) continue;
        detail::append_monomial(out, first, c.balanced(), d, 0);
        first = false;
    }
    return out;
}

inline std::string to_text(const bivar& b) {
    if (b.is_zero()) return "0";
    // descending T degree, then descending X degree
    std::vector<std::pair<bivar::key, mpz_class>> terms;
    for (const auto& [k, c] : b.terms()) terms.emplace_back(k, c.balanced());
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b2) {
        if (a.first.second != b2.first.second) return a.first.second > b2.first.second;
        return a.first.first > b2.first.first;
    });
    std::string out;
    bool first = true;
    for (const auto& [k, c] : terms) {
        detail::append_monomial(out, first, c, k.first, k.second);
        first = false;
    }
    return out;
}

}  // namespace iwa
