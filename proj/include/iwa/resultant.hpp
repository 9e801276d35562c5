#pragma once

// Resultants via the Sylvester matrix, evaluated by fraction-free Bareiss
// elimination on the canonical integer lifts and reduced mod p^N at the end,
// so the answer is exact at working precision.  quotient_cardinality counts
// |Z_p[X] / (f, g)| for distinguished f by Smith-reducing multiplication by
// (g mod f) on the free module Z_p[X]/(f).

#include <string>
#include <vector>

#include "smith.hpp"
#include "weierstrass.hpp"

namespace iwa {

// exact integer determinant (Bareiss); n = 0 gives 1
inline mpz_class bareiss_det(std::vector<mpz_class> m, int n) {
    if (n == 0) return 1;
    auto at = [&](int r, int c) -> mpz_class& { return m[static_cast<size_t>(r) * n + c]; };
    int sign = 1;
    mpz_class prev = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (at(k, k) == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (at(i, k) != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) return 0;
            for (int j = k; j < n; ++j) std::swap(at(k, j), at(piv, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                mpz_class t = at(k, k) * at(i, j) - at(i, k) * at(k, j);
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                at(i, j) = t;
            }
            at(i, k) = 0;
        }
        prev = at(k, k);
    }
    return sign > 0 ? at(n - 1, n - 1) : mpz_class(-at(n - 1, n - 1));
}

inline padic_int resultant(const poly& f, const poly& g) {
    check_same_context(f.context(), g.context());
    const padic_context& ctx = f.context();
    int m = f.degree(), n = g.degree();
    if (m < 0 || n < 0) return padic_int::zero(ctx);
    if (m == 0 && n == 0) return padic_int::one(ctx);
    if (m == 0) return f.coeff(0).pow(static_cast<unsigned long>(n));
    if (n == 0) return g.coeff(0).pow(static_cast<unsigned long>(m));
    int size = m + n;
    std::vector<mpz_class> s(static_cast<size_t>(size) * size, 0);
    auto put = [&](int r, int c, const mpz_class& v) { s[static_cast<size_t>(r) * size + c] = v; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) put(i, i + j, f.coeff(m - j).residue());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) put(n + i, i + j, g.coeff(n - j).residue());
    return padic_int(ctx, bareiss_det(std::move(s), size));
}

// |Z_p[X] / (f, g)| for distinguished f of degree d >= 1: Smith form of the
// d x d matrix of multiplication by (g mod f) on the standard basis of
// Z_p[X]/(f).  Divisibility of g by f at working precision means the
// quotient has a free summand, hence is infinite.
inline cardinality quotient_cardinality(const distinguished_poly& f, const poly& g) {
    check_same_context(f.context(), g.context());
    const padic_context& ctx = f.context();
    int d = f.degree();
    if (d < 1) throw std::invalid_argument("quotient_cardinality needs degree >= 1");
    auto [q, r] = weierstrass_divide(g, f);
    (void)q;
    bool r_vanishes = true;
    for (int i = 0; i < d; ++i) {
        valuation v = r.coeff(i).val();
        if (v.exact && v.v < ctx.certified()) {
            r_vanishes = false;
            break;
        }
    }
    if (r_vanishes)
        return cardinality::infinite("second generator divisible by the first at working precision");

    zmat a(d, d);
    poly col = r;
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) a.at(i, j) = col.coeff(i).residue();
        if (j + 1 < d) {
            auto [q2, r2] = weierstrass_divide(col.shifted(1), f);
            (void)q2;
            col = r2;
        }
    }
    smith_form sf = smith_over_zpa(a, ctx.p(), ctx.precision(), false);
    long total = 0;
    for (int i = 0; i < d; ++i) {
        long di = sf.row_divisor(i);
        if (di >= ctx.certified())
            return cardinality::undetermined("elementary divisor at precision boundary");
        total += di;
    }
    return cardinality::certified_finite(total, ctx);
}

}  // namespace iwa
