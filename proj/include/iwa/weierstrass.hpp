#pragma once

// Weierstrass division and preparation.  Division by a monic polynomial is
// plain long division and is exact over any coefficient ring.  Preparation
// f = unit * distinguished is computed by a fixed point on the division
// algorithm: starting from g = Y^d (d = lowest index with a unit
// coefficient), divide f by g, push the remainder back into g through the
// mod-p inverse of the unit cofactor, and repeat until the remainder
// vanishes.  Each pass contracts the error by the maximal ideal, so the
// iteration cap is (local depth) * precision; on success the final division
// identity f = q * g certifies the answer independently of the route taken.
//
// The machinery is generic over a local coefficient ring with residue field
// F_p: Z_p itself, and O = Z_p[X]/(g) for distinguished g (residue field via
// the constant coefficient).

#include <optional>
#include <utility>
#include <vector>

#include "poly.hpp"

namespace iwa {

struct zp_ring {
    using value = padic_int;
    const padic_context* ctx;

    value zero() const { return padic_int::zero(*ctx); }
    value one() const { return padic_int::one(*ctx); }
    value add(const value& a, const value& b) const { return a + b; }
    value sub(const value& a, const value& b) const { return a - b; }
    value mul(const value& a, const value& b) const { return a * b; }
    value neg(const value& a) const { return -a; }
    bool is_zero(const value& a) const { return a.is_zero(); }
    bool is_unit(const value& a) const { return a.is_unit(); }
    long residue_fp(const value& a) const {
        return mpz_fdiv_ui(a.residue().get_mpz_t(), static_cast<unsigned long>(ctx->p()));
    }
    value lift_fp(long r) const { return padic_int(*ctx, r); }
    // nilpotency depth of the maximal ideal relative to (p): controls the
    // iteration budget of the preparation fixed point
    int depth() const { return 1; }
};

// O = Z_p[X]/(g) for monic distinguished g; elements are polys of degree < deg g.
struct oq_ring {
    using value = poly;
    const padic_context* ctx;
    const poly* g;  // monic distinguished, degree >= 1

    value zero() const { return poly(*ctx); }
    value one() const { return poly::constant(padic_int::one(*ctx)); }
    value add(const value& a, const value& b) const { return a + b; }
    value sub(const value& a, const value& b) const { return a - b; }
    value neg(const value& a) const { return -a; }
    value mul(const value& a, const value& b) const;  // defined after monic_divide
    bool is_zero(const value& a) const { return a.is_zero(); }
    // unit iff nonzero image in the residue field O/(p, X) = F_p
    bool is_unit(const value& a) const { return a.constant_term().is_unit(); }
    long residue_fp(const value& a) const {
        return mpz_fdiv_ui(a.constant_term().residue().get_mpz_t(),
                           static_cast<unsigned long>(ctx->p()));
    }
    value lift_fp(long r) const { return poly::constant(padic_int(*ctx, r)); }
    int depth() const { return g->degree(); }
};

template <class R>
using rpoly = std::vector<typename R::value>;  // ascending coefficients

template <class R>
void rp_normalize(const R& ring, rpoly<R>& f) {
    while (!f.empty() && ring.is_zero(f.back())) f.pop_back();
}

template <class V>
int rp_degree(const std::vector<V>& f) {
    return static_cast<int>(f.size()) - 1;
}

template <class V>
bool rp_is_zero(const std::vector<V>& f) {
    return f.empty();
}

template <class R>
rpoly<R> rp_mul(const R& ring, const rpoly<R>& a, const rpoly<R>& b) {
    if (a.empty() || b.empty()) return {};
    rpoly<R> r(a.size() + b.size() - 1, ring.zero());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = ring.add(r[i + j], ring.mul(a[i], b[j]));
    rp_normalize(ring, r);
    return r;
}

template <class R>
rpoly<R> rp_sub(const R& ring, const rpoly<R>& a, const rpoly<R>& b) {
    rpoly<R> r(std::max(a.size(), b.size()), ring.zero());
    for (size_t i = 0; i < r.size(); ++i) {
        typename R::value av = i < a.size() ? a[i] : ring.zero();
        typename R::value bv = i < b.size() ? b[i] : ring.zero();
        r[i] = ring.sub(av, bv);
    }
    rp_normalize(ring, r);
    return r;
}

// long division by a monic divisor: f = q * g + r, deg r < deg g; exact
template <class R>
std::pair<rpoly<R>, rpoly<R>> monic_divide(const R& ring, rpoly<R> f, const rpoly<R>& g) {
    int dg = rp_degree(g);
    if (dg < 0) throw std::invalid_argument("division by zero polynomial");
    rp_normalize(ring, f);
    if (rp_degree(f) < dg) return {{}, std::move(f)};
    rpoly<R> q(static_cast<size_t>(rp_degree(f) - dg + 1), ring.zero());
    for (int k = rp_degree(f); k >= dg; --k) {
        typename R::value c = f[static_cast<size_t>(k)];
        if (ring.is_zero(c)) continue;
        q[static_cast<size_t>(k - dg)] = c;
        for (int i = 0; i <= dg; ++i) {
            size_t pos = static_cast<size_t>(k - dg + i);
            f[pos] = ring.sub(f[pos], ring.mul(c, g[static_cast<size_t>(i)]));
        }
    }
    f.erase(f.begin() + dg, f.end());
    rp_normalize(ring, f);
    rp_normalize(ring, q);
    return {std::move(q), std::move(f)};
}

inline poly oq_reduce(const padic_context& ctx, const poly& a, const poly& g) {
    zp_ring zr{&ctx};
    rpoly<zp_ring> fa = a.coeffs();
    rpoly<zp_ring> fg = g.coeffs();
    auto [q, r] = monic_divide(zr, std::move(fa), fg);
    (void)q;
    return poly(ctx, std::move(r));
}

inline oq_ring::value oq_ring::mul(const value& a, const value& b) const {
    return oq_reduce(*ctx, a * b, *g);
}

template <class R>
struct prepared {
    rpoly<R> unit;  // unit cofactor (unit constant coefficient)
    rpoly<R> dist;  // monic, lower coefficients in the maximal ideal
};

// F_p[[Y]] inverse of the unit series (residues of f's coefficients from
// index d upward), truncated below Y^d
inline std::vector<long> fp_series_inverse(const std::vector<long>& u, long p, int d) {
    std::vector<long> t(static_cast<size_t>(d), 0);
    long u0 = ((u[0] % p) + p) % p;
    long inv0 = 1;
    {
        // Fermat inverse
        long e = p - 2, b = u0, acc = 1;
        while (e) {
            if (e & 1) acc = (acc * b) % p;
            b = (b * b) % p;
            e >>= 1;
        }
        inv0 = acc;
    }
    t[0] = inv0;
    for (int k = 1; k < d; ++k) {
        long s = 0;
        for (int i = 1; i <= k; ++i) {
            long ui = i < static_cast<int>(u.size()) ? u[static_cast<size_t>(i)] : 0;
            s = (s + ui * t[static_cast<size_t>(k - i)]) % p;
        }
        t[static_cast<size_t>(k)] = ((-inv0 * s) % p + p) % p;
    }
    return t;
}

// f = unit * dist with dist monic of degree d = lowest unit-coefficient index.
// Returns nullopt when no coefficient is a unit (nothing to prepare); throws
// precision_exhausted when the fixed point fails to stabilize in budget.
template <class R>
std::optional<prepared<R>> prepare_unit_times_monic(const R& ring, const rpoly<R>& f) {
    int d = -1;
    for (size_t i = 0; i < f.size(); ++i)
        if (ring.is_unit(f[i])) {
            d = static_cast<int>(i);
            break;
        }
    if (d < 0) return std::nullopt;
    if (d == 0) {
        prepared<R> out;
        out.unit = f;
        rp_normalize(ring, out.unit);
        out.dist = {ring.one()};
        return out;
    }

    long p = ring.ctx->p();
    std::vector<long> ubar;
    ubar.reserve(f.size() - static_cast<size_t>(d));
    for (size_t i = static_cast<size_t>(d); i < f.size(); ++i) ubar.push_back(ring.residue_fp(f[i]));
    std::vector<long> tbar = fp_series_inverse(ubar, p, d);
    rpoly<R> tlift;
    tlift.reserve(tbar.size());
    for (long c : tbar) tlift.push_back(ring.lift_fp(c));
    rp_normalize(ring, tlift);

    rpoly<R> g(static_cast<size_t>(d + 1), ring.zero());
    g[static_cast<size_t>(d)] = ring.one();

    int cap = ring.depth() * ring.ctx->precision() + 8;
    for (int iter = 0; iter < cap; ++iter) {
        auto [q, r] = monic_divide(ring, f, g);
        if (rp_is_zero(r)) {
            if (q.empty() || !ring.is_unit(q[0]))
                throw precision_exhausted("preparation converged to a non-unit cofactor");
            prepared<R> out;
            out.unit = std::move(q);
            out.dist = std::move(g);
            return out;
        }
        // g += (tbar * r) truncated below Y^d
        rpoly<R> delta = rp_mul(ring, tlift, r);
        if (rp_degree(delta) >= d) delta.erase(delta.begin() + d, delta.end());
        for (size_t i = 0; i < delta.size(); ++i) g[i] = ring.add(g[i], delta[i]);
    }
    throw precision_exhausted("Weierstrass preparation did not stabilize within the iteration cap");
}

// mu = p-power part, unit * dist = f / p^mu
struct weierstrass_form {
    int mu;
    poly unit;
    distinguished_poly dist;
};

inline std::pair<poly, poly> weierstrass_divide(const poly& f, const distinguished_poly& g) {
    check_same_context(f.context(), g.context());
    zp_ring ring{&f.context()};
    auto [q, r] = monic_divide(ring, f.coeffs(), g.get().coeffs());
    return {poly(f.context(), std::move(q)), poly(f.context(), std::move(r))};
}

inline weierstrass_form weierstrass_prepare(const poly& f) {
    const padic_context& ctx = f.context();
    valuation mv = f.min_valuation();
    if (!mv.exact || mv.v >= ctx.certified())
        throw precision_exhausted("polynomial vanishes at working precision; preparation impossible");
    int mu = mv.v;
    poly f1 = f.shift_down(mu);

    zp_ring ring{&ctx};
    auto prep = prepare_unit_times_monic(ring, f1.coeffs());
    if (!prep)
        throw precision_exhausted("no unit coefficient after removing the p-power part");
    return weierstrass_form{mu, poly(ctx, std::move(prep->unit)),
                            distinguished_poly(poly(ctx, std::move(prep->dist)))};
}

}  // namespace iwa
