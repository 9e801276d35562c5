#pragma once

// Cyclic modules over Z_p[[X]][[T]], twists by wild characters, and the
// level-p^n invariants of their fibers at height-one primes.
//
// A wild character is determined by lambda: it scales the group-like element
// 1+T by the one-unit 1 + p*lambda, i.e. substitutes T |-> (1+p*l)T + p*l in
// every relation.  Specializing at Q = (g) rewrites each relation as a
// T-polynomial with coefficients in O = Z_p[X]/(g).  At level n we measure
//   h0 = the omega_n-coinvariants of the fiber (omega_n = (1+T)^{p^n} - 1),
//   h1 = the kernel of multiplication by omega_n,
// and the Euler exponent v(h0) - v(h1) when both are finite.
//
// Fast paths (no relation: free fiber; one relation constant in T; one
// relation with a unit T-coefficient, via Weierstrass preparation over O)
// settle the common cases exactly; everything else is delegated to the
// brute-force oracle, which is also the independent cross-check for every
// fast-path answer.

#include <future>
#include <optional>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "primes.hpp"

namespace iwa {

class wild_character {
   public:
    wild_character(const padic_context& ctx, mpz_class lambda)
        : ctx_(&ctx), lambda_(std::move(lambda)) {}

    const padic_context& context() const { return *ctx_; }
    const mpz_class& lambda() const { return lambda_; }
    padic_int scale() const { return padic_int(*ctx_, 1 + ctx_->p() * lambda_); }
    padic_int shift() const { return padic_int(*ctx_, ctx_->p() * lambda_); }
    bool is_trivial() const { return shift().is_zero(); }

    // character of the product twist: 1 + p*l12 = (1 + p*l1)(1 + p*l2)
    wild_character compose(const wild_character& o) const {
        check_same_context(*ctx_, *o.ctx_);
        return wild_character(*ctx_, lambda_ + o.lambda_ + ctx_->p() * lambda_ * o.lambda_);
    }

   private:
    const padic_context* ctx_;
    mpz_class lambda_;
};

class cyclic_presentation {
   public:
    cyclic_presentation(const padic_context& ctx, std::vector<bivar> relations)
        : ctx_(&ctx), rels_(std::move(relations)) {
        for (const bivar& r : rels_) {
            check_same_context(ctx, r.context());
            if (r.is_zero()) throw std::invalid_argument("zero relation in presentation");
        }
    }

    const padic_context& context() const { return *ctx_; }
    const std::vector<bivar>& relations() const { return rels_; }
    const std::vector<mpz_class>& twist_log() const { return twist_log_; }

    cyclic_presentation twist(const wild_character& th) const {
        check_same_context(*ctx_, th.context());
        std::vector<bivar> out;
        out.reserve(rels_.size());
        for (const bivar& r : rels_) out.push_back(r.twist_t(th.scale(), th.shift()));
        cyclic_presentation m(*ctx_, std::move(out));
        m.twist_log_ = twist_log_;
        m.twist_log_.push_back(th.lambda());
        return m;
    }

   private:
    const padic_context* ctx_;
    std::vector<bivar> rels_;
    std::vector<mpz_class> twist_log_;
};

inline bivar omega_level(const padic_context& ctx, int n) {
    if (n < 0) throw std::invalid_argument("level exponent must be >= 0");
    long pn = detail::checked_p_power(ctx.p(), n);
    poly w = detail::binomial_power_minus(ctx, pn, 1);  // (1+Y)^{p^n} - 1
    return bivar::from_t_poly(w);
}

struct specialized_module {
    const padic_context* ctx;
    distinguished_poly g;                  // generator of the specializing prime
    std::vector<std::vector<poly>> trels;  // relations as T-polynomials over O = Z_p[X]/(g)
    std::vector<bivar> source;             // g plus the original relations, for the oracle
};

inline specialized_module specialize(const cyclic_presentation& m, const height_one_prime& q) {
    check_same_context(m.context(), q.context());
    if (q.is_p())
        throw std::invalid_argument("specialization at the prime (p) is not supported");
    const padic_context& ctx = m.context();
    const poly& g = q.gen().get();
    specialized_module sm{&ctx, q.gen(), {}, {}};
    sm.source.push_back(bivar::from_x_poly(g));
    for (const bivar& r : m.relations()) {
        sm.source.push_back(r);
        std::vector<poly> cs;
        for (int j = 0; j <= r.deg_t(); ++j) cs.push_back(oq_reduce(ctx, r.t_coeff(j), g));
        while (!cs.empty() && cs.back().is_zero()) cs.pop_back();
        if (!cs.empty()) sm.trels.push_back(std::move(cs));
    }
    return sm;
}

struct level_result {
    cardinality card;
    std::string method;  // "free", "constant", "prepared", or "oracle"
    std::vector<std::string> trace;
};

namespace detail {

// multiplication-by-c matrix on O = Z_p[X]/(g) in the power basis
inline zmat oq_mult_matrix(const padic_context& ctx, const poly& g, const poly& c) {
    int d = g.degree();
    zmat m(d, d);
    poly col = oq_reduce(ctx, c, g);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) m.at(i, j) = col.coeff(i).residue();
        if (j + 1 < d) col = oq_reduce(ctx, col.shifted(1), g);
    }
    return m;
}

struct prepared_fiber {
    oq_ring ring;
    rpoly<oq_ring> h0;   // T-monic distinguished part of the single relation
    rpoly<oq_ring> rem;  // omega_n mod h0
    bool omega_divisible;
};

// Weierstrass data for a single-relation fiber whose relation has a unit
// T-coefficient; nullopt when no coefficient is a unit of O.
inline std::optional<prepared_fiber> prepare_fiber(const padic_context& ctx, const poly& g,
                                                   const std::vector<poly>& trel, int n) {
    oq_ring ring{&ctx, &g};
    auto prep = prepare_unit_times_monic(ring, trel);
    if (!prep) return std::nullopt;
    prepared_fiber out{ring, std::move(prep->dist), {}, false};
    bivar w = omega_level(ctx, n);
    rpoly<oq_ring> omega;
    for (int j = 0; j <= w.deg_t(); ++j) omega.push_back(poly::constant(w.coeff(0, j)));
    rp_normalize(ring, omega);
    auto [q, r] = monic_divide(ring, omega, out.h0);
    (void)q;
    out.rem = std::move(r);
    out.omega_divisible = rp_is_zero(out.rem);
    return out;
}

// multiplication by rem(omega_n) on the free O-module O[T]/(h0), expanded to Z_p
inline zmat omega_action_matrix(const prepared_fiber& pf, const poly& g) {
    const padic_context& ctx = *pf.ring.ctx;
    int d = g.degree();
    int dt = rp_degree(pf.h0);
    zmat m(d * dt, d * dt);
    for (int j = 0; j < dt; ++j)
        for (int i = 0; i < d; ++i) {
            // column for basis element x^i T^j
            rpoly<oq_ring> b(static_cast<size_t>(j) + 1, pf.ring.zero());
            b[static_cast<size_t>(j)] = poly::monomial(padic_int::one(ctx), i);
            rpoly<oq_ring> prod = rp_mul(pf.ring, pf.rem, b);
            auto [q, r] = monic_divide(pf.ring, prod, pf.h0);
            (void)q;
            for (int j2 = 0; j2 < static_cast<int>(r.size()); ++j2) {
                const poly& c = r[static_cast<size_t>(j2)];
                for (int i2 = 0; i2 <= c.degree(); ++i2)
                    m.at(i2 + d * j2, i + d * j) = c.coeff(i2).residue();
            }
        }
    return m;
}

}  // namespace detail

// h0: the omega_n-coinvariants of the fiber at Q
inline level_result h0_level(const specialized_module& sm, int n,
                             const oracle_box& box) {
    const padic_context& ctx = *sm.ctx;
    long pn = detail::checked_p_power(ctx.p(), n);
    if (sm.trels.empty())
        return {cardinality::infinite("free fiber: coinvariants have O-rank p^n"), "free", {}};

    if (sm.trels.size() == 1) {
        const std::vector<poly>& h = sm.trels[0];
        if (h.size() == 1) {
            // constant relation c: fiber is (O/c)[[T]], coinvariants (O/c)^{p^n}
            level_result out{cardinality::undetermined(""), "constant", {}};
            zmat m = detail::oq_mult_matrix(ctx, sm.g.get(), h[0]);
            int a1 = detail::clamp_box(ctx, box);
            cardinality base = detail::stabilized_cardinality(m, ctx, a1, out.trace);
            if (base.is_finite())
                out.card = cardinality::certified_finite(pn * base.exponent, ctx);
            else
                out.card = base;
            return out;
        }
        auto pf = detail::prepare_fiber(ctx, sm.g.get(), h, n);
        if (pf) {
            if (rp_degree(pf->h0) == 0)
                return {cardinality::finite(0), "prepared", {"relation is a unit"}};
            if (pf->omega_divisible)
                return {cardinality::infinite("omega_n is divisible by the relation's "
                                              "distinguished part at full precision"),
                        "prepared",
                        {}};
            level_result out{cardinality::undetermined(""), "prepared", {}};
            zmat m = detail::omega_action_matrix(*pf, sm.g.get());
            int a1 = detail::clamp_box(ctx, box);
            out.card = detail::stabilized_cardinality(m, ctx, a1, out.trace);
            return out;
        }
    }

    std::vector<bivar> gens = sm.source;
    gens.push_back(omega_level(ctx, n));
    oracle_report rep = brute_cardinality(ctx, gens, box);
    return {rep.card, "oracle", rep.trace};
}

// h1: the kernel of multiplication by omega_n on the fiber at Q
inline level_result h1_level(const specialized_module& sm, int n,
                             const oracle_box& box) {
    const padic_context& ctx = *sm.ctx;
    detail::checked_p_power(ctx.p(), n);
    if (sm.trels.empty())
        return {cardinality::finite(0),
                "free",
                {"omega_n is monic, hence injective on a torsion-free fiber"}};

    if (sm.trels.size() == 1) {
        const std::vector<poly>& h = sm.trels[0];
        if (h.size() == 1)
            // division with remainder by the distinguished omega_n is unique over
            // any fiber that is finitely generated over Z_p, so multiplication by
            // omega_n is injective on (O/c)[[T]]
            return {cardinality::finite(0), "constant", {}};
        auto pf = detail::prepare_fiber(ctx, sm.g.get(), h, n);
        if (pf) {
            if (rp_degree(pf->h0) == 0)
                return {cardinality::finite(0), "prepared", {"relation is a unit"}};
            if (pf->omega_divisible)
                return {cardinality::infinite(
                            "omega_n annihilates the free fiber O[T]/(h0)"),
                        "prepared",
                        {}};
            level_result out{cardinality::undetermined(""), "prepared", {}};
            zmat m = detail::omega_action_matrix(*pf, sm.g.get());
            int a1 = detail::clamp_box(ctx, box);
            detail::smith_run r1 = detail::run_smith(m, ctx.p(), a1, false);
            detail::smith_run r2 = detail::run_smith(m, ctx.p(), a1 + 2, false);
            for (const auto* r : {&r1, &r2})
                out.trace.push_back((r->saturated ? std::string("saturated")
                                                  : "det v=" + std::to_string(r->expsum)) +
                                    " @ a=" + std::to_string(r == &r1 ? a1 : a1 + 2));
            if (!r1.saturated && !r2.saturated)
                out.card = cardinality::finite(0);  // nonzero determinant on a free module
            else if (r1.saturated && r2.saturated)
                out.card = cardinality::infinite(
                    "primitive kernel vector of the omega_n action at working precision");
            else
                out.card = cardinality::undetermined("kernel did not stabilize");
            return out;
        }
    }

    oracle_report rep = brute_kernel_cardinality(ctx, sm.source, omega_level(ctx, n), box);
    return {rep.card, "oracle", rep.trace};
}

struct euler_result {
    cardinality h0;
    cardinality h1;
    bool chi_defined = false;
    long chi_exponent = 0;  // v(h0) - v(h1) when defined
    std::string h0_method, h1_method;
};

inline euler_result euler_characteristic(const cyclic_presentation& m, const wild_character& th,
                                         const height_one_prime& q, int n, const oracle_box& box) {
    cyclic_presentation tw = m.twist(th);
    specialized_module sm = specialize(tw, q);
    level_result r0 = h0_level(sm, n, box);
    level_result r1 = h1_level(sm, n, box);
    euler_result out;
    out.h0 = r0.card;
    out.h1 = r1.card;
    out.h0_method = r0.method;
    out.h1_method = r1.method;
    out.chi_defined = r0.card.is_finite() && r1.card.is_finite();
    if (out.chi_defined) out.chi_exponent = r0.card.exponent - r1.card.exponent;
    return out;
}

struct alt_term {
    poly element;
    int sign;  // +1 for even positions, -1 for odd
    cardinality card;
};

struct alt_product_result {
    bool defined = false;
    long exponent = 0;  // signed sum of the term exponents
    std::vector<alt_term> terms;
    int failed_index = -1;
};

// alternating product of |O_Q/(e_i)| over a list of elements
inline alt_product_result alternating_product(const std::vector<poly>& elements,
                                              const height_one_prime& q) {
    if (q.is_p())
        throw std::invalid_argument("alternating product at the prime (p) is not supported");
    alt_product_result out;
    long total = 0;
    for (size_t i = 0; i < elements.size(); ++i) {
        int sign = i % 2 == 0 ? 1 : -1;
        cardinality c = quotient_cardinality(q.gen(), elements[i]);
        if (!c.is_finite() && out.failed_index < 0) out.failed_index = static_cast<int>(i);
        if (c.is_finite()) total += sign * c.exponent;
        out.terms.push_back({elements[i], sign, std::move(c)});
    }
    out.defined = out.failed_index < 0;
    out.exponent = out.defined ? total : 0;
    return out;
}

struct scan_grid {
    std::vector<mpz_class> lambdas;
    std::vector<height_one_prime> primes;
    int level = 0;
    std::vector<std::vector<cardinality>> cells;  // cells[i][j]: lambda i, prime j
};

inline scan_grid twist_scan(const cyclic_presentation& m, const std::vector<mpz_class>& lambdas,
                            const std::vector<height_one_prime>& primes, int level,
                            const oracle_box& box, bool parallel = true) {
    const padic_context& ctx = m.context();
    scan_grid grid{lambdas, primes, level, {}};
    grid.cells.resize(lambdas.size());
    auto scan_row = [&](size_t i) {
        std::vector<cardinality> row;
        row.reserve(primes.size());
        cyclic_presentation tw = m.twist(wild_character(ctx, lambdas[i]));
        for (const height_one_prime& q : primes) {
            specialized_module sm = specialize(tw, q);
            row.push_back(h0_level(sm, level, box).card);
        }
        return row;
    };
    if (parallel && lambdas.size() > 1) {
        std::vector<std::future<std::vector<cardinality>>> futs;
        futs.reserve(lambdas.size());
        for (size_t i = 0; i < lambdas.size(); ++i)
            futs.push_back(std::async(std::launch::async, scan_row, i));
        for (size_t i = 0; i < lambdas.size(); ++i) grid.cells[i] = futs[i].get();
    } else {
        for (size_t i = 0; i < lambdas.size(); ++i) grid.cells[i] = scan_row(i);
    }
    return grid;
}

}  // namespace iwa
