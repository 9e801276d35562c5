#pragma once

// Height-one primes of Z_p[[X]]: the prime (p) and primes generated by
// irreducible distinguished polynomials, each carrying a machine-checkable
// irreducibility certificate.  Families of interest:
//   * arithmetic primes: X - ((1+p)^k - 1) and their wild-level relatives
//     obtained as telescoping quotients of (1+X)^{p^r} - (1+p)^{k p^r};
//   * the Frobenius-style family F_j attached to c = 1 + p*l, whose product
//     over j <= n is (1+X)^{p^n} - c^{p^n}; F_0 = X - p*l, and F_j is
//     Eisenstein for j >= 1.
// factor_poly splits a polynomial at working precision: p-power part, then
// greedy root peeling (digit-by-digit search with a node budget), then
// structural certificates for what is left; anything it cannot certify is
// returned as an honest unfactored remainder.

#include <optional>
#include <string>
#include <vector>

#include "resultant.hpp"

namespace iwa {

enum class prime_certificate { degree1, eisenstein, quadratic, user_asserted };

inline std::string certificate_name(prime_certificate c) {
    switch (c) {
        case prime_certificate::degree1: return "degree1";
        case prime_certificate::eisenstein: return "eisenstein";
        case prime_certificate::quadratic: return "quadratic";
        case prime_certificate::user_asserted: return "user_asserted";
    }
    return "?";
}

inline std::optional<prime_certificate> certificate_from_name(const std::string& s) {
    if (s == "degree1") return prime_certificate::degree1;
    if (s == "eisenstein") return prime_certificate::eisenstein;
    if (s == "quadratic") return prime_certificate::quadratic;
    if (s == "user_asserted") return prime_certificate::user_asserted;
    return std::nullopt;
}

// Legendre symbol of a mod p (p an odd prime), via Euler's criterion
inline int legendre_symbol(long a, long p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return 0;
    long e = (p - 1) / 2, b = a, acc = 1;
    while (e) {
        if (e & 1) acc = (acc * b) % p;
        b = (b * b) % p;
        e >>= 1;
    }
    return acc == 1 ? 1 : -1;
}

// square root mod an odd prime (Tonelli-Shanks); requires legendre(a,p) == 1
inline long sqrt_mod_p(long a, long p) {
    a %= p;
    if (a < 0) a += p;
    auto powmod = [p](long b, long e) {
        long acc = 1;
        b %= p;
        while (e) {
            if (e & 1) acc = (acc * b) % p;
            b = (b * b) % p;
            e >>= 1;
        }
        return acc;
    };
    if (p % 4 == 3) return powmod(a, (p + 1) / 4);
    long q = p - 1, s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    long z = 2;
    while (legendre_symbol(z, p) != -1) ++z;
    long m = s, c = powmod(z, q), t = powmod(a, q), r = powmod(a, (q + 1) / 2);
    while (t != 1) {
        long i = 0, tt = t;
        while (tt != 1) {
            tt = (tt * tt) % p;
            ++i;
        }
        long b = c;
        for (long j = 0; j < m - i - 1; ++j) b = (b * b) % p;
        m = i;
        c = (b * b) % p;
        t = (t * c) % p;
        r = (r * b) % p;
    }
    return r;
}

// square root of a unit square in Z_p by Newton iteration from the mod-p root
inline padic_int hensel_sqrt(const padic_int& u) {
    const padic_context& ctx = u.context();
    if (!u.is_unit()) throw std::invalid_argument("hensel_sqrt needs a unit");
    long p = ctx.p();
    long r0 = mpz_fdiv_ui(u.residue().get_mpz_t(), static_cast<unsigned long>(p));
    if (legendre_symbol(r0, p) != 1) throw std::invalid_argument("not a square mod p");
    padic_int z(ctx, sqrt_mod_p(r0, p));
    padic_int inv2 = padic_int(ctx, 2).inv();
    for (int i = 0; i < 64; ++i) {
        if (z * z == u) return z;
        z = (z + u * z.inv()) * inv2;
    }
    throw precision_exhausted("square root iteration did not converge");
}

class height_one_prime {
   public:
    static height_one_prime p_prime(const padic_context& ctx) { return height_one_prime(ctx); }

    height_one_prime(distinguished_poly g, prime_certificate cert)
        : ctx_(&g.context()), gen_(std::move(g)), cert_(cert) {
        validate();
    }

    bool is_p() const { return !gen_.has_value(); }
    const distinguished_poly& gen() const {
        if (is_p()) throw std::logic_error("prime (p) has no polynomial generator");
        return *gen_;
    }
    prime_certificate cert() const {
        if (is_p()) throw std::logic_error("prime (p) carries no certificate");
        return cert_;
    }
    const padic_context& context() const { return *ctx_; }
    int degree() const { return is_p() ? 0 : gen_->degree(); }

    bool operator==(const height_one_prime& o) const {
        if (is_p() != o.is_p()) return false;
        if (is_p()) return ctx_->p() == o.ctx_->p();
        return gen_->get() == o.gen_->get();
    }

   private:
    explicit height_one_prime(const padic_context& ctx)
        : ctx_(&ctx), gen_(std::nullopt), cert_(prime_certificate::user_asserted) {}

    void validate() const {
        const poly& g = gen_->get();
        switch (cert_) {
            case prime_certificate::degree1:
                if (g.degree() != 1)
                    throw std::invalid_argument("degree1 certificate needs a linear generator");
                break;
            case prime_certificate::eisenstein:
                if (!is_eisenstein(g))
                    throw std::invalid_argument("generator is not Eisenstein");
                break;
            case prime_certificate::quadratic: {
                if (g.degree() != 2)
                    throw std::invalid_argument("quadratic certificate needs degree 2");
                padic_int disc = g.coeff(1) * g.coeff(1) - padic_int(*ctx_, 4) * g.coeff(0);
                valuation v = disc.val();
                if (!v.exact || v.v >= ctx_->certified())
                    throw std::invalid_argument(
                        "discriminant vanishes at working precision; cannot certify");
                if (v.v % 2 == 0) {
                    padic_int u = disc.shift_down(v.v);
                    long r = mpz_fdiv_ui(u.residue().get_mpz_t(),
                                         static_cast<unsigned long>(ctx_->p()));
                    if (legendre_symbol(r, ctx_->p()) != -1)
                        throw std::invalid_argument("discriminant is a square; generator splits");
                }
                break;
            }
            case prime_certificate::user_asserted:
                if (g.degree() < 1) throw std::invalid_argument("generator must be non-constant");
                break;
        }
    }

    const padic_context* ctx_;
    std::optional<distinguished_poly> gen_;
    prime_certificate cert_;
};

// best structural certificate for a distinguished polynomial, if any
inline std::optional<height_one_prime> certify_distinguished(const poly& g) {
    if (g.degree() < 1 || !is_distinguished(g)) return std::nullopt;
    if (g.degree() == 1) return height_one_prime(distinguished_poly(g), prime_certificate::degree1);
    if (is_eisenstein(g))
        return height_one_prime(distinguished_poly(g), prime_certificate::eisenstein);
    if (g.degree() == 2) {
        try {
            return height_one_prime(distinguished_poly(g), prime_certificate::quadratic);
        } catch (const std::invalid_argument&) {
        }
    }
    return std::nullopt;
}

namespace detail {

inline poly binomial_power_minus(const padic_context& ctx, long exp, const mpz_class& c) {
    // (1+X)^exp - c as a polynomial
    std::vector<mpz_class> cs(static_cast<size_t>(exp) + 1, 0);
    mpz_class b = 1;
    for (long i = 0; i <= exp; ++i) {
        cs[static_cast<size_t>(i)] = b;
        // next binomial coefficient C(exp, i+1)
        if (i < exp) {
            b *= (exp - i);
            mpz_divexact_ui(b.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(i + 1));
        }
    }
    cs[0] -= c;
    return poly(ctx, cs);
}

inline long checked_p_power(long p, int r) {
    long e = 1;
    for (int i = 0; i < r; ++i) {
        e *= p;
        if (e > 65536) throw std::invalid_argument("wild level p^r too large");
    }
    return e;
}

}  // namespace detail

// arithmetic prime of weight parameter k >= 1 at wild level r >= 0
inline height_one_prime arith_prime(const padic_context& ctx, long k, int r = 0) {
    if (k < 1) throw std::invalid_argument("arith_prime needs k >= 1");
    if (r < 0) throw std::invalid_argument("arith_prime needs r >= 0");
    mpz_class c;
    mpz_class base = ctx.p() + 1;
    mpz_pow_ui(c.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(k));
    if (r == 0) {
        std::vector<mpz_class> cs{mpz_class(1 - c), 1};
        return height_one_prime(distinguished_poly(poly(ctx, cs)), prime_certificate::degree1);
    }
    long pr = detail::checked_p_power(ctx.p(), r);
    long prm1 = pr / ctx.p();
    mpz_class chigh, clow;
    mpz_pow_ui(chigh.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(pr));
    mpz_pow_ui(clow.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(prm1));
    poly num = detail::binomial_power_minus(ctx, pr, chigh);
    poly den = detail::binomial_power_minus(ctx, prm1, clow);
    auto [q, rem] = weierstrass_divide(num, distinguished_poly(den));
    if (!rem.is_zero()) throw std::logic_error("telescoping quotient left a remainder");
    if (!is_eisenstein(q)) throw precision_exhausted("arithmetic prime failed the Eisenstein check");
    return height_one_prime(distinguished_poly(q), prime_certificate::eisenstein);
}

// F_j attached to c = 1 + p*l: F_0 = X - p*l, and for j >= 1 the quotient
// ((1+X)^{p^j} - c^{p^j}) / ((1+X)^{p^{j-1}} - c^{p^{j-1}})
inline height_one_prime frobenius_factor(const padic_context& ctx, const mpz_class& lambda,
                                         int j) {
    if (j < 0) throw std::invalid_argument("frobenius_factor needs j >= 0");
    mpz_class c = 1 + ctx.p() * lambda;
    if (j == 0) {
        std::vector<mpz_class> cs{mpz_class(1 - c), 1};
        return height_one_prime(distinguished_poly(poly(ctx, cs)), prime_certificate::degree1);
    }
    long pj = detail::checked_p_power(ctx.p(), j);
    long pjm1 = pj / ctx.p();
    mpz_class chigh, clow;
    mpz_pow_ui(chigh.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(pj));
    mpz_pow_ui(clow.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(pjm1));
    poly num = detail::binomial_power_minus(ctx, pj, chigh);
    poly den = detail::binomial_power_minus(ctx, pjm1, clow);
    auto [q, rem] = weierstrass_divide(num, distinguished_poly(den));
    if (!rem.is_zero()) throw std::logic_error("telescoping quotient left a remainder");
    if (!is_eisenstein(q))
        throw precision_exhausted("Frobenius factor failed the Eisenstein check");
    return height_one_prime(distinguished_poly(q), prime_certificate::eisenstein);
}

// the level-p^n bad-prime set attached to lambda: { F_0, ..., F_n }
inline std::vector<height_one_prime> bad_prime_set(const padic_context& ctx,
                                                   const mpz_class& lambda, int n) {
    if (n < 0) throw std::invalid_argument("level exponent must be >= 0");
    std::vector<height_one_prime> out;
    out.reserve(static_cast<size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) out.push_back(frobenius_factor(ctx, lambda, j));
    return out;
}

namespace detail {

// first root of h in p*Z_p at working precision, by digit-by-digit descent
inline std::optional<mpz_class> first_distinguished_root(const poly& h, long node_budget) {
    const padic_context& ctx = h.context();
    if (h.degree() < 1) return std::nullopt;
    long p = ctx.p();
    int n = ctx.precision();
    long nodes = 0;
    // stack of (candidate residue, level j): candidate fixed mod p^j, h(candidate) = 0 mod p^j
    std::vector<std::pair<mpz_class, int>> stack;
    if (mpz_divisible_p(h.coeff(0).residue().get_mpz_t(), mpz_class(p).get_mpz_t()))
        stack.emplace_back(0, 1);
    while (!stack.empty()) {
        auto [x, j] = stack.back();
        stack.pop_back();
        if (++nodes > node_budget) return std::nullopt;
        if (j == n) {
            // beyond its actual precision the root branches freely, so report
            // the smallest balanced representative that still annihilates h
            for (int k = 1; k <= n; ++k) {
                mpz_class pk = ctx.pow_p(k);
                mpz_class rep;
                mpz_fdiv_r(rep.get_mpz_t(), x.get_mpz_t(), pk.get_mpz_t());
                if (rep * 2 > pk) rep -= pk;
                if (h.evaluate(padic_int(ctx, rep)).is_zero()) return rep;
            }
            return x;
        }
        mpz_class pj = ctx.pow_p(j);
        mpz_class pj1 = pj * p;
        // push children in descending digit order so the smallest extension pops first
        for (long d = p - 1; d >= 0; --d) {
            mpz_class cand = x + d * pj;
            mpz_class val = h.evaluate(padic_int(ctx, cand)).residue();
            if (mpz_divisible_p(val.get_mpz_t(), pj1.get_mpz_t()))
                stack.emplace_back(std::move(cand), j + 1);
        }
    }
    return std::nullopt;
}

// carry a polynomial into another context through balanced representatives
inline poly transport_poly(const padic_context& dst, const poly& src) {
    std::vector<padic_int> cs;
    cs.reserve(static_cast<size_t>(src.degree()) + 1);
    for (int i = 0; i <= src.degree(); ++i) cs.emplace_back(dst, src.coeff(i).balanced());
    return poly(dst, std::move(cs));
}

}  // namespace detail

struct prime_power {
    height_one_prime prime;
    int multiplicity;
};

struct factor_result {
    int mu = 0;                      // exponent of the prime (p)
    poly unit;                       // unit cofactor from preparation
    std::vector<prime_power> factors;
    std::optional<poly> unfactored;  // certified-irreducible split not achieved

    explicit factor_result(const padic_context& ctx) : unit(poly::constant(padic_int::one(ctx))) {}
    bool complete() const { return !unfactored.has_value(); }
};

// factor f at working precision: p-power part, hint divisions, root peeling,
// then structural certificates; the honest leftover lands in `unfactored`.
inline factor_result factor_poly(const poly& f, const std::vector<poly>& hints = {},
                                 long node_budget = 200000) {
    const padic_context& ctx = f.context();
    factor_result out(ctx);
    weierstrass_form wf = weierstrass_prepare(f);
    out.mu = wf.mu;
    out.unit = wf.unit;

    // dividing out p^mu leaves the cofactor determined to N - mu digits only,
    // so peel at that precision and lift factors back through balanced
    // representatives
    std::optional<padic_context> sub;
    const padic_context* wctx = &ctx;
    if (wf.mu > 0) {
        int neff = ctx.precision() - wf.mu;
        if (neff < ctx.guard() + 2)
            throw precision_exhausted("p-power part consumes the certified digits");
        sub.emplace(ctx.p(), neff, ctx.guard());
        wctx = &*sub;
    }
    poly work = wctx == &ctx ? wf.dist.get() : detail::transport_poly(*wctx, wf.dist.get());

    auto record = [&](const poly& gen, prime_certificate fallback) {
        poly lifted = wctx == &ctx ? gen : detail::transport_poly(ctx, gen);
        auto cert = certify_distinguished(lifted);
        height_one_prime pr =
            cert ? *cert : height_one_prime(distinguished_poly(lifted), fallback);
        for (auto& pp : out.factors)
            if (pp.prime == pr) {
                ++pp.multiplicity;
                return;
            }
        out.factors.push_back({pr, 1});
    };

    for (const poly& hraw : hints) {
        if (hraw.degree() < 1) continue;
        poly hw = wctx == &ctx ? hraw : detail::transport_poly(*wctx, hraw);
        if (!is_distinguished(hw)) continue;
        distinguished_poly h(hw);
        for (;;) {
            if (work.degree() < h.degree()) break;
            auto [q, r] = weierstrass_divide(work, h);
            if (!r.is_zero()) break;
            record(hw, prime_certificate::user_asserted);
            work = q;
        }
    }

    while (work.degree() >= 1) {
        auto root = detail::first_distinguished_root(work, node_budget);
        if (!root) break;
        std::vector<mpz_class> lin{mpz_class(-*root), 1};
        distinguished_poly l{poly(*wctx, lin)};
        auto [q, r] = weierstrass_divide(work, l);
        if (!r.is_zero()) break;  // budget-truncated search returned a near-root; stop peeling
        record(l.get(), prime_certificate::degree1);
        work = q;
    }

    if (work.degree() >= 1) {
        poly lifted = wctx == &ctx ? work : detail::transport_poly(ctx, work);
        if (certify_distinguished(lifted)) {
            record(work, prime_certificate::user_asserted);
        } else {
            out.unfactored = lifted;
        }
    }
    return out;
}

// bad primes of the cyclic module Z_p[[X]]/(f): (p) when mu > 0, plus the
// certified prime factors of the distinguished part
inline factor_result annihilator_bad_primes(const poly& f, const std::vector<poly>& hints = {}) {
    return factor_poly(f, hints);
}

}  // namespace iwa
