#pragma once

// Brute-force cross-checks, independent of the Weierstrass/resultant fast
// paths.  An ideal given by bivariate generators is turned into a finite
// Z_p-presentation:
//
//   * reduction model: pick a T-free generator with a unit coefficient and
//     replace it by its Weierstrass-distinguished part (the unit cofactor
//     does not change the ideal); then pick a generator whose T-expansion
//     over O = Z_p[X]/(g_X) has a unit coefficient and replace it by its
//     distinguished part in T.  Modulo those two the quotient is a free
//     Z_p-module on the monomial box X^i T^j (i < dx, j < dt), and every
//     other generator contributes the exact normal forms of its multiples by
//     the box monomials.  Variables that occur in no generator are dropped,
//     so univariate and constant ideals are measured inside the subring they
//     actually touch.
//
//   * truncation model (fallback when no such monic generators exist): the
//     same box with all out-of-box monomials discarded.  Multiplication
//     never lowers degrees, so the discarded terms can never re-enter the
//     box and the truncated spans are well defined.
//
// Cardinalities come from Smith forms run at two working exponents a and
// a+2; a finite verdict needs both runs unsaturated and in agreement, an
// infinite verdict needs persistent saturation plus a quotient class whose
// order is maximal at the larger exponent.  Kernels of multiplication maps
// use #ker = #coker / p^{v(det)} with det taken on the saturated block of
// the conjugated multiplication matrix.

#include <climits>
#include <string>
#include <vector>

#include "bivar.hpp"
#include "resultant.hpp"
#include "smith.hpp"

namespace iwa {

struct oracle_box {
    int a;  // working exponent of the first run; the second runs at a+2
};

inline oracle_box default_box(const padic_context& ctx) {
    return oracle_box{ctx.precision() - 2};
}

struct oracle_report {
    cardinality card;
    std::string model;  // "reduction" or "truncation"
    std::vector<std::string> trace;

    explicit oracle_report(cardinality c) : card(std::move(c)) {}
};

namespace detail {

struct quotient_presentation {
    const padic_context* ctx;
    bool trivial = false;  // ideal contains a unit
    bool exact = true;     // reduction model (false: truncation)
    int dx = 1, dt = 1;    // box bounds; basis X^i T^j, i < dx, j < dt
    std::vector<padic_int> gx;  // monic X-divisor coefficients (empty if unused)
    std::optional<bivar> gt;    // top T-coefficient scaled to 1 (empty if unused)
    std::vector<bivar> others;  // remaining generators
};

inline quotient_presentation build_presentation(const padic_context& ctx,
                                                const std::vector<bivar>& gens) {
    quotient_presentation q;
    q.ctx = &ctx;
    bool x_occurs = false, t_occurs = false;
    for (const bivar& g : gens)
        for (const auto& [k, c] : g.terms()) {
            if (k.first > 0) x_occurs = true;
            if (k.second > 0) t_occurs = true;
        }
    // a unit constant term makes the generator a unit of the local ring
    for (const bivar& g : gens)
        if (!g.is_zero() && g.coeff(0, 0).is_unit()) {
            q.trivial = true;
            return q;
        }

    // X-direction: among T-free generators, the one whose distinguished part
    // has minimal degree.  Replacing the generator by that part is an ideal
    // equality; a degree-0 part means the generator was a unit.
    int pick_x = -1, pick_t = -1;
    if (x_occurs) {
        int best = INT_MAX;
        for (size_t i = 0; i < gens.size(); ++i) {
            const bivar& g = gens[i];
            if (g.is_zero() || g.deg_t() != 0) continue;
            int d = -1;
            for (int k = 0; k <= g.deg_x(); ++k)
                if (g.coeff(k, 0).is_unit()) {
                    d = k;
                    break;
                }
            if (d >= 0 && d < best) {
                best = d;
                pick_x = static_cast<int>(i);
            }
        }
        if (pick_x < 0) {
            q.exact = false;
        } else if (best == 0) {
            q.trivial = true;
            return q;
        } else {
            zp_ring ring{&ctx};
            try {
                auto prep =
                    prepare_unit_times_monic(ring, gens[static_cast<size_t>(pick_x)].t_coeff(0).coeffs());
                q.gx = std::move(prep->dist);
                q.dx = best;
            } catch (const precision_exhausted&) {
                q.exact = false;
            }
        }
    }

    // T-direction over O = Z_p[X]/(g_X): reduce each generator's
    // T-coefficients into O, find the lowest O-unit coefficient, and use the
    // distinguished part of the winner.
    poly gmod = q.gx.empty() ? poly(ctx, std::vector<long>{0, 1}) : poly(ctx, q.gx);
    std::vector<poly> picked_tcoeffs;
    if (t_occurs && q.exact) {
        int best = INT_MAX;
        for (size_t i = 0; i < gens.size(); ++i) {
            if (static_cast<int>(i) == pick_x) continue;
            const bivar& g = gens[i];
            if (g.is_zero() || g.deg_t() < 1) continue;
            std::vector<poly> cs;
            for (int j = 0; j <= g.deg_t(); ++j) cs.push_back(oq_reduce(ctx, g.t_coeff(j), gmod));
            while (!cs.empty() && cs.back().is_zero()) cs.pop_back();
            int d = -1;
            for (size_t j = 0; j < cs.size(); ++j)
                if (cs[j].constant_term().is_unit()) {
                    d = static_cast<int>(j);
                    break;
                }
            if (d >= 0 && d < best) {
                best = d;
                pick_t = static_cast<int>(i);
                picked_tcoeffs = std::move(cs);
            }
        }
        if (pick_t < 0) {
            q.exact = false;
        } else if (best == 0) {
            q.trivial = true;
            return q;
        } else {
            oq_ring oring{&ctx, &gmod};
            try {
                auto prep = prepare_unit_times_monic(oring, picked_tcoeffs);
                bivar h(ctx);
                for (size_t j = 0; j < prep->dist.size(); ++j)
                    for (int i = 0; i <= prep->dist[j].degree(); ++i)
                        h.add_term(i, static_cast<int>(j), prep->dist[j].coeff(i));
                q.gt = std::move(h);
                q.dt = best;
            } catch (const precision_exhausted&) {
                q.exact = false;
            }
        }
    }

    if (q.exact) {
        for (size_t i = 0; i < gens.size(); ++i) {
            if (static_cast<int>(i) == pick_x || static_cast<int>(i) == pick_t) continue;
            if (!gens[i].is_zero()) q.others.push_back(gens[i]);
        }
    } else {
        // truncation box: one past the largest occurring degrees
        q.dx = 1;
        q.dt = 1;
        q.gx.clear();
        q.gt.reset();
        for (const bivar& g : gens) {
            q.dx = std::max(q.dx, g.deg_x() + 1);
            q.dt = std::max(q.dt, g.deg_t() + 1);
        }
        for (const bivar& g : gens)
            if (!g.is_zero()) q.others.push_back(g);
    }
    return q;
}

// exact normal form modulo the chosen monic generators (reduction model)
inline bivar normal_form(const quotient_presentation& q, bivar v) {
    const padic_context& ctx = *q.ctx;
    if (q.gt) {
        for (;;) {
            int j = v.deg_t();
            if (j < q.dt) break;
            poly c = v.t_coeff(j);
            bivar sub = bivar::from_x_poly(c) * bivar::monomial(padic_int::one(ctx), 0, j - q.dt) *
                        (*q.gt);
            v = v - sub;
        }
    }
    if (!q.gx.empty()) {
        zp_ring ring{&ctx};
        bivar out(ctx);
        for (int j = 0; j < std::max(q.dt, v.deg_t() + 1); ++j) {
            poly s = v.t_coeff(j);
            if (s.is_zero()) continue;
            if (s.degree() >= q.dx) {
                auto [qq, r] = monic_divide(ring, s.coeffs(), q.gx);
                (void)qq;
                s = poly(ctx, std::move(r));
            }
            for (int i = 0; i <= s.degree(); ++i) out.add_term(i, j, s.coeff(i));
        }
        return out;
    }
    return v;
}

inline bivar truncate_to_box(const quotient_presentation& q, const bivar& v) {
    bivar out(*q.ctx);
    for (const auto& [k, c] : v.terms())
        if (k.first < q.dx && k.second < q.dt) out.add_term(k.first, k.second, c);
    return out;
}

inline bivar box_image(const quotient_presentation& q, const bivar& v) {
    return q.exact ? normal_form(q, v) : truncate_to_box(q, v);
}

// relation matrix: columns are box images of gen * (box monomial)
inline zmat relation_matrix(const quotient_presentation& q) {
    const padic_context& ctx = *q.ctx;
    int r = q.dx * q.dt;
    zmat a(r, static_cast<int>(q.others.size()) * r);
    int col = 0;
    for (const bivar& g : q.others)
        for (int j = 0; j < q.dt; ++j)
            for (int i = 0; i < q.dx; ++i) {
                bivar img = box_image(q, g * bivar::monomial(padic_int::one(ctx), i, j));
                for (const auto& [k, c] : img.terms())
                    a.at(k.first + q.dx * k.second, col) = c.residue();
                ++col;
            }
    return a;
}

// multiplication-by-phi matrix on the box
inline zmat multiplication_matrix(const quotient_presentation& q, const bivar& phi) {
    const padic_context& ctx = *q.ctx;
    int r = q.dx * q.dt;
    zmat m(r, r);
    int col = 0;
    for (int j = 0; j < q.dt; ++j)
        for (int i = 0; i < q.dx; ++i) {
            bivar img = box_image(q, phi * bivar::monomial(padic_int::one(ctx), i, j));
            for (const auto& [k, c] : img.terms())
                m.at(k.first + q.dx * k.second, col) = c.residue();
            ++col;
        }
    return m;
}

struct smith_run {
    smith_form sf;
    bool saturated = false;
    long expsum = 0;
};

inline smith_run run_smith(const zmat& a, long p, int exp, bool with_transforms) {
    smith_run r{smith_over_zpa(a, p, exp, with_transforms), false, 0};
    for (int i = 0; i < a.rows; ++i) {
        long d = r.sf.row_divisor(i);
        if (d >= exp)
            r.saturated = true;
        else
            r.expsum += d;
    }
    return r;
}

inline int first_saturated_row(const smith_form& sf, int exp) {
    for (int i = 0; i < sf.rows; ++i)
        if (sf.row_divisor(i) >= exp) return i;
    return -1;
}

// does the run-1 cokernel generator keep maximal order at the larger exponent?
inline bool maximal_order_persists(const smith_run& r1, int a1, const smith_run& r2, int a2,
                                   long p) {
    int i1 = first_saturated_row(r1.sf, a1);
    if (i1 < 0) return false;
    int r = r1.sf.rows;
    mpz_class mod2 = 1;
    for (int i = 0; i < a2; ++i) mod2 *= p;
    // y = U2 * (column i1 of U1^{-1})
    for (int i = 0; i < r; ++i) {
        if (r2.sf.row_divisor(i) < a2) continue;
        mpz_class y = 0;
        for (int k = 0; k < r; ++k) y += r2.sf.u.at(i, k) * r1.sf.uinv.at(k, i1);
        mpz_fdiv_r(y.get_mpz_t(), y.get_mpz_t(), mod2.get_mpz_t());
        if (!mpz_divisible_ui_p(y.get_mpz_t(), static_cast<unsigned long>(p))) return true;
    }
    return false;
}

inline int clamp_box(const padic_context& ctx, const oracle_box& box) {
    int a1 = std::min(box.a, ctx.precision() - 2);
    if (a1 < 2) throw std::invalid_argument("oracle box exponent must be at least 2");
    return a1;
}

inline cardinality stabilized_cardinality(const zmat& a, const padic_context& ctx, int a1,
                                          std::vector<std::string>& trace) {
    int a2 = a1 + 2;
    smith_run r1 = run_smith(a, ctx.p(), a1, true);
    smith_run r2 = run_smith(a, ctx.p(), a2, true);
    for (const auto* r : {&r1, &r2}) {
        int exp = r == &r1 ? a1 : a2;
        trace.push_back((r->saturated ? std::string("saturated")
                                      : "v=" + std::to_string(r->expsum)) +
                        " @ a=" + std::to_string(exp));
    }
    if (!r1.saturated && !r2.saturated) {
        if (r1.expsum == r2.expsum) return cardinality::certified_finite(r1.expsum, ctx);
        return cardinality::undetermined("exponent did not stabilize between box exponents");
    }
    if (r1.saturated && r2.saturated) {
        if (maximal_order_persists(r1, a1, r2, a2, ctx.p()))
            return cardinality::infinite(
                "quotient class of maximal order persists at the larger box exponent");
        return cardinality::undetermined("saturated without a persistent maximal-order class");
    }
    return cardinality::undetermined("saturation did not stabilize between box exponents");
}

}  // namespace detail

inline oracle_report brute_cardinality(const padic_context& ctx, const std::vector<bivar>& gens,
                                       const oracle_box& box) {
    for (const bivar& g : gens) check_same_context(ctx, g.context());
    bool all_zero = true;
    for (const bivar& g : gens)
        if (!g.is_zero()) all_zero = false;
    if (all_zero) {
        oracle_report rep(cardinality::infinite("zero ideal"));
        rep.model = "reduction";
        return rep;
    }
    detail::quotient_presentation q = detail::build_presentation(ctx, gens);
    if (q.trivial) {
        oracle_report rep(cardinality::finite(0));
        rep.model = "reduction";
        rep.trace.push_back("ideal contains a unit");
        return rep;
    }
    int a1 = detail::clamp_box(ctx, box);
    zmat a = detail::relation_matrix(q);
    oracle_report rep(cardinality::undetermined(""));
    rep.model = q.exact ? "reduction" : "truncation";
    rep.card = detail::stabilized_cardinality(a, ctx, a1, rep.trace);
    // the truncated box computes a quotient of the true module, so a stable
    // finite count there is only a lower bound; persistent saturation still
    // witnesses unbounded order and may stand
    if (!q.exact && rep.card.k == cardinality::kind::finite)
        rep.card = cardinality::undetermined(
            "truncated model only bounds the quotient from below");
    return rep;
}

inline oracle_report brute_cardinality(const padic_context& ctx, const std::vector<bivar>& gens) {
    return brute_cardinality(ctx, gens, default_box(ctx));
}

// cardinality of ker(multiplication by phi) on the quotient
inline oracle_report brute_kernel_cardinality(const padic_context& ctx,
                                              const std::vector<bivar>& gens, const bivar& phi,
                                              const oracle_box& box) {
    for (const bivar& g : gens) check_same_context(ctx, g.context());
    check_same_context(ctx, phi.context());
    bool all_zero = true;
    for (const bivar& g : gens)
        if (!g.is_zero()) all_zero = false;
    if (all_zero) {
        oracle_report rep(cardinality::undetermined("kernel on the full ring is out of scope"));
        rep.model = "reduction";
        return rep;
    }
    detail::quotient_presentation q = detail::build_presentation(ctx, gens);
    if (q.trivial) {
        oracle_report rep(cardinality::finite(0));
        rep.model = "reduction";
        rep.trace.push_back("ideal contains a unit");
        return rep;
    }
    if (!q.exact) {
        // kernels are neither sub- nor quotient-functorial along the box
        // truncation, so nothing can be concluded from the truncated data
        oracle_report rep(cardinality::undetermined("truncated model cannot resolve kernels"));
        rep.model = "truncation";
        return rep;
    }
    int a1 = detail::clamp_box(ctx, box);
    int a2 = a1 + 2;
    long p = ctx.p();
    int r = q.dx * q.dt;
    zmat a = detail::relation_matrix(q);
    zmat m = detail::multiplication_matrix(q, phi);
    zmat joint(r, a.cols + r);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < a.cols; ++j) joint.at(i, j) = a.at(i, j);
        for (int j = 0; j < r; ++j) joint.at(i, a.cols + j) = m.at(i, j);
    }

    oracle_report rep(cardinality::undetermined(""));
    rep.model = q.exact ? "reduction" : "truncation";

    struct run_data {
        bool sat2 = false;
        long e2 = 0;
        bool det_vanishes = false;
        long detval = 0;
        int srank = 0;
        detail::smith_run joint_run;
    };
    run_data runs[2];
    int exps[2] = {a1, a2};
    for (int t = 0; t < 2; ++t) {
        int exp = exps[t];
        run_data& rd = runs[t];
        rd.joint_run = detail::run_smith(joint, p, exp, true);
        rd.sat2 = rd.joint_run.saturated;
        rd.e2 = rd.joint_run.expsum;
        detail::smith_run base = detail::run_smith(a, p, exp, true);
        std::vector<int> sat_rows;
        for (int i = 0; i < r; ++i)
            if (base.sf.row_divisor(i) >= exp) sat_rows.push_back(i);
        rd.srank = static_cast<int>(sat_rows.size());
        if (!rd.sat2) {
            // v(det) of the induced map on the free part, via the conjugated block
            mpz_class mod = 1;
            for (int i = 0; i < exp; ++i) mod *= p;
            zmat my = zmat_mul(zmat_mul(base.sf.u, m, mod), base.sf.uinv, mod);
            int s = rd.srank;
            std::vector<mpz_class> block(static_cast<size_t>(s) * s);
            for (int i = 0; i < s; ++i)
                for (int j = 0; j < s; ++j)
                    block[static_cast<size_t>(i) * s + j] = my.at(sat_rows[static_cast<size_t>(i)],
                                                                  sat_rows[static_cast<size_t>(j)]);
            mpz_class det = bareiss_det(std::move(block), s);
            mpz_fdiv_r(det.get_mpz_t(), det.get_mpz_t(), mod.get_mpz_t());
            if (det == 0) {
                rd.det_vanishes = true;
            } else {
                mpz_class tmp = det;
                while (mpz_divisible_ui_p(tmp.get_mpz_t(), static_cast<unsigned long>(p))) {
                    mpz_divexact_ui(tmp.get_mpz_t(), tmp.get_mpz_t(),
                                    static_cast<unsigned long>(p));
                    ++rd.detval;
                }
            }
            rep.trace.push_back("coker v=" + std::to_string(rd.e2) + ", det v=" +
                                (rd.det_vanishes ? std::string("?") : std::to_string(rd.detval)) +
                                " @ a=" + std::to_string(exp));
        } else {
            rep.trace.push_back("coker saturated @ a=" + std::to_string(exp));
        }
    }

    if (!runs[0].sat2 && !runs[1].sat2) {
        if (runs[0].det_vanishes || runs[1].det_vanishes) {
            rep.card = cardinality::undetermined(
                "determinant of the induced map vanishes at working precision");
        } else if (runs[0].e2 == runs[1].e2 && runs[0].detval == runs[1].detval &&
                   runs[0].srank == runs[1].srank && runs[0].e2 >= runs[0].detval) {
            rep.card = cardinality::certified_finite(runs[0].e2 - runs[0].detval, ctx);
        } else {
            rep.card = cardinality::undetermined("kernel exponent did not stabilize");
        }
        return rep;
    }
    if (runs[0].sat2 && runs[1].sat2) {
        if (runs[0].srank > 0 && runs[1].srank > 0 &&
            detail::maximal_order_persists(runs[0].joint_run, a1, runs[1].joint_run, a2, p)) {
            rep.card = cardinality::infinite(
                "multiplication map has infinite cokernel on a quotient with free part");
            return rep;
        }
        rep.card = cardinality::undetermined("persistent saturation without a certified witness");
        return rep;
    }
    rep.card = cardinality::undetermined("kernel saturation did not stabilize");
    return rep;
}

inline oracle_report brute_kernel_cardinality(const padic_context& ctx,
                                              const std::vector<bivar>& gens, const bivar& phi) {
    return brute_kernel_cardinality(ctx, gens, phi, default_box(ctx));
}

}  // namespace iwa
