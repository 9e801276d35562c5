#pragma once

// Smith normal form over Z/p^a.  Z/p^a is not a domain, so the usual
// fraction-free tricks do not apply directly; instead every pivot is chosen
// with minimal p-valuation, which makes each elimination multiplier
//     entry / pivot = p^(v_entry - v_pivot) * unit
// exact in Z/p^a — no division by a non-unit ever happens.  Divisor
// valuations come out non-decreasing; the value `a` is a saturation marker
// ("zero mod p^a"), not a measured valuation.  Row and column transforms are
// tracked so callers can extract kernel vectors and cokernel generators.

#include <string>
#include <vector>

#include "padic.hpp"

namespace iwa {

struct zmat {
    long rows = 0, cols = 0;
    std::vector<mpz_class> e;

    zmat() = default;
    zmat(long r, long c) : rows(r), cols(c), e(static_cast<size_t>(r * c)) {}

    mpz_class& at(long r, long c) { return e[static_cast<size_t>(r * cols + c)]; }
    const mpz_class& at(long r, long c) const { return e[static_cast<size_t>(r * cols + c)]; }

    static zmat identity(long n) {
        zmat m(n, n);
        for (long i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }
};

inline zmat zmat_mul(const zmat& a, const zmat& b, const mpz_class& mod) {
    zmat r(a.rows, b.cols);
    for (long i = 0; i < a.rows; ++i)
        for (long k = 0; k < a.cols; ++k) {
            const mpz_class& aik = a.at(i, k);
            if (aik == 0) continue;
            for (long j = 0; j < b.cols; ++j) {
                r.at(i, j) += aik * b.at(k, j);
            }
        }
    for (auto& x : r.e) mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
    return r;
}

struct smith_form {
    long p = 0;
    int a = 0;
    long rows = 0, cols = 0;
    std::vector<int> divisors;  // length min(rows, cols), non-decreasing, capped at a
    zmat u, uinv, v, vinv;      // u * A * v = diag(p^divisors) mod p^a

    // per-row divisor of the cokernel (Z/p^a)^rows / col-span: rows beyond the
    // diagonal have no pivot and contribute a full saturated factor
    int row_divisor(long i) const {
        return i < static_cast<long>(divisors.size()) ? divisors[static_cast<size_t>(i)] : a;
    }
    long coker_exponent() const {
        long s = 0;
        for (long i = 0; i < rows; ++i) s += row_divisor(i);
        return s;
    }
    bool coker_saturated() const {
        for (long i = 0; i < rows; ++i)
            if (row_divisor(i) >= a) return true;
        return false;
    }
    long saturated_count() const {
        long c = 0;
        for (long i = 0; i < rows; ++i)
            if (row_divisor(i) >= a) ++c;
        return c;
    }
};

namespace detail {

inline int val_mod(const mpz_class& x, long p, int a) {
    if (x == 0) return a;
    mpz_class t = x;
    int v = 0;
    while (v < a && mpz_divisible_ui_p(t.get_mpz_t(), static_cast<unsigned long>(p))) {
        mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(p));
        ++v;
    }
    return v;
}

}  // namespace detail

// A is consumed as a copy; entries are reduced mod p^a internally.
inline smith_form smith_over_zpa(zmat A, long p, int a, bool with_transforms = true) {
    smith_form out;
    out.p = p;
    out.a = a;
    out.rows = A.rows;
    out.cols = A.cols;

    mpz_class mod;
    mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(a));
    for (auto& x : A.e) mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());

    if (with_transforms) {
        out.u = zmat::identity(A.rows);
        out.uinv = zmat::identity(A.rows);
        out.v = zmat::identity(A.cols);
        out.vinv = zmat::identity(A.cols);
    }

    auto reduce1 = [&](mpz_class& x) { mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t()); };

    auto swap_rows = [&](long i, long j) {
        if (i == j) return;
        for (long c = 0; c < A.cols; ++c) std::swap(A.at(i, c), A.at(j, c));
        if (with_transforms) {
            for (long c = 0; c < out.u.cols; ++c) std::swap(out.u.at(i, c), out.u.at(j, c));
            for (long r = 0; r < out.uinv.rows; ++r) std::swap(out.uinv.at(r, i), out.uinv.at(r, j));
        }
    };
    auto swap_cols = [&](long i, long j) {
        if (i == j) return;
        for (long r = 0; r < A.rows; ++r) std::swap(A.at(r, i), A.at(r, j));
        if (with_transforms) {
            for (long r = 0; r < out.v.rows; ++r) std::swap(out.v.at(r, i), out.v.at(r, j));
            for (long c = 0; c < out.vinv.cols; ++c) std::swap(out.vinv.at(i, c), out.vinv.at(j, c));
        }
    };
    // row_i -= m * row_t
    auto row_op = [&](long i, long t, const mpz_class& m) {
        if (m == 0) return;
        for (long c = 0; c < A.cols; ++c) {
            A.at(i, c) -= m * A.at(t, c);
            reduce1(A.at(i, c));
        }
        if (with_transforms) {
            for (long c = 0; c < out.u.cols; ++c) {
                out.u.at(i, c) -= m * out.u.at(t, c);
                reduce1(out.u.at(i, c));
            }
            for (long r = 0; r < out.uinv.rows; ++r) {
                out.uinv.at(r, t) += m * out.uinv.at(r, i);
                reduce1(out.uinv.at(r, t));
            }
        }
    };
    // col_j -= m * col_t
    auto col_op = [&](long j, long t, const mpz_class& m) {
        if (m == 0) return;
        for (long r = 0; r < A.rows; ++r) {
            A.at(r, j) -= m * A.at(r, t);
            reduce1(A.at(r, j));
        }
        if (with_transforms) {
            for (long r = 0; r < out.v.rows; ++r) {
                out.v.at(r, j) -= m * out.v.at(r, t);
                reduce1(out.v.at(r, j));
            }
            for (long c = 0; c < out.vinv.cols; ++c) {
                out.vinv.at(t, c) += m * out.vinv.at(j, c);
                reduce1(out.vinv.at(t, c));
            }
        }
    };

    long steps = std::min(A.rows, A.cols);
    out.divisors.assign(static_cast<size_t>(steps), a);

    for (long t = 0; t < steps; ++t) {
        // minimal-valuation pivot in the remaining submatrix
        int best = a;
        long bi = t, bj = t;
        for (long i = t; i < A.rows; ++i)
            for (long j = t; j < A.cols; ++j) {
                int v = detail::val_mod(A.at(i, j), p, a);
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (best >= a) break;  // everything left is zero mod p^a: saturated divisors

        swap_rows(t, bi);
        swap_cols(t, bj);
        out.divisors[static_cast<size_t>(t)] = best;

        // pivot = p^best * w with w a unit; scale the pivot row by w^{-1} so the
        // diagonal entry becomes exactly p^best, then clear with exact
        // multipliers entry / p^best
        mpz_class pv;
        mpz_ui_pow_ui(pv.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(best));
        mpz_class w, winv;
        mpz_divexact(w.get_mpz_t(), A.at(t, t).get_mpz_t(), pv.get_mpz_t());
        if (!mpz_invert(winv.get_mpz_t(), w.get_mpz_t(), mod.get_mpz_t()))
            throw std::logic_error("smith pivot unit part not invertible");

        for (long c = 0; c < A.cols; ++c) {
            A.at(t, c) *= winv;
            reduce1(A.at(t, c));
        }
        if (with_transforms) {
            for (long c = 0; c < out.u.cols; ++c) {
                out.u.at(t, c) *= winv;
                reduce1(out.u.at(t, c));
            }
            for (long r = 0; r < out.uinv.rows; ++r) {
                out.uinv.at(r, t) *= w;
                reduce1(out.uinv.at(r, t));
            }
        }

        for (long i = t + 1; i < A.rows; ++i) {
            if (A.at(i, t) == 0) continue;
            mpz_class m;
            mpz_divexact(m.get_mpz_t(), A.at(i, t).get_mpz_t(), pv.get_mpz_t());
            reduce1(m);
            row_op(i, t, m);
        }
        for (long j = t + 1; j < A.cols; ++j) {
            if (A.at(t, j) == 0) continue;
            mpz_class m;
            mpz_divexact(m.get_mpz_t(), A.at(t, j).get_mpz_t(), pv.get_mpz_t());
            reduce1(m);
            col_op(j, t, m);
        }
    }
    return out;
}

}  // namespace iwa
