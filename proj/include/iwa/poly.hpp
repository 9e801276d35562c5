#pragma once

// Dense univariate polynomials over fixed-precision p-adic integers, with the
// structural predicates that matter over Z_p[[X]]: distinguished (monic with
// all lower coefficients divisible by p) and Eisenstein (additionally the
// constant coefficient has valuation exactly one).  A distinguished_poly is a
// poly whose invariant has been checked once at construction.

#include <algorithm>
#include <initializer_list>
#include <vector>

#include "padic.hpp"

namespace iwa {

class poly {
public:
    explicit poly(const padic_context& ctx) : ctx_(&ctx) {}

    poly(const padic_context& ctx, const std::vector<long>& ascending) : ctx_(&ctx) {
        c_.reserve(ascending.size());
        for (long v : ascending) c_.emplace_back(ctx, v);
        normalize();
    }
    poly(const padic_context& ctx, const std::vector<mpz_class>& ascending) : ctx_(&ctx) {
        c_.reserve(ascending.size());
        for (const auto& v : ascending) c_.emplace_back(ctx, v);
        normalize();
    }
    poly(const padic_context& ctx, std::vector<padic_int> ascending)
        : ctx_(&ctx), c_(std::move(ascending)) {
        for (const auto& c : c_) check_same_context(ctx, c.context());
        normalize();
    }

    static poly constant(const padic_int& c) {
        poly r(c.context());
        r.c_.push_back(c);
        r.normalize();
        return r;
    }
    static poly monomial(const padic_int& c, int deg) {
        poly r(c.context());
        if (!c.is_zero()) {
            r.c_.assign(static_cast<size_t>(deg), padic_int::zero(c.context()));
            r.c_.push_back(c);
        }
        return r;
    }

    const padic_context& context() const { return *ctx_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }

    padic_int coeff(int i) const {
        if (i < 0 || i >= static_cast<int>(c_.size())) return padic_int::zero(*ctx_);
        return c_[static_cast<size_t>(i)];
    }
    padic_int leading() const { return is_zero() ? padic_int::zero(*ctx_) : c_.back(); }
    padic_int constant_term() const { return coeff(0); }
    const std::vector<padic_int>& coeffs() const { return c_; }

    // smallest coefficient valuation; "at least N" for the zero polynomial
    valuation min_valuation() const {
        valuation best = valuation::at_least(ctx_->precision());
        for (const auto& c : c_) {
            valuation v = c.val();
            if (v.exact && (!best.exact || v.v < best.v)) best = v;
        }
        return best;
    }

    poly operator-() const {
        poly r(*ctx_);
        r.c_.reserve(c_.size());
        for (const auto& c : c_) r.c_.push_back(-c);
        return r;
    }

    friend poly operator+(const poly& a, const poly& b) {
        check_same_context(*a.ctx_, *b.ctx_);
        poly r(*a.ctx_);
        size_t n = std::max(a.c_.size(), b.c_.size());
        r.c_.reserve(n);
        for (size_t i = 0; i < n; ++i)
            r.c_.push_back(a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i)));
        r.normalize();
        return r;
    }
    friend poly operator-(const poly& a, const poly& b) { return a + (-b); }

    friend poly operator*(const poly& a, const poly& b) {
        check_same_context(*a.ctx_, *b.ctx_);
        poly r(*a.ctx_);
        if (a.is_zero() || b.is_zero()) return r;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, padic_int::zero(*a.ctx_));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j)
                r.c_[i + j] += a.c_[i] * b.c_[j];
        r.normalize();
        return r;
    }

    friend poly operator*(const padic_int& s, const poly& f) {
        check_same_context(s.context(), *f.ctx_);
        poly r(*f.ctx_);
        r.c_.reserve(f.c_.size());
        for (const auto& c : f.c_) r.c_.push_back(s * c);
        r.normalize();
        return r;
    }

    // multiply by X^k
    poly shifted(int k) const {
        if (is_zero() || k == 0) return *this;
        poly r(*ctx_);
        r.c_.assign(static_cast<size_t>(k), padic_int::zero(*ctx_));
        r.c_.insert(r.c_.end(), c_.begin(), c_.end());
        return r;
    }

    padic_int evaluate(const padic_int& x) const {
        check_same_context(*ctx_, x.context());
        padic_int acc = padic_int::zero(*ctx_);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    // exact division of every coefficient by p^k; caller guarantees min_valuation >= k
    poly shift_down(int k) const {
        poly r(*ctx_);
        r.c_.reserve(c_.size());
        for (const auto& c : c_) r.c_.push_back(c.shift_down(k));
        r.normalize();
        return r;
    }

    bool operator==(const poly& o) const {
        check_same_context(*ctx_, *o.ctx_);
        if (c_.size() != o.c_.size()) return false;
        for (size_t i = 0; i < c_.size(); ++i)
            if (c_[i] != o.c_[i]) return false;
        return true;
    }
    bool operator!=(const poly& o) const { return !(*this == o); }

private:
    void normalize() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    const padic_context* ctx_;
    std::vector<padic_int> c_;
};

// Monic with every lower coefficient divisible by p.  The constant polynomial 1
// counts as distinguished of degree 0 (the unit factor of a unit power series).
inline bool is_distinguished(const poly& f) {
    if (f.is_zero()) return false;
    if (f.leading() != padic_int::one(f.context())) return false;
    for (int i = 0; i < f.degree(); ++i) {
        valuation v = f.coeff(i).val();
        if (v.exact && v.v < 1) return false;
    }
    return true;
}

inline bool is_eisenstein(const poly& f) {
    if (f.degree() < 1 || !is_distinguished(f)) return false;
    valuation v0 = f.constant_term().val();
    return v0.exact && v0.v == 1;
}

class distinguished_poly {
public:
    explicit distinguished_poly(poly f) : f_(std::move(f)) {
        if (!is_distinguished(f_))
            throw std::invalid_argument("polynomial is not distinguished (monic with p | lower coefficients)");
    }

    const poly& get() const { return f_; }
    int degree() const { return f_.degree(); }
    const padic_context& context() const { return f_.context(); }

    bool operator==(const distinguished_poly& o) const { return f_ == o.f_; }
    bool operator!=(const distinguished_poly& o) const { return !(*this == o); }

private:
    poly f_;
};

}  // namespace iwa
