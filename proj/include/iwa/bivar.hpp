#pragma once

// Sparse bivariate polynomials c * X^i * T^j over a p-adic context.  These
// are the finitely supported elements of Z_p[[X]][[T]] the tool manipulates:
// module relations, omega_n = (1+T)^{p^n} - 1, and their twists.  The twist
// by the wild character is the substitution T |-> a*T + b with a = 1 + p*l,
// b = p*l, applied termwise through cached powers of (a*T + b).

#include <map>
#include <utility>
#include <vector>

#include "poly.hpp"

namespace iwa {

class bivar {
   public:
    using key = std::pair<int, int>;  // (x degree, t degree)

    explicit bivar(const padic_context& ctx) : ctx_(&ctx) {}

    static bivar monomial(const padic_int& c, int xdeg, int tdeg) {
        bivar b(c.context());
        b.add_term(xdeg, tdeg, c);
        return b;
    }
    static bivar from_x_poly(const poly& f) {
        bivar b(f.context());
        for (int i = 0; i <= f.degree(); ++i) b.add_term(i, 0, f.coeff(i));
        return b;
    }
    static bivar from_t_poly(const poly& f) {
        bivar b(f.context());
        for (int i = 0; i <= f.degree(); ++i) b.add_term(0, i, f.coeff(i));
        return b;
    }

    const padic_context& context() const { return *ctx_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const std::map<key, padic_int>& terms() const { return terms_; }

    int deg_x() const {
        int d = -1;
        for (const auto& [k, c] : terms_) d = std::max(d, k.first);
        return d;
    }
    int deg_t() const {
        int d = -1;
        for (const auto& [k, c] : terms_) d = std::max(d, k.second);
        return d;
    }

    padic_int coeff(int xdeg, int tdeg) const {
        auto it = terms_.find({xdeg, tdeg});
        return it == terms_.end() ? padic_int::zero(*ctx_) : it->second;
    }

    // coefficient of T^j, as a polynomial in X
    poly t_coeff(int j) const {
        std::vector<padic_int> cs;
        for (const auto& [k, c] : terms_) {
            if (k.second != j) continue;
            if (static_cast<int>(cs.size()) <= k.first)
                cs.resize(static_cast<size_t>(k.first) + 1, padic_int::zero(*ctx_));
            cs[static_cast<size_t>(k.first)] = c;
        }
        return poly(*ctx_, std::move(cs));
    }

    void add_term(int xdeg, int tdeg, const padic_int& c) {
        if (xdeg < 0 || tdeg < 0) throw std::invalid_argument("negative degree");
        check_same_context(*ctx_, c.context());
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace({xdeg, tdeg}, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    bivar operator-() const {
        bivar r(*ctx_);
        for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
        return r;
    }
    bivar operator+(const bivar& o) const {
        check_same_context(*ctx_, *o.ctx_);
        bivar r = *this;
        for (const auto& [k, c] : o.terms_) r.add_term(k.first, k.second, c);
        return r;
    }
    bivar operator-(const bivar& o) const { return *this + (-o); }
    bivar operator*(const bivar& o) const {
        check_same_context(*ctx_, *o.ctx_);
        bivar r(*ctx_);
        for (const auto& [ka, ca] : terms_)
            for (const auto& [kb, cb] : o.terms_)
                r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
        return r;
    }
    bivar operator*(const padic_int& s) const {
        bivar r(*ctx_);
        for (const auto& [k, c] : terms_) r.add_term(k.first, k.second, c * s);
        return r;
    }

    bool operator==(const bivar& o) const {
        if (terms_.size() != o.terms_.size()) return false;
        auto it = o.terms_.begin();
        for (const auto& [k, c] : terms_) {
            if (it->first != k || !(it->second == c)) return false;
            ++it;
        }
        return true;
    }

    // substitution T |-> a*T + b
    bivar twist_t(const padic_int& a, const padic_int& b) const {
        check_same_context(*ctx_, a.context());
        check_same_context(*ctx_, b.context());
        int dt = deg_t();
        // powers of (a*T + b) as T-polynomials with scalar coefficients
        std::vector<std::vector<padic_int>> pw;
        pw.push_back({padic_int::one(*ctx_)});
        for (int j = 1; j <= dt; ++j) {
            const auto& prev = pw.back();
            std::vector<padic_int> next(prev.size() + 1, padic_int::zero(*ctx_));
            for (size_t i = 0; i < prev.size(); ++i) {
                next[i] += prev[i] * b;
                next[i + 1] += prev[i] * a;
            }
            pw.push_back(std::move(next));
        }
        bivar r(*ctx_);
        for (const auto& [k, c] : terms_) {
            const auto& pj = pw[static_cast<size_t>(k.second)];
            for (size_t t = 0; t < pj.size(); ++t)
                r.add_term(k.first, static_cast<int>(t), c * pj[t]);
        }
        return r;
    }

   private:
    const padic_context* ctx_;
    std::map<key, padic_int> terms_;
};

inline bivar operator*(const padic_int& s, const bivar& b) { return b * s; }

}  // namespace iwa
