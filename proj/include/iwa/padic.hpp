#pragma once

// Fixed-precision p-adic integers: exact arithmetic in Z/p^N, viewed as the
// truncation of Z_p at N digits.  A context fixes (p, N, guard); every value
// carries its context and all binary operations insist the contexts agree.
// Residues are kept canonical in [0, p^N).  The valuation of a residue that
// is zero at working precision is reported as "at least N", never as a plain
// number, so that downstream code cannot mistake it for an exact value.

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <utility>

namespace iwa {

struct context_mismatch : std::invalid_argument {
    explicit context_mismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct not_a_unit : std::domain_error {
    explicit not_a_unit(const std::string& what) : std::domain_error(what) {}
};

struct precision_exhausted : std::runtime_error {
    explicit precision_exhausted(const std::string& what) : std::runtime_error(what) {}
};

struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_odd_prime(long p) {
    if (p < 3 || p % 2 == 0) return false;
    for (long d = 3; d * d <= p; d += 2)
        if (p % d == 0) return false;
    return true;
}

class padic_context {
public:
    padic_context(long p, int precision, int guard = 4)
        : p_(p), n_(precision), guard_(guard) {
        if (!is_odd_prime(p))
            throw std::invalid_argument("p must be an odd prime >= 3");
        if (guard < 1)
            throw std::invalid_argument("guard must be positive");
        if (precision < guard + 2)
            throw std::invalid_argument("precision must be at least guard + 2");
        mpz_ui_pow_ui(pn_.get_mpz_t(), static_cast<unsigned long>(p),
                      static_cast<unsigned long>(precision));
    }

    long p() const { return p_; }
    int precision() const { return n_; }
    int guard() const { return guard_; }
    // number of low digits we are willing to certify in results
    int certified() const { return n_ - guard_; }
    const mpz_class& modulus() const { return pn_; }

    mpz_class pow_p(int k) const {
        mpz_class r;
        mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p_),
                      static_cast<unsigned long>(k));
        return r;
    }

    bool operator==(const padic_context& o) const {
        return p_ == o.p_ && n_ == o.n_ && guard_ == o.guard_;
    }
    bool operator!=(const padic_context& o) const { return !(*this == o); }

private:
    long p_;
    int n_;
    int guard_;
    mpz_class pn_;
};

inline void check_same_context(const padic_context& a, const padic_context& b) {
    if (a != b)
        throw context_mismatch("operands belong to different p-adic contexts");
}

// Valuation of a residue known mod p^N.  `exact` distinguishes a measured
// value from the lower bound reported for the zero residue.
struct valuation {
    int v = 0;
    bool exact = true;

    static valuation exactly(int value) { return {value, true}; }
    static valuation at_least(int bound) { return {bound, false}; }

    bool operator==(const valuation& o) const { return v == o.v && exact == o.exact; }
    bool operator!=(const valuation& o) const { return !(*this == o); }
};

class padic_int {
public:
    padic_int(const padic_context& ctx, mpz_class value) : ctx_(&ctx), r_(std::move(value)) {
        reduce();
    }
    padic_int(const padic_context& ctx, long value) : padic_int(ctx, mpz_class(value)) {}

    static padic_int zero(const padic_context& ctx) { return padic_int(ctx, 0); }
    static padic_int one(const padic_context& ctx) { return padic_int(ctx, 1); }

    const padic_context& context() const { return *ctx_; }
    const mpz_class& residue() const { return r_; }

    // representative in (-p^N/2, p^N/2], convenient for display
    mpz_class balanced() const {
        mpz_class half = ctx_->modulus() / 2;
        return r_ > half ? mpz_class(r_ - ctx_->modulus()) : r_;
    }

    bool is_zero() const { return r_ == 0; }
    bool is_unit() const { return r_ != 0 && !mpz_divisible_ui_p(r_.get_mpz_t(), ctx_->p()); }

    valuation val() const {
        if (r_ == 0) return valuation::at_least(ctx_->precision());
        mpz_class t = r_;
        int v = 0;
        while (mpz_divisible_ui_p(t.get_mpz_t(), ctx_->p())) {
            mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), ctx_->p());
            ++v;
        }
        return valuation::exactly(v);
    }

    padic_int operator-() const {
        return padic_int(*ctx_, r_ == 0 ? mpz_class(0) : mpz_class(ctx_->modulus() - r_));
    }

    padic_int& operator+=(const padic_int& o) {
        check_same_context(*ctx_, *o.ctx_);
        r_ += o.r_;
        if (r_ >= ctx_->modulus()) r_ -= ctx_->modulus();
        return *this;
    }
    padic_int& operator-=(const padic_int& o) {
        check_same_context(*ctx_, *o.ctx_);
        r_ -= o.r_;
        if (r_ < 0) r_ += ctx_->modulus();
        return *this;
    }
    padic_int& operator*=(const padic_int& o) {
        check_same_context(*ctx_, *o.ctx_);
        r_ *= o.r_;
        mpz_fdiv_r(r_.get_mpz_t(), r_.get_mpz_t(), ctx_->modulus().get_mpz_t());
        return *this;
    }

    friend padic_int operator+(padic_int a, const padic_int& b) { return a += b; }
    friend padic_int operator-(padic_int a, const padic_int& b) { return a -= b; }
    friend padic_int operator*(padic_int a, const padic_int& b) { return a *= b; }

    padic_int inv() const {
        mpz_class out;
        if (!mpz_invert(out.get_mpz_t(), r_.get_mpz_t(), ctx_->modulus().get_mpz_t()))
            throw not_a_unit("residue " + r_.get_str() + " is not a unit mod " +
                             std::to_string(ctx_->p()) + "^" + std::to_string(ctx_->precision()));
        return padic_int(*ctx_, out);
    }

    padic_int pow(unsigned long e) const {
        mpz_class out;
        mpz_powm_ui(out.get_mpz_t(), r_.get_mpz_t(), e, ctx_->modulus().get_mpz_t());
        return padic_int(*ctx_, out);
    }

    // exact division by p^k; caller guarantees val() >= k
    padic_int shift_down(int k) const {
        if (k == 0) return *this;
        mpz_class pk = ctx_->pow_p(k);
        if (!mpz_divisible_p(r_.get_mpz_t(), pk.get_mpz_t()))
            throw not_a_unit("residue not divisible by p^" + std::to_string(k));
        mpz_class out;
        mpz_divexact(out.get_mpz_t(), r_.get_mpz_t(), pk.get_mpz_t());
        return padic_int(*ctx_, out);
    }

    bool operator==(const padic_int& o) const {
        check_same_context(*ctx_, *o.ctx_);
        return r_ == o.r_;
    }
    bool operator!=(const padic_int& o) const { return !(*this == o); }

private:
    void reduce() {
        mpz_fdiv_r(r_.get_mpz_t(), r_.get_mpz_t(), ctx_->modulus().get_mpz_t());
    }

    const padic_context* ctx_;
    mpz_class r_;
};

// Outcome of a cardinality computation: a certified exact power of p, a
// witnessed infinite answer, or an honest refusal.
struct cardinality {
    enum class kind { finite, infinite, undetermined };

    kind k = kind::undetermined;
    long exponent = 0;        // meaningful for finite only: cardinality is p^exponent
    std::string note;         // witness (infinite) or reason (undetermined)

    static cardinality finite(long v) { return {kind::finite, v, {}}; }
    static cardinality infinite(std::string witness) {
        return {kind::infinite, 0, std::move(witness)};
    }
    static cardinality undetermined(std::string reason) {
        return {kind::undetermined, 0, std::move(reason)};
    }

    // Finite answers are only certified while the exponent stays clear of the
    // guard window; beyond it the honest answer is "undetermined".
    static cardinality certified_finite(long v, const padic_context& ctx) {
        if (v >= ctx.certified())
            return undetermined("exponent " + std::to_string(v) +
                                " reaches the precision guard window (certified digits: " +
                                std::to_string(ctx.certified()) + ")");
        return finite(v);
    }

    bool is_finite() const { return k == kind::finite; }
    bool is_infinite() const { return k == kind::infinite; }
    bool is_undetermined() const { return k == kind::undetermined; }
    bool determinate() const { return k != kind::undetermined; }

    bool operator==(const cardinality& o) const {
        return k == o.k && (k != kind::finite || exponent == o.exponent);
    }
    bool operator!=(const cardinality& o) const { return !(*this == o); }
};

}  // namespace iwa
