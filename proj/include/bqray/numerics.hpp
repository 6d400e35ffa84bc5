#ifndef BQRAY_NUMERICS_HPP
#define BQRAY_NUMERICS_HPP

/*
 * Arbitrary-precision real and complex arithmetic on top of MPFR.
 *
 * Values carry their own precision (in bits); binary operations round to
 * the larger of the two operand precisions.  The exponent range is widened
 * to the library maximum once at startup so that magnitudes far beyond
 * 10^(10^7) never saturate silently; an overflow to infinity throws.
 *
 * Error contract: every primitive operation is correctly rounded by MPFR
 * (relative error <= 2^(1-P)).  Composite helpers such as e_of() document
 * a small guard budget on top of that.
 */

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include <gmpxx.h>
#include <mpfr.h>

#include "bqray/errors.hpp"

namespace bqray {

inline constexpr long kDefaultPrec = 512;

namespace detail {
inline void init_exponent_range()
{
    static const bool done = [] {
        mpfr_set_emin(mpfr_get_emin_min());
        mpfr_set_emax(mpfr_get_emax_max());
        return true;
    }();
    (void)done;
}
} // namespace detail

class BigReal
{
    mpfr_t v_;

public:
    explicit BigReal(long prec = kDefaultPrec)
    {
        detail::init_exponent_range();
        if (prec < MPFR_PREC_MIN) {
            throw internal_error("BigReal: precision below MPFR minimum");
        }
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    BigReal(const BigReal &o)
    {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    BigReal(BigReal &&o) noexcept
    {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }
    BigReal &operator=(const BigReal &o)
    {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    BigReal &operator=(BigReal &&o) noexcept
    {
        if (this != &o) {
            mpfr_swap(v_, o.v_);
        }
        return *this;
    }
    ~BigReal() { mpfr_clear(v_); }

    static BigReal of(long x, long prec = kDefaultPrec)
    {
        BigReal r(prec);
        mpfr_set_si(r.v_, x, MPFR_RNDN);
        return r;
    }
    static BigReal of(const mpz_class &x, long prec = kDefaultPrec)
    {
        BigReal r(prec);
        mpfr_set_z(r.v_, x.get_mpz_t(), MPFR_RNDN);
        return r;
    }
    static BigReal of_str(const std::string &s, long prec = kDefaultPrec)
    {
        BigReal r(prec);
        if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0) {
            throw internal_error("BigReal: unparsable literal '" + s + "'");
        }
        return r;
    }
    // num/den as an exactly represented quotient, rounded once.
    static BigReal ratio(const mpz_class &num, const mpz_class &den, long prec)
    {
        BigReal r(prec);
        mpq_class q(num, den);
        q.canonicalize();
        mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
        return r;
    }

    mpfr_srcptr raw() const { return v_; }
    mpfr_ptr raw() { return v_; }
    long prec() const { return mpfr_get_prec(v_); }

    BigReal with_prec(long prec) const
    {
        BigReal r(prec);
        mpfr_set(r.v_, v_, MPFR_RNDN);
        return r;
    }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    void check_finite(const char *where) const
    {
        if (!is_finite()) {
            throw overflow_error(std::string(where) + ": exponent range overflow");
        }
    }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    friend BigReal operator+(const BigReal &a, const BigReal &b)
    {
        BigReal r(std::max(a.prec(), b.prec()));
        mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal operator-(const BigReal &a, const BigReal &b)
    {
        BigReal r(std::max(a.prec(), b.prec()));
        mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal operator*(const BigReal &a, const BigReal &b)
    {
        BigReal r(std::max(a.prec(), b.prec()));
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
        r.check_finite("BigReal::mul");
        return r;
    }
    friend BigReal operator/(const BigReal &a, const BigReal &b)
    {
        BigReal r(std::max(a.prec(), b.prec()));
        mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
        r.check_finite("BigReal::div");
        return r;
    }
    BigReal operator-() const
    {
        BigReal r(prec());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }

    friend bool operator<(const BigReal &a, const BigReal &b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator>(const BigReal &a, const BigReal &b) { return mpfr_cmp(a.v_, b.v_) > 0; }
    friend bool operator<=(const BigReal &a, const BigReal &b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
    friend bool operator>=(const BigReal &a, const BigReal &b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
    friend bool operator==(const BigReal &a, const BigReal &b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

    friend BigReal abs(const BigReal &a)
    {
        BigReal r(a.prec());
        mpfr_abs(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal sqrt(const BigReal &a)
    {
        BigReal r(a.prec());
        mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    // Nearest integer together with the signed residual v - round(v).
    std::pair<mpz_class, BigReal> nearest_int() const
    {
        BigReal rounded(prec());
        mpfr_rint(rounded.v_, v_, MPFR_RNDN);
        mpz_class z;
        mpfr_get_z(z.get_mpz_t(), rounded.v_, MPFR_RNDN);
        BigReal resid(prec());
        mpfr_sub_z(resid.v_, v_, z.get_mpz_t(), MPFR_RNDN);
        return {z, resid};
    }

    // 2^e as a cheap magnitude bound/threshold.
    static BigReal pow2(long e, long prec = 64)
    {
        BigReal r(prec);
        mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
        return r;
    }

    // Scientific decimal form with the given number of significant digits.
    std::string to_sci(int digits = 8) const
    {
        char *s = nullptr;
        if (mpfr_asprintf(&s, "%.*Re", digits - 1, v_) < 0) {
            throw internal_error("BigReal::to_sci: mpfr_asprintf failed");
        }
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }
};

class BigComplex
{
    BigReal re_, im_;

public:
    explicit BigComplex(long prec = kDefaultPrec) : re_(prec), im_(prec) {}
    BigComplex(BigReal re, BigReal im) : re_(std::move(re)), im_(std::move(im)) {}

    static BigComplex of(long re, long im, long prec = kDefaultPrec)
    {
        return BigComplex(BigReal::of(re, prec), BigReal::of(im, prec));
    }

    const BigReal &re() const { return re_; }
    const BigReal &im() const { return im_; }
    long prec() const { return std::max(re_.prec(), im_.prec()); }

    BigComplex with_prec(long prec) const { return BigComplex(re_.with_prec(prec), im_.with_prec(prec)); }

    friend BigComplex operator+(const BigComplex &a, const BigComplex &b)
    {
        return BigComplex(a.re_ + b.re_, a.im_ + b.im_);
    }
    friend BigComplex operator-(const BigComplex &a, const BigComplex &b)
    {
        return BigComplex(a.re_ - b.re_, a.im_ - b.im_);
    }
    friend BigComplex operator*(const BigComplex &a, const BigComplex &b)
    {
        return BigComplex(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
    }
    friend BigComplex operator*(const BigReal &a, const BigComplex &b)
    {
        return BigComplex(a * b.re_, a * b.im_);
    }
    BigComplex operator-() const { return BigComplex(-re_, -im_); }

    friend BigComplex conj(const BigComplex &a) { return BigComplex(a.re_, -a.im_); }

    friend BigReal abs2(const BigComplex &a) { return a.re_ * a.re_ + a.im_ * a.im_; }
    friend BigReal abs(const BigComplex &a) { return sqrt(abs2(a)); }

    friend BigComplex inv(const BigComplex &a)
    {
        BigReal n = abs2(a);
        if (n.is_zero()) {
            throw internal_error("BigComplex::inv: division by zero");
        }
        return BigComplex(a.re_ / n, -(a.im_ / n));
    }
    friend BigComplex operator/(const BigComplex &a, const BigComplex &b) { return a * inv(b); }
};

// e(z) = exp(2*pi*i*z).  Relative error <= 2^(8-prec): one exp, one sin/cos
// pair and a handful of correctly rounded multiplies at prec+32 guard bits.
inline BigComplex e_of(const BigComplex &z, long prec)
{
    if (prec < 64) {
        throw hypothesis_error("e_of: prec must be >= 64");
    }
    const long wp = prec + 32;
    BigReal two_pi(wp);
    mpfr_const_pi(two_pi.raw(), MPFR_RNDN);
    mpfr_mul_ui(two_pi.raw(), two_pi.raw(), 2, MPFR_RNDN);

    // |e(z)| = exp(-2*pi*Im z)
    BigReal mag(wp);
    mpfr_mul(mag.raw(), two_pi.raw(), z.im().raw(), MPFR_RNDN);
    mpfr_neg(mag.raw(), mag.raw(), MPFR_RNDN);
    mpfr_exp(mag.raw(), mag.raw(), MPFR_RNDN);
    mag.check_finite("e_of");

    BigReal arg(wp), c(wp), s(wp);
    mpfr_mul(arg.raw(), two_pi.raw(), z.re().raw(), MPFR_RNDN);
    mpfr_sin_cos(s.raw(), c.raw(), arg.raw(), MPFR_RNDN);
    return BigComplex(mag * c, mag * s).with_prec(prec);
}

// e(num/den) for an exact rational argument, i.e. a root of unity when the
// ratio is rational in lowest terms.  The argument is reduced mod 1 exactly
// before any rounding happens.
inline BigComplex e_of_ratio(const mpz_class &num, const mpz_class &den, long prec)
{
    if (den == 0) {
        throw internal_error("e_of_ratio: zero denominator");
    }
    mpq_class q(num, den);
    q.canonicalize();
    mpz_class whole = q.get_num() / q.get_den();
    mpq_class frac = q - mpq_class(whole); // in (-1,1)

    const long wp = prec + 32;
    BigReal arg(wp);
    mpfr_set_q(arg.raw(), frac.get_mpq_t(), MPFR_RNDN);
    BigReal two_pi(wp);
    mpfr_const_pi(two_pi.raw(), MPFR_RNDN);
    mpfr_mul_ui(two_pi.raw(), two_pi.raw(), 2, MPFR_RNDN);
    BigReal c(wp), s(wp);
    mpfr_mul(arg.raw(), arg.raw(), two_pi.raw(), MPFR_RNDN);
    mpfr_sin_cos(s.raw(), c.raw(), arg.raw(), MPFR_RNDN);
    return BigComplex(c, s).with_prec(prec);
}

// z^k by binary exponentiation, k >= 0.  Relative error grows linearly in
// the number of multiplies, i.e. O(log k) ulp.
inline BigComplex pow_int(const BigComplex &z, unsigned long k)
{
    BigComplex acc = BigComplex::of(1, 0, z.prec());
    BigComplex base = z;
    while (k > 0) {
        if (k & 1UL) {
            acc = acc * base;
        }
        k >>= 1UL;
        if (k > 0) {
            base = base * base;
        }
    }
    acc.re().check_finite("pow_int");
    acc.im().check_finite("pow_int");
    return acc;
}

} // namespace bqray

#endif
