#ifndef BQRAY_FIELDS_HPP
#define BQRAY_FIELDS_HPP

/*
 * Exact arithmetic in quadratic and imaginary biquadratic orders.
 *
 * Conventions, fixed once for the whole library:
 *   K = Q(sqrt(-d1), sqrt(-d2)) with d1 = 3 (mod 4), d2 = 1,2 (mod 4),
 *   gcd(d1,d2) = 1 and d1, d2 squarefree.  Subfields:
 *     K1 = Q(sqrt(-d1)),  theta1 = (-1+sqrt(-d1))/2,  X^2 + X + (1+d1)/4
 *     K2 = Q(sqrt(-d2)),  theta2 = sqrt(-d2),         X^2 + d2
 *     K3 = Q(sqrt(d1*d2)) real, with O_{K3} = Z[sqrt(d1*d2)].
 *   O_K = { (a + b*sqrt(-d1) + c*sqrt(-d2) + d*sqrt(d1*d2)) / 2 :
 *           a = b (mod 2), c = d (mod 2) }.
 *
 * Basis products (s1 = sqrt(-d1), s2 = sqrt(-d2), s3 = sqrt(d1*d2)):
 *   s1^2 = -d1, s2^2 = -d2, s3^2 = d1*d2,
 *   s1*s2 = -s3, s1*s3 = d1*s2, s2*s3 = d2*s1.
 */

#include <array>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "bqray/errors.hpp"

namespace bqray {

inline bool is_squarefree(long n)
{
    if (n <= 0) {
        return false;
    }
    for (long q = 2; q * q <= n; ++q) {
        if (n % (q * q) == 0) {
            return false;
        }
    }
    return true;
}

inline long gcd_long(long a, long b) { return std::gcd(a, b); }

struct QuadraticField {
    long d = 0;            // |d| squarefree
    bool imaginary = true; // imaginary: Q(sqrt(-d)); real: Q(sqrt(d))
    long B_theta = 0;      // theta^2 + B*theta + C = 0 (imaginary case)
    long C_theta = 0;

    static QuadraticField imaginary_field(long d)
    {
        if (d < 1 || !is_squarefree(d)) {
            throw hypothesis_error("imaginary quadratic field needs squarefree d >= 1, got d=" + std::to_string(d));
        }
        QuadraticField f;
        f.d = d;
        f.imaginary = true;
        long md = ((-d) % 4 + 4) % 4;
        if (md == 1) { // theta = (-1+sqrt(-d))/2
            f.B_theta = 1;
            f.C_theta = (1 + d) / 4;
        } else { // -d = 2,3 (mod 4), theta = sqrt(-d)
            f.B_theta = 0;
            f.C_theta = d;
        }
        return f;
    }

    static QuadraticField real_field(long delta)
    {
        if (delta < 2) {
            throw hypothesis_error("real quadratic field needs delta >= 2");
        }
        QuadraticField f;
        f.d = delta;
        f.imaginary = false;
        return f;
    }

    // true when -d = 1 (mod 4), i.e. theta is the half-trace root.
    bool half_trace() const { return imaginary && B_theta == 1; }
};

/* ---------------- fundamental units ---------------- */

struct FundamentalUnit {
    mpz_class x, y; // eps = x + y*sqrt(delta)
    int norm = 1;   // x^2 - delta*y^2
};

// Smallest unit > 1 of Z[sqrt(delta)], by the continued fraction of
// sqrt(delta) (the classical PQa recursion, exact integers throughout).
inline FundamentalUnit fundamental_unit(long delta)
{
    if (delta <= 1 || !is_squarefree(delta)) {
        throw hypothesis_error("fundamental_unit: delta must be squarefree > 1");
    }
    mpz_class D(delta);
    mpz_class a0 = sqrt(D);
    if (a0 * a0 == D) {
        throw internal_error("fundamental_unit: perfect square slipped through");
    }
    mpz_class P = 0, Q = 1, a = a0;
    mpz_class p_prev = 1, p_cur = a0; // convergent numerators
    mpz_class q_prev = 0, q_cur = 1; // convergent denominators
    for (int i = 1; i < 100000; ++i) {
        P = a * Q - P;
        Q = (D - P * P) / Q;
        a = (a0 + P) / Q;
        if (Q == 1) {
            // period boundary: p_cur + q_cur*sqrt(D) is the fundamental unit
            FundamentalUnit u;
            u.x = p_cur;
            u.y = q_cur;
            mpz_class n = u.x * u.x - D * u.y * u.y;
            u.norm = (n == 1) ? 1 : -1;
            if (n != 1 && n != -1) {
                throw internal_error("fundamental_unit: convergent is not a unit");
            }
            return u;
        }
        mpz_class p_next = a * p_cur + p_prev;
        mpz_class q_next = a * q_cur + q_prev;
        p_prev = p_cur;
        p_cur = p_next;
        q_prev = q_cur;
        q_cur = q_next;
    }
    throw internal_error("fundamental_unit: period not found");
}

/* ---------------- imaginary class numbers ---------------- */

// Class number of Q(sqrt(-d)) by exhaustive enumeration of reduced
// primitive forms (a,b,c) of the field discriminant:
//   -a < b <= a <= c, b >= 0 when a == c, gcd(a,b,c) = 1.
inline long class_number_imaginary(long d)
{
    if (d < 1 || !is_squarefree(d)) {
        throw hypothesis_error("class_number_imaginary: d must be squarefree >= 1");
    }
    long D = (((-d) % 4 + 4) % 4 == 1) ? -d : -4 * d;
    long count = 0;
    for (long a = 1; 3 * a * a <= -D; ++a) {
        for (long b = -a + 1; b <= a; ++b) {
            long num = b * b - D;
            if (num % (4 * a) != 0) {
                continue;
            }
            long c = num / (4 * a);
            if (c < a) {
                continue;
            }
            if (a == c && b < 0) {
                continue;
            }
            if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) {
                continue;
            }
            ++count;
        }
    }
    return count;
}

/* ---------------- the field tower ---------------- */

struct FieldTower {
    long d1 = 0, d2 = 0;
    QuadraticField K1, K2, K3;
    mpz_class eps_x, eps_y; // fundamental unit eps0 = eps_x + eps_y*sqrt(d1*d2), norm 1
    long h1 = 0, h2 = 0;    // computed
    long h3 = 0;            // user-supplied (0 = not supplied)
    long Q = 0;             // unit index Q(K) in {1,2} (0 = not supplied)

    long delta() const { return d1 * d2; }

    long require_h3() const
    {
        if (h3 <= 0) {
            throw hypothesis_error("h3 (class number of K3) was not supplied for this tower");
        }
        return h3;
    }
    long require_Q() const
    {
        if (Q != 1 && Q != 2) {
            throw hypothesis_error("Q(K) was not supplied for this tower");
        }
        return Q;
    }
};

namespace detail {

struct TowerDefaults {
    long d1, d2, Q, h3; // h3 = 0 when unknown
};

// Q(K) values for the fields listed in the paper's tables of biquadratic
// fields with Q*h1*h2 = 2, plus the towers used in the worked examples.
inline const std::vector<TowerDefaults> &tower_defaults()
{
    static const std::vector<TowerDefaults> t = [] {
        std::vector<TowerDefaults> v;
        for (long n : {7L, 11L, 19L, 43L, 67L, 163L}) {
            v.push_back({n, 2, 2, 0});
        }
        v.push_back({31, 2, 2, 1});  // worked example field
        for (long n : {15L, 35L, 91L, 115L, 403L}) {
            v.push_back({n, 2, 1, 0});
        }
        for (long n : {5L, 10L, 13L}) {
            v.push_back({7, n, 1, 0});
        }
        for (long n : {6L, 13L, 58L}) {
            v.push_back({11, n, 1, 0});
        }
        for (long n : {6L, 13L, 37L, 58L}) {
            v.push_back({19, n, 1, 0});
        }
        for (long n : {5L, 6L, 10L, 22L, 37L, 58L}) {
            v.push_back({43, n, 1, 0});
        }
        for (long n : {5L, 6L, 10L, 13L, 22L}) {
            v.push_back({67, n, 1, 0});
        }
        for (long n : {5L, 6L, 10L, 13L, 22L, 37L, 58L}) {
            v.push_back({163, n, 1, 0});
        }
        v[0].h3 = 1;                 // (7,2): h(Q(sqrt(14))) = 1
        v.push_back({15, 26, 1, 2}); // worked example field, h(Q(sqrt(390))) = 2
        return v;
    }();
    return t;
}

} // namespace detail

inline FieldTower make_tower(long d1, long d2,
                             std::optional<long> h3 = std::nullopt,
                             std::optional<long> Q = std::nullopt)
{
    if (d1 < 1 || !is_squarefree(d1)) {
        throw hypothesis_error("make_tower: d1 must be squarefree >= 1");
    }
    if (d2 < 1 || !is_squarefree(d2)) {
        throw hypothesis_error("make_tower: d2 must be squarefree >= 1");
    }
    if (((-d1) % 4 + 4) % 4 != 1) {
        throw hypothesis_error("make_tower: need -d1 = 1 (mod 4), violated by d1=" + std::to_string(d1));
    }
    long md2 = ((-d2) % 4 + 4) % 4;
    if (md2 != 2 && md2 != 3) {
        throw hypothesis_error("make_tower: need -d2 = 2,3 (mod 4), violated by d2=" + std::to_string(d2));
    }
    if (std::gcd(d1, d2) != 1) {
        throw hypothesis_error("make_tower: need gcd(d1,d2) = 1");
    }
    if (d1 == 3) {
        throw hypothesis_error("make_tower: K1 = Q(sqrt(-3)) is excluded");
    }
    if (d2 == 1) {
        throw hypothesis_error("make_tower: K2 = Q(sqrt(-1)) is excluded");
    }

    FieldTower t;
    t.d1 = d1;
    t.d2 = d2;
    t.K1 = QuadraticField::imaginary_field(d1);
    t.K2 = QuadraticField::imaginary_field(d2);
    t.K3 = QuadraticField::real_field(d1 * d2);

    FundamentalUnit u = fundamental_unit(d1 * d2);
    if (u.norm != 1) {
        throw internal_error("make_tower: fundamental unit has norm -1, impossible for d1 = 3 (mod 4)");
    }
    t.eps_x = u.x;
    t.eps_y = u.y;

    t.h1 = class_number_imaginary(d1);
    t.h2 = class_number_imaginary(d2);

    t.h3 = h3.value_or(0);
    t.Q = Q.value_or(0);
    if (t.h3 == 0 || t.Q == 0) {
        for (const auto &def : detail::tower_defaults()) {
            if (def.d1 == d1 && def.d2 == d2) {
                if (t.Q == 0) {
                    t.Q = def.Q;
                }
                if (t.h3 == 0) {
                    t.h3 = def.h3;
                }
                break;
            }
        }
    }
    if (t.Q != 0 && t.Q != 1 && t.Q != 2) {
        throw hypothesis_error("make_tower: Q(K) must be 1 or 2");
    }
    return t;
}

/* ---------------- elements of O_K ---------------- */

// (a + b*sqrt(-d1) + c*sqrt(-d2) + d*sqrt(d1*d2)) / 2 with the half-integer
// parity conditions a = b, c = d (mod 2).
struct OkElement {
    mpz_class a, b, c, d;
};

inline OkElement ok_element(const mpz_class &a, const mpz_class &b, const mpz_class &c, const mpz_class &d)
{
    if ((a - b) % 2 != 0 || (c - d) % 2 != 0) {
        throw hypothesis_error("OkElement: parity conditions a=b, c=d (mod 2) violated");
    }
    return OkElement{a, b, c, d};
}

// Element with integer coordinates (no halves): a + b*s1 + c*s2 + d*s3.
inline OkElement ok_whole(const mpz_class &a, const mpz_class &b, const mpz_class &c, const mpz_class &d)
{
    return ok_element(2 * a, 2 * b, 2 * c, 2 * d);
}

inline OkElement ok_mul(const FieldTower &t, const OkElement &x, const OkElement &y)
{
    const mpz_class d1(t.d1), d2(t.d2), dd(t.d1 * t.d2);
    // whole-coordinate product, then halve once (the 1/2 * 1/2 = 1/4 scale)
    mpz_class a = x.a * y.a - x.b * y.b * d1 - x.c * y.c * d2 + x.d * y.d * dd;
    mpz_class b = x.a * y.b + x.b * y.a + (x.c * y.d + x.d * y.c) * d2;
    mpz_class c = x.a * y.c + x.c * y.a + (x.b * y.d + x.d * y.b) * d1;
    mpz_class d = x.a * y.d + x.d * y.a - (x.b * y.c + x.c * y.b);
    if (a % 2 != 0 || b % 2 != 0 || c % 2 != 0 || d % 2 != 0) {
        throw internal_error("ok_mul: product not integral");
    }
    return ok_element(a / 2, b / 2, c / 2, d / 2);
}

// Galois conjugation fixing the subfield K_i.
inline OkElement ok_conj(const OkElement &x, int i)
{
    switch (i) {
    case 1:
        return OkElement{x.a, x.b, -x.c, -x.d};
    case 2:
        return OkElement{x.a, -x.b, x.c, -x.d};
    case 3:
        return OkElement{x.a, -x.b, -x.c, x.d};
    default:
        throw internal_error("ok_conj: subfield index out of range");
    }
}

// Exact coordinates of an element of O_{K_i}:
//   i = 1,2 : value = u + v*theta_i
//   i = 3   : value = u + v*sqrt(d1*d2)
struct SubfieldElement {
    int i = 0;
    mpz_class u, v;
};

inline SubfieldElement norm_to_subfield(const FieldTower &t, const OkElement &x, int i)
{
    OkElement n = ok_mul(t, x, ok_conj(x, i));
    // n has components only along {1, s_i}; in half coordinates n = (A + B*s_i)/2.
    mpz_class A = n.a, B;
    switch (i) {
    case 1:
        B = n.b;
        if (n.c != 0 || n.d != 0) {
            throw internal_error("norm_to_subfield: residue outside K1");
        }
        break;
    case 2:
        B = n.c;
        if (n.b != 0 || n.d != 0) {
            throw internal_error("norm_to_subfield: residue outside K2");
        }
        break;
    case 3:
        B = n.d;
        if (n.b != 0 || n.c != 0) {
            throw internal_error("norm_to_subfield: residue outside K3");
        }
        break;
    default:
        throw internal_error("norm_to_subfield: subfield index out of range");
    }
    SubfieldElement s;
    s.i = i;
    if (i == 1) {
        // (A + B*sqrt(-d1))/2 = (A-B)/2 + B*theta1, theta1 = (-1+sqrt(-d1))/2
        if ((A - B) % 2 != 0) {
            throw internal_error("norm_to_subfield: non-integral K1 coordinates");
        }
        s.u = (A - B) / 2;
        s.v = B;
    } else {
        // (A + B*s_i)/2 with s_i = theta2 or sqrt(d1*d2); both coords must be even
        if (A % 2 != 0 || B % 2 != 0) {
            throw internal_error("norm_to_subfield: non-integral coordinates");
        }
        s.u = A / 2;
        s.v = B / 2;
    }
    return s;
}

// N_{K/Q}(x) as an exact integer.
inline mpz_class norm_to_q(const FieldTower &t, const OkElement &x)
{
    SubfieldElement n1 = norm_to_subfield(t, x, 1);
    // N_{K1/Q}(u + v*theta1) = u^2 - B*uv... use u^2 - u*v*(-B) ... direct:
    // theta1 satisfies theta^2 + theta + C = 0, so N(u+v*theta) = u^2 - u*v + C*v^2
    // with C = (1+d1)/4 when B_theta = 1; for B_theta = 0, N = u^2 + C*v^2.
    const QuadraticField &f = t.K1;
    if (f.half_trace()) {
        return n1.u * n1.u - n1.u * n1.v + mpz_class(f.C_theta) * n1.v * n1.v;
    }
    return n1.u * n1.u + mpz_class(f.C_theta) * n1.v * n1.v;
}

/* ---------------- unit exponents ---------------- */

namespace detail {

// x + y*sqrt(delta) reduced mod m, m >= 1.
struct RealQuadMod {
    mpz_class x, y;
};

inline RealQuadMod rq_reduce(const mpz_class &x, const mpz_class &y, const mpz_class &m)
{
    mpz_class a = x % m, b = y % m;
    if (a < 0) {
        a += m;
    }
    if (b < 0) {
        b += m;
    }
    return {a, b};
}

inline RealQuadMod rq_mul(const RealQuadMod &p, const RealQuadMod &q, const mpz_class &m, long delta)
{
    return rq_reduce(p.x * q.x + mpz_class(delta) * p.y * q.y, p.x * q.y + p.y * q.x, m);
}

inline bool rq_is(const RealQuadMod &p, const mpz_class &x, const mpz_class &y, const mpz_class &m)
{
    mpz_class a = x % m, b = y % m;
    if (a < 0) {
        a += m;
    }
    if (b < 0) {
        b += m;
    }
    return p.x == a && p.y == b;
}

} // namespace detail

struct UnitExponents {
    long m0 = 1;
    int sign = 1; // eps0' = sign * eps0^m0
    long n0 = 0;  // order of eps0' mod Np*O_K
    long l0 = 0;  // order of eps0 mod Np*O_K
    long mu0 = 0; // max mu with eps0^l0 = 1 mod Np^mu*O_K
    long alpha0_mod_p = 0, beta0_mod_p = 0;
};

// m0, eps0', n0, l0, mu0 and (alpha0, beta0) mod p for the tower unit,
// all by exact modular exponentiation in O_{K3}/m = (Z/m)[sqrt(d1*d2)].
// Congruence mod m*O_K for elements of O_{K3} is coordinatewise mod m.
inline UnitExponents unit_exponents(const FieldTower &t, long N, long p)
{
    if (N < 1 || p < 3 || p % 2 == 0 || std::gcd(N, p) != 1) {
        throw hypothesis_error("unit_exponents: need N >= 1, odd prime p, gcd(N,p)=1");
    }
    const long delta = t.delta();
    UnitExponents ue;

    // m0: smallest k with eps0^k = +-1 (mod N)
    if (N == 1) {
        ue.m0 = 1;
        ue.sign = 1;
    } else {
        mpz_class mN(N);
        detail::RealQuadMod e = detail::rq_reduce(t.eps_x, t.eps_y, mN);
        detail::RealQuadMod acc = e;
        long bound = 8 * N * N + 16;
        ue.m0 = 0;
        for (long k = 1; k <= bound; ++k) {
            if (detail::rq_is(acc, 1, 0, mN)) {
                ue.m0 = k;
                ue.sign = 1;
                break;
            }
            if (detail::rq_is(acc, -1, 0, mN)) {
                ue.m0 = k;
                ue.sign = -1;
                break;
            }
            acc = detail::rq_mul(acc, e, mN, delta);
        }
        if (ue.m0 == 0) {
            throw internal_error("unit_exponents: m0 search bound exceeded");
        }
    }

    // n0: order of eps0' mod Np; l0: order of eps0 mod Np
    mpz_class mNp(N);
    mNp *= p;
    detail::RealQuadMod e = detail::rq_reduce(t.eps_x, t.eps_y, mNp);
    // eps0' = sign * eps0^m0
    detail::RealQuadMod ep = detail::rq_reduce(1, 0, mNp);
    for (long k = 0; k < ue.m0; ++k) {
        ep = detail::rq_mul(ep, e, mNp, delta);
    }
    if (ue.sign < 0) {
        ep = detail::rq_reduce(-ep.x, -ep.y, mNp);
    }
    long bound = 16 * N * N * p * p + 16;
    auto order_of = [&](const detail::RealQuadMod &g) -> long {
        detail::RealQuadMod acc = g;
        for (long k = 1; k <= bound; ++k) {
            if (detail::rq_is(acc, 1, 0, mNp)) {
                return k;
            }
            acc = detail::rq_mul(acc, g, mNp, delta);
        }
        throw internal_error("unit_exponents: order search bound exceeded");
    };
    ue.n0 = order_of(ep);
    ue.l0 = order_of(e);

    // mu0: largest mu with eps0^l0 = 1 (mod Np^mu)
    ue.mu0 = 1;
    for (;;) {
        mpz_class m(N);
        mpz_class pk;
        mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(ue.mu0 + 1));
        m *= pk;
        detail::RealQuadMod base = detail::rq_reduce(t.eps_x, t.eps_y, m);
        detail::RealQuadMod acc = detail::rq_reduce(1, 0, m);
        long k = ue.l0;
        detail::RealQuadMod sq = base;
        while (k > 0) {
            if (k & 1) {
                acc = detail::rq_mul(acc, sq, m, delta);
            }
            k >>= 1;
            if (k > 0) {
                sq = detail::rq_mul(sq, sq, m, delta);
            }
        }
        if (!detail::rq_is(acc, 1, 0, m)) {
            // acc = 1 + Np^mu0*(alpha0 + beta0*sqrt(delta)) mod Np^(mu0+1)
            mpz_class scale(N);
            mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(ue.mu0));
            scale *= pk;
            mpz_class du = acc.x - 1, dv = acc.y;
            if (du % scale != 0 || dv % scale != 0) {
                throw internal_error("unit_exponents: mu0 bookkeeping failed");
            }
            mpz_class al = (du / scale) % p, be = (dv / scale) % p;
            if (al < 0) {
                al += p;
            }
            if (be < 0) {
                be += p;
            }
            ue.alpha0_mod_p = al.get_si();
            ue.beta0_mod_p = be.get_si();
            break;
        }
        ++ue.mu0;
        if (ue.mu0 > 64) {
            throw internal_error("unit_exponents: mu0 search bound exceeded");
        }
    }
    // p | alpha0 and p does not divide beta0 are forced by N(eps0) = 1
    if (ue.alpha0_mod_p != 0) {
        throw internal_error("unit_exponents: expected p | alpha0");
    }
    if (ue.beta0_mod_p == 0) {
        throw internal_error("unit_exponents: expected p does not divide beta0");
    }
    return ue;
}

// h_K = Q(K)*h1*h2*h3 / 2, asserted integral.
inline mpz_class biquad_class_number(const FieldTower &t)
{
    mpz_class num = mpz_class(t.require_Q()) * t.h1 * t.h2 * t.require_h3();
    if (num % 2 != 0) {
        throw hypothesis_error("biquad_class_number: Q*h1*h2*h3 is odd, hypothesis violated");
    }
    return num / 2;
}

} // namespace bqray

#endif
