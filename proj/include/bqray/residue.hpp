#ifndef BQRAY_RESIDUE_HPP
#define BQRAY_RESIDUE_HPP

/*
 * Exact computation in the finite quotient rings (O/nO)^x of quadratic and
 * imaginary biquadratic orders, for odd n: unit-group orders, Pell conics,
 * norm maps, the norm-condition subgroup lattice of (O_K/pO_K)^x and the
 * closed-form extension-degree tables it induces, and the Artin elements
 * acting on Siegel indices.
 *
 * For odd n, 2 is invertible and every class of O_K/nO_K has a unique
 * representative a + b*sqrt(-d1) + c*sqrt(-d2) + d*sqrt(d1*d2) with integer
 * coordinates mod n; all arithmetic below uses that representation.
 */

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bqray/fields.hpp"

namespace bqray {

/* ---------------- small modular helpers ---------------- */

inline long mod_reduce(long long x, long m)
{
    long r = static_cast<long>(x % m);
    return r < 0 ? r + m : r;
}

inline long mul_mod(long a, long b, long m)
{
    return static_cast<long>(static_cast<__int128>(a) * b % m);
}

inline long pow_mod(long a, long e, long m)
{
    a = mod_reduce(a, m);
    long r = 1 % m;
    while (e > 0) {
        if (e & 1L) {
            r = mul_mod(r, a, m);
        }
        e >>= 1L;
        if (e > 0) {
            a = mul_mod(a, a, m);
        }
    }
    return r;
}

inline long inv_mod(long a, long m)
{
    long t = 0, nt = 1, r = m, nr = mod_reduce(a, m);
    while (nr != 0) {
        long q = r / nr;
        long tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) {
        throw hypothesis_error("inv_mod: " + std::to_string(a) + " not invertible mod " + std::to_string(m));
    }
    return mod_reduce(t, m);
}

// Legendre symbol (a/p) for an odd prime p.
inline int legendre(long a, long p)
{
    long r = pow_mod(mod_reduce(a, p), (p - 1) / 2, p);
    if (r == 0) {
        return 0;
    }
    return r == 1 ? 1 : -1;
}

inline std::vector<long> distinct_prime_factors(long n)
{
    std::vector<long> out;
    for (long q = 2; q * q <= n; ++q) {
        if (n % q == 0) {
            out.push_back(q);
            while (n % q == 0) {
                n /= q;
            }
        }
    }
    if (n > 1) {
        out.push_back(n);
    }
    return out;
}

// Smallest nonnegative square root of a mod p; throws on a non-residue.
inline long sqrt_mod(long a, long p)
{
    a = mod_reduce(a, p);
    for (long x = 0; x <= p / 2; ++x) {
        if (mul_mod(x, x, p) == a) {
            return x;
        }
    }
    throw hypothesis_error("sqrt_mod: " + std::to_string(a) + " is not a square mod " + std::to_string(p));
}

// Smallest primitive root mod an odd prime p.
inline long primitive_root(long p)
{
    std::vector<long> qs = distinct_prime_factors(p - 1);
    for (long g = 2; g < p; ++g) {
        bool ok = true;
        for (long q : qs) {
            if (pow_mod(g, (p - 1) / q, p) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) {
            return g;
        }
    }
    throw internal_error("primitive_root: none found (p not prime?)");
}

/* ---------------- O_K / nO_K ---------------- */

struct ResidueElement {
    long n = 0;          // modulus
    long a = 0, b = 0, c = 0, d = 0; // coords in {1, s1, s2, s3}
};

class BiquadResidueRing
{
    long n_, d1_, d2_;

public:
    BiquadResidueRing(const FieldTower &t, long n) : n_(n), d1_(t.d1 % n), d2_(t.d2 % n)
    {
        if (n < 3 || n % 2 == 0) {
            throw hypothesis_error("BiquadResidueRing: modulus must be odd and >= 3");
        }
    }

    long modulus() const { return n_; }

    ResidueElement make(long a, long b, long c, long d) const
    {
        return ResidueElement{n_, mod_reduce(a, n_), mod_reduce(b, n_), mod_reduce(c, n_), mod_reduce(d, n_)};
    }
    ResidueElement make(const mpz_class &a, const mpz_class &b, const mpz_class &c, const mpz_class &d) const
    {
        mpz_class m(n_);
        auto red = [&](const mpz_class &x) {
            mpz_class r = x % m;
            if (r < 0) {
                r += m;
            }
            return r.get_si();
        };
        return ResidueElement{n_, red(a), red(b), red(c), red(d)};
    }
    ResidueElement one() const { return make(1, 0, 0, 0); }

    // Image of the OkElement (half coordinates) in O_K/n.
    ResidueElement from_ok(const OkElement &x) const
    {
        long half = inv_mod(2, n_);
        ResidueElement w = make(x.a, x.b, x.c, x.d);
        return make(mul_mod(w.a, half, n_), mul_mod(w.b, half, n_), mul_mod(w.c, half, n_), mul_mod(w.d, half, n_));
    }

    ResidueElement mul(const ResidueElement &x, const ResidueElement &y) const
    {
        check(x);
        check(y);
        long long dd = static_cast<long long>(d1_) * d2_ % n_;
        long a = mod_reduce(static_cast<long long>(x.a) * y.a - static_cast<long long>(x.b) * y.b % n_ * d1_
                                - static_cast<long long>(x.c) * y.c % n_ * d2_
                                + static_cast<long long>(x.d) * y.d % n_ * dd,
                            n_);
        long b = mod_reduce(static_cast<long long>(x.a) * y.b + static_cast<long long>(x.b) * y.a
                                + (static_cast<long long>(x.c) * y.d + static_cast<long long>(x.d) * y.c) % n_ * d2_,
                            n_);
        long c = mod_reduce(static_cast<long long>(x.a) * y.c + static_cast<long long>(x.c) * y.a
                                + (static_cast<long long>(x.b) * y.d + static_cast<long long>(x.d) * y.b) % n_ * d1_,
                            n_);
        long d = mod_reduce(static_cast<long long>(x.a) * y.d + static_cast<long long>(x.d) * y.a
                                - (static_cast<long long>(x.b) * y.c + static_cast<long long>(x.c) * y.b),
                            n_);
        return ResidueElement{n_, a, b, c, d};
    }

    ResidueElement pow(ResidueElement x, long e) const
    {
        ResidueElement r = one();
        while (e > 0) {
            if (e & 1L) {
                r = mul(r, x);
            }
            e >>= 1L;
            if (e > 0) {
                x = mul(x, x);
            }
        }
        return r;
    }

    ResidueElement conj(const ResidueElement &x, int i) const
    {
        switch (i) {
        case 1:
            return make(x.a, x.b, -x.c, -x.d);
        case 2:
            return make(x.a, -x.b, x.c, -x.d);
        case 3:
            return make(x.a, -x.b, -x.c, x.d);
        default:
            throw internal_error("BiquadResidueRing::conj: bad subfield index");
        }
    }

    // N_{K/K_i}(x) as the pair (u, v): u + v*s_i with s_1 = sqrt(-d1),
    // s_2 = sqrt(-d2), s_3 = sqrt(d1*d2).
    std::pair<long, long> norm_sub(const ResidueElement &x, int i) const
    {
        ResidueElement n = mul(x, conj(x, i));
        switch (i) {
        case 1:
            if (n.c != 0 || n.d != 0) {
                throw internal_error("norm_sub: residue outside K1");
            }
            return {n.a, n.b};
        case 2:
            if (n.b != 0 || n.d != 0) {
                throw internal_error("norm_sub: residue outside K2");
            }
            return {n.a, n.c};
        case 3:
            if (n.b != 0 || n.c != 0) {
                throw internal_error("norm_sub: residue outside K3");
            }
            return {n.a, n.d};
        default:
            throw internal_error("norm_sub: bad subfield index");
        }
    }

    // N_{K/Q}(x) mod n.
    long norm_q(const ResidueElement &x) const
    {
        auto [u, v] = norm_sub(x, 3); // u + v*sqrt(d1*d2)
        long dd = mod_reduce(static_cast<long long>(d1_) * d2_, n_);
        return mod_reduce(static_cast<long long>(u) * u - static_cast<long long>(v) * v % n_ * dd, n_);
    }

    bool is_one(const ResidueElement &x) const { return x.a == 1 % n_ && x.b == 0 && x.c == 0 && x.d == 0; }
    bool eq(const ResidueElement &x, const ResidueElement &y) const
    {
        return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
    }
    bool is_unit(const ResidueElement &x) const { return std::gcd(norm_q(x), n_) == 1; }

    // N_{K/K_I}(x) written as s*theta_I + t (mod n), I = 1, 2.
    std::pair<long, long> norm_as_theta(const ResidueElement &x, int I) const
    {
        auto [u, v] = norm_sub(x, I);
        if (I == 1) {
            // u + v*sqrt(-d1) = (u+v) + 2v*theta1
            return {mod_reduce(2LL * v, n_), mod_reduce(static_cast<long long>(u) + v, n_)};
        }
        return {v, u};
    }

private:
    void check(const ResidueElement &x) const
    {
        if (x.n != n_) {
            throw internal_error("BiquadResidueRing: modulus mismatch");
        }
    }
};

/* ---------------- Pell conics over F_p ---------------- */

// Group law on x^2 - delta*y^2 = 1: (r,s) + (t,u) = (rt + delta*su, ru + st),
// identity (1,0), inverse (r,-s).
struct PellPoint {
    long x = 1, y = 0;
    bool operator==(const PellPoint &o) const { return x == o.x && y == o.y; }
};

class PellConic
{
    long p_, delta_;

public:
    PellConic(long delta, long p) : p_(p), delta_(mod_reduce(delta, p))
    {
        if (p < 3) {
            throw hypothesis_error("PellConic: p must be an odd prime");
        }
        if (delta_ == 0) {
            throw hypothesis_error("PellConic: p | delta, the conic is singular");
        }
    }

    long p() const { return p_; }

    bool on_curve(const PellPoint &q) const
    {
        return mod_reduce(static_cast<long long>(q.x) * q.x - static_cast<long long>(q.y) * q.y % p_ * delta_, p_) == 1;
    }

    PellPoint add(const PellPoint &a, const PellPoint &b) const
    {
        PellPoint r;
        r.x = mod_reduce(static_cast<long long>(a.x) * b.x + static_cast<long long>(a.y) * b.y % p_ * delta_, p_);
        r.y = mod_reduce(static_cast<long long>(a.x) * b.y + static_cast<long long>(a.y) * b.x, p_);
        return r;
    }

    PellPoint mul(PellPoint a, long e) const
    {
        PellPoint r;
        while (e > 0) {
            if (e & 1L) {
                r = add(r, a);
            }
            e >>= 1L;
            if (e > 0) {
                a = add(a, a);
            }
        }
        return r;
    }

    long order_of(const PellPoint &a, long group_order) const
    {
        long ord = group_order;
        for (long q : distinct_prime_factors(group_order)) {
            while (ord % q == 0 && mul(a, ord / q) == PellPoint{}) {
                ord /= q;
            }
        }
        return ord;
    }

    std::vector<PellPoint> enumerate() const
    {
        std::vector<PellPoint> pts;
        for (long x = 0; x < p_; ++x) {
            for (long y = 0; y < p_; ++y) {
                PellPoint q{x, y};
                if (on_curve(q)) {
                    pts.push_back(q);
                }
            }
        }
        return pts;
    }
};

struct PellCount {
    long order = 0;
    PellPoint generator;
};

// |C(F_p)| by exhaustive enumeration, asserted equal to p - (delta/p), plus
// a generator witnessing cyclicity (lexicographically first point of full
// order).
inline PellCount pell_count(long delta, long p)
{
    PellConic conic(delta, p);
    auto pts = conic.enumerate();
    long expected = p - legendre(delta, p);
    if (static_cast<long>(pts.size()) != expected) {
        throw internal_error("pell_count: enumerated order " + std::to_string(pts.size()) + " != p - (delta/p) = "
                             + std::to_string(expected));
    }
    for (const auto &q : pts) {
        if (conic.order_of(q, expected) == expected) {
            return PellCount{expected, q};
        }
    }
    throw internal_error("pell_count: no generator found, group is not cyclic");
}

/* ---------------- unit-group orders ---------------- */

// |(O_F/nO_F)^x| for the quadratic field F = Q(sqrt(m)), m squarefree
// (either sign), odd n, via N(pO)*prod(1 - 1/Np) per prime power of n.
inline mpz_class unit_group_order_quadratic(long m, long n)
{
    if (n < 3 || n % 2 == 0) {
        throw hypothesis_error("unit_group_order_quadratic: modulus must be odd >= 3");
    }
    mpz_class total = 1;
    for (long q : distinct_prime_factors(n)) {
        long e = 0;
        long nn = n;
        while (nn % q == 0) {
            nn /= q;
            ++e;
        }
        mpz_class qe_2;
        mpz_ui_pow_ui(qe_2.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(2 * e - 2));
        int chi = legendre(mod_reduce(m, q), q);
        mpz_class local;
        if (chi == 0) { // ramified: one prime, e=2, f=1
            local = qe_2 * q * (q - 1);
        } else if (chi == 1) { // split: two primes of degree 1
            local = qe_2 * (q - 1) * (q - 1);
        } else { // inert: one prime of degree 2
            local = qe_2 * (q - 1) * (q + 1);
        }
        total *= local;
    }
    return total;
}

struct UnitGroupOrder {
    mpz_class order;
    std::optional<mpz_class> enumerated; // present when n <= 50
};

// |(O_K/nO_K)^x| for the biquadratic K, odd n coprime to the d_i that q
// would ramify wildly in; small n additionally enumerated as a witness.
inline UnitGroupOrder unit_group_order_biquad(const FieldTower &t, long n)
{
    if (n < 3 || n % 2 == 0) {
        throw hypothesis_error("unit_group_order_biquad: modulus must be odd >= 3");
    }
    mpz_class total = 1;
    for (long q : distinct_prime_factors(n)) {
        long e = 0;
        long nn = n;
        while (nn % q == 0) {
            nn /= q;
            ++e;
        }
        mpz_class qe_4;
        mpz_ui_pow_ui(qe_4.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(4 * e - 4));
        mpz_class local;
        if (t.d1 % q != 0 && t.d2 % q != 0) {
            int chi1 = legendre(-t.d1, q), chi2 = legendre(-t.d2, q);
            if (chi1 == 1 && chi2 == 1) { // four primes of degree 1
                mpz_class f = q - 1;
                local = qe_4 * f * f * f * f;
            } else { // two primes of degree 2
                mpz_class f = mpz_class(q) * q - 1;
                local = qe_4 * f * f;
            }
        } else {
            // q ramifies in exactly one of K1, K2 (gcd(d1,d2)=1); the
            // unramified part is decided by the other character.
            long other = (t.d1 % q == 0) ? t.d2 : t.d1;
            int chi = legendre(-other, q);
            mpz_class qq(q);
            if (chi == 1) { // (p1*p2)^2 with f = 1
                local = qe_4 * (qq - 1) * (qq - 1) * qq * qq;
            } else { // p^2 with f = 2
                local = qe_4 * (qq * qq - 1) * qq * qq;
            }
        }
        total *= local;
    }

    UnitGroupOrder out;
    out.order = total;
    if (n <= 50) {
        BiquadResidueRing ring(t, n);
        long count = 0;
        for (long a = 0; a < n; ++a) {
            for (long b = 0; b < n; ++b) {
                for (long c = 0; c < n; ++c) {
                    for (long d = 0; d < n; ++d) {
                        if (ring.is_unit(ring.make(a, b, c, d))) {
                            ++count;
                        }
                    }
                }
            }
        }
        out.enumerated = mpz_class(count);
        if (out.order != *out.enumerated) {
            throw internal_error("unit_group_order_biquad: formula " + out.order.get_str()
                                 + " != enumeration " + std::to_string(count));
        }
    }
    return out;
}

/* ---------------- norm-map surjectivity certificates ---------------- */

struct QuadNormSurjectivity {
    long kernel_size = 0;
    // preimages[t] = (x, y) with x^2 - delta*y^2 = t (mod p), for t = 1..p-1
    std::vector<std::pair<long, long>> preimages;
};

inline QuadNormSurjectivity norm_map_image_quadratic(long delta, long p)
{
    if (legendre(delta, p) == 0) {
        throw hypothesis_error("norm_map_image_quadratic: p | delta");
    }
    QuadNormSurjectivity out;
    out.preimages.assign(p, {-1, -1});
    for (long x = 0; x < p; ++x) {
        for (long y = 0; y < p; ++y) {
            long t = mod_reduce(static_cast<long long>(x) * x - static_cast<long long>(y) * y % p * mod_reduce(delta, p), p);
            if (t == 1) {
                ++out.kernel_size;
            }
            if (t != 0 && out.preimages[t].first < 0) {
                out.preimages[t] = {x, y};
            }
        }
    }
    for (long t = 1; t < p; ++t) {
        if (out.preimages[t].first < 0) {
            throw hypothesis_error("norm_map_image_quadratic: norm map misses class " + std::to_string(t));
        }
    }
    return out;
}

struct BiquadNormSurjectivity {
    long kernel_size = 0;
    std::vector<ResidueElement> preimages; // index t = 1..p-1
};

inline BiquadNormSurjectivity norm_map_image_biquad(const FieldTower &t, long p)
{
    if (legendre(t.d1 * t.d2, p) != -1) {
        throw hypothesis_error("norm_map_image_biquad: needs (d1*d2/p) = -1");
    }
    BiquadResidueRing ring(t, p);
    BiquadNormSurjectivity out;
    out.preimages.assign(p, ResidueElement{});
    std::vector<bool> seen(p, false);
    for (long a = 0; a < p; ++a) {
        for (long b = 0; b < p; ++b) {
            for (long c = 0; c < p; ++c) {
                for (long d = 0; d < p; ++d) {
                    ResidueElement x = ring.make(a, b, c, d);
                    long nq = ring.norm_q(x);
                    if (nq == 1) {
                        ++out.kernel_size;
                    }
                    if (nq != 0 && !seen[nq]) {
                        seen[nq] = true;
                        out.preimages[nq] = x;
                    }
                }
            }
        }
    }
    for (long v = 1; v < p; ++v) {
        if (!seen[v]) {
            throw hypothesis_error("norm_map_image_biquad: norm map misses class " + std::to_string(v));
        }
    }
    return out;
}

} // namespace bqray

#endif
