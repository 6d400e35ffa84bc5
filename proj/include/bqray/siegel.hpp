#ifndef BQRAY_SIEGEL_HPP
#define BQRAY_SIEGEL_HPP

/*
 * Siegel functions at CM points, raised to the 12*M*n-th power:
 *
 *   g_{(r1,r2)}(tau) = -q_tau^{B2(r1)/2} e^{pi i r2 (r1-1)} (1-q_z)
 *                      prod_{k>=1} (1-q_tau^k q_z)(1-q_tau^k q_z^{-1}),
 *
 * with q_tau = e(tau), q_z = e(z), z = r1*tau + r2 and B2(X) = X^2 - X + 1/6.
 * Only the 12*M*n-th powers are ever used (M the index denominator), which
 * removes every root-of-unity ambiguity in the prefactor; the fractional
 * power q_tau^{B2/2} is realized as e(tau*B2(r1)/2) with B2(r1) kept as an
 * exact rational.
 *
 * Index algebra: indices (a1/M, a2/M) are kept in the canonical form with
 * 0 <= a_i < M and the +- identification resolved lexicographically, since
 * g^{12M} takes equal values on v and -v.
 */

#include <algorithm>
#include <array>
#include <future>
#include <string>
#include <vector>

#include "bqray/fields.hpp"
#include "bqray/numerics.hpp"
#include "bqray/residue.hpp"

namespace bqray {

struct SiegelIndex {
    long a1 = 0, a2 = 0, M = 1; // r_i = a_i / M

    bool operator==(const SiegelIndex &o) const { return a1 == o.a1 && a2 == o.a2 && M == o.M; }
    bool operator<(const SiegelIndex &o) const
    {
        if (a1 != o.a1) {
            return a1 < o.a1;
        }
        return a2 < o.a2;
    }

    // "a1/M,a2/M" with each fraction reduced.
    std::string str() const
    {
        auto frac = [&](long a) {
            long g = std::gcd(a, M);
            if (g == 0) {
                return std::string("0");
            }
            if (a == 0) {
                return std::string("0");
            }
            return std::to_string(a / g) + "/" + std::to_string(M / g);
        };
        return frac(a1) + "," + frac(a2);
    }
};

// Fractional parts plus the canonical +- representative.  Throws on an
// integral index, where the function is undefined.
inline SiegelIndex normalize_index(long a1, long a2, long M)
{
    if (M < 2) {
        throw hypothesis_error("SiegelIndex: denominator must be >= 2");
    }
    a1 = mod_reduce(a1, M);
    a2 = mod_reduce(a2, M);
    if (a1 == 0 && a2 == 0) {
        throw hypothesis_error("SiegelIndex: integral index, g is undefined");
    }
    long n1 = (M - a1) % M, n2 = (M - a2) % M;
    if (std::pair(n1, n2) < std::pair(a1, a2)) {
        return SiegelIndex{n1, n2, M};
    }
    return SiegelIndex{a1, a2, M};
}

/* ---------------- GL2 and Artin actions ---------------- */

using Mat2 = std::array<long, 4>; // row-major ((m00, m01), (m10, m11)) mod M

inline Mat2 mat_mul(const Mat2 &x, const Mat2 &y, long M)
{
    return Mat2{mod_reduce(static_cast<long long>(x[0]) * y[0] + static_cast<long long>(x[1]) * y[2], M),
                mod_reduce(static_cast<long long>(x[0]) * y[1] + static_cast<long long>(x[1]) * y[3], M),
                mod_reduce(static_cast<long long>(x[2]) * y[0] + static_cast<long long>(x[3]) * y[2], M),
                mod_reduce(static_cast<long long>(x[2]) * y[1] + static_cast<long long>(x[3]) * y[3], M)};
}

inline Mat2 mat_pow(Mat2 x, long e, long M)
{
    Mat2 r{1, 0, 0, 1};
    while (e > 0) {
        if (e & 1L) {
            r = mat_mul(r, x, M);
        }
        e >>= 1L;
        if (e > 0) {
            x = mat_mul(x, x, M);
        }
    }
    return r;
}

// Right action of alpha on the row vector (r1, r2), normalized.
inline SiegelIndex act_matrix(const SiegelIndex &v, const Mat2 &alpha)
{
    long det = mod_reduce(static_cast<long long>(alpha[0]) * alpha[3] - static_cast<long long>(alpha[1]) * alpha[2], v.M);
    if (std::gcd(det, v.M) != 1) {
        throw hypothesis_error("act_matrix: matrix is singular mod " + std::to_string(v.M));
    }
    long b1 = mod_reduce(static_cast<long long>(v.a1) * alpha[0] + static_cast<long long>(v.a2) * alpha[2], v.M);
    long b2 = mod_reduce(static_cast<long long>(v.a1) * alpha[1] + static_cast<long long>(v.a2) * alpha[3], v.M);
    return normalize_index(b1, b2, v.M);
}

// The matrix of omega = s*theta + t acting on N-torsion indices:
// ((t - B_theta*s, -C_theta*s), (s, t)).
inline Mat2 artin_matrix(const QuadraticField &f, long s, long t, long M)
{
    if (!f.imaginary) {
        throw internal_error("artin_matrix: CM field must be imaginary");
    }
    return Mat2{mod_reduce(static_cast<long long>(t) - static_cast<long long>(f.B_theta) * s, M),
                mod_reduce(-static_cast<long long>(f.C_theta) * s, M), mod_reduce(s, M), mod_reduce(t, M)};
}

inline SiegelIndex act_artin(const SiegelIndex &v, const QuadraticField &f, long s, long t)
{
    return act_matrix(v, artin_matrix(f, s, t, v.M));
}

// Index of the complex conjugate value: (r1, r1 - r2) when theta is the
// half-trace root, (r1, -r2) when theta is a pure square root.
inline SiegelIndex conjugate_index(const SiegelIndex &v, const QuadraticField &f)
{
    if (!f.imaginary) {
        throw internal_error("conjugate_index: CM field must be imaginary");
    }
    if (f.half_trace()) {
        return normalize_index(v.a1, v.a1 - v.a2, v.M);
    }
    return normalize_index(v.a1, -v.a2, v.M);
}

/* ---------------- CM points ---------------- */

struct CmPoint {
    int which = 1; // evaluates at theta_1 or theta_2
    long d = 0;    // the squarefree d_i > 0

    BigComplex theta(long prec) const
    {
        BigReal root = sqrt(BigReal::of(d, prec));
        if (which == 1) {
            // theta_1 = (-1 + sqrt(-d1))/2
            BigReal half = BigReal::ratio(mpz_class(-1), mpz_class(2), prec);
            return BigComplex(half, root / BigReal::of(2, prec));
        }
        return BigComplex(BigReal::of(0, prec), root);
    }

    double im_theta() const
    {
        double r = std::sqrt(static_cast<double>(d));
        return which == 1 ? r / 2 : r;
    }
};

inline CmPoint cm_point(const FieldTower &t, int which)
{
    if (which != 1 && which != 2) {
        throw hypothesis_error("cm_point: subfield must be 1 or 2");
    }
    return CmPoint{which, which == 1 ? t.d1 : t.d2};
}

/* ---------------- evaluation ---------------- */

// g_{(a1/M, a2/M)}^{12*M*n}(theta), without canonicalizing the index first
// (the identities of the +- identification are tested against this hook).
inline BigComplex eval_g12_frac(long a1, long a2, long M, const CmPoint &cm, long n, long prec)
{
    if (prec < 64) {
        throw hypothesis_error("eval_g12: prec must be >= 64");
    }
    if (n < 1) {
        throw hypothesis_error("eval_g12: power multiple n must be >= 1");
    }
    a1 = mod_reduce(a1, M);
    a2 = mod_reduce(a2, M);
    if (a1 == 0 && a2 == 0) {
        throw hypothesis_error("eval_g12: integral index");
    }
    const long wp = prec + 64;

    BigComplex tau = cm.theta(wp);
    if (!(tau.im().sign() > 0)) {
        throw hypothesis_error("eval_g12: CM point not in the upper half plane");
    }
    BigComplex q = e_of(tau, wp);
    if (!(abs2(q) < BigReal::of(1, 64))) {
        throw hypothesis_error("eval_g12: |q_tau| >= 1, invalid CM point");
    }

    // z = r1*tau + r2, q_z = e(z)
    const mpz_class A1(a1), A2(a2), Mz(M);
    BigReal r1 = BigReal::ratio(A1, Mz, wp);
    BigReal r2 = BigReal::ratio(A2, Mz, wp);
    BigComplex qz = e_of(BigComplex(r1 * tau.re() + r2, r1 * tau.im()), wp);
    BigComplex qz_inv = inv(qz);

    // truncation index: tail below 2^-(wp+8)
    const double log2q = 2 * 3.14159265358979312 * cm.im_theta() / 0.693147180559945286;
    const long T = static_cast<long>((static_cast<double>(wp) + 16.0) / log2q) + 2;

    BigComplex one = BigComplex::of(1, 0, wp);
    BigComplex prod = one - qz;
    BigComplex qk = q;
    for (long k = 1; k <= T; ++k) {
        prod = prod * (one - qk * qz) * (one - qk * qz_inv);
        if (k < T) {
            qk = qk * q;
        }
    }

    // prefactor -e(tau * B2(r1)/2) * e(r2(r1-1)/2), exact rationals
    mpz_class rho_num = 6 * A1 * A1 - 6 * A1 * Mz + Mz * Mz;
    mpz_class rho_den = 12 * Mz * Mz;
    mpq_class rho(rho_num, rho_den);
    rho.canonicalize();
    BigReal rho_r = BigReal::ratio(rho.get_num(), rho.get_den(), wp);
    BigComplex pref = e_of(BigComplex(tau.re() * rho_r, tau.im() * rho_r), wp);
    pref = pref * e_of_ratio(A2 * (A1 - Mz), 2 * Mz * Mz, wp);

    BigComplex g = -(pref * prod);
    unsigned long e = static_cast<unsigned long>(12) * static_cast<unsigned long>(M) * static_cast<unsigned long>(n);
    return pow_int(g, e).with_prec(prec);
}

inline BigComplex eval_g12(const SiegelIndex &v, const CmPoint &cm, long n, long prec)
{
    return eval_g12_frac(v.a1, v.a2, v.M, cm, n, prec);
}

/* ---------------- orbit products ---------------- */

struct OrbitGen {
    Mat2 mat;
    long order = 1;
};

struct OrbitProduct {
    BigComplex value;
    std::vector<SiegelIndex> orbit; // one index per group element, sorted
};

// Indices seed * prod_j gen_j^{i_j} over the full exponent grid.
inline std::vector<SiegelIndex> orbit_indices(const SiegelIndex &seed, const std::vector<OrbitGen> &gens)
{
    std::vector<SiegelIndex> cur{seed};
    for (const auto &g : gens) {
        std::vector<SiegelIndex> next;
        next.reserve(cur.size() * static_cast<std::size_t>(g.order));
        for (const auto &v : cur) {
            SiegelIndex w = v;
            for (long i = 0; i < g.order; ++i) {
                next.push_back(w);
                if (i + 1 < g.order) {
                    w = act_matrix(w, g.mat);
                }
            }
        }
        cur = std::move(next);
    }
    return cur;
}

// Product of g^{12Mn} over the orbit of the seed under the given abelian
// generator set.  Factors are evaluated independently (optionally in
// parallel) and always combined in sorted index order, so the result does
// not depend on the parallel schedule.
inline OrbitProduct orbit_product(const SiegelIndex &seed, const std::vector<OrbitGen> &gens, const CmPoint &cm,
                                  long n, long prec, int threads = 1)
{
    OrbitProduct out;
    out.orbit = orbit_indices(seed, gens);
    std::sort(out.orbit.begin(), out.orbit.end());

    std::vector<BigComplex> factors;
    factors.reserve(out.orbit.size());
    if (threads <= 1 || out.orbit.size() < 4) {
        for (const auto &v : out.orbit) {
            factors.push_back(eval_g12(v, cm, n, prec));
        }
    } else {
        std::size_t nw = std::min<std::size_t>(static_cast<std::size_t>(threads), out.orbit.size());
        std::vector<std::future<std::vector<BigComplex>>> futs;
        std::size_t chunk = (out.orbit.size() + nw - 1) / nw;
        for (std::size_t w = 0; w < nw; ++w) {
            std::size_t lo = w * chunk, hi = std::min(out.orbit.size(), lo + chunk);
            if (lo >= hi) {
                break;
            }
            futs.push_back(std::async(std::launch::async, [&, lo, hi] {
                std::vector<BigComplex> part;
                part.reserve(hi - lo);
                for (std::size_t i = lo; i < hi; ++i) {
                    part.push_back(eval_g12(out.orbit[i], cm, n, prec));
                }
                return part;
            }));
        }
        for (auto &f : futs) {
            for (auto &v : f.get()) {
                factors.push_back(std::move(v));
            }
        }
    }

    BigComplex acc = BigComplex::of(1, 0, prec);
    for (const auto &f : factors) {
        acc = acc * f;
    }
    out.value = acc;
    return out;
}

} // namespace bqray

#endif
