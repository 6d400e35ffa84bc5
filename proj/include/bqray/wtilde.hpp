#ifndef BQRAY_WTILDE_HPP
#define BQRAY_WTILDE_HPP

/*
 * The norm-condition subgroup lattice of (O_K/pO_K)^x and its consequences:
 * subgroup generators and coset decompositions, extension-degree tables for
 * every intermediate class field, and the Artin elements whose matrices act
 * on Siegel indices.
 *
 * Notation used in labels (i, j, k concrete subfield numbers 1..3):
 *   K(m)        ray class field of K modulo m
 *   K3(m)       ray class field of K3 modulo m; K3(m*inf) with infinity
 *   Kt{i,j}     the class field generated over K(N p^mu) by the subfield
 *               ray class invariants of K_i and K_j
 *   Wt'{i,j}    image in (O_K/pO_K)^x of the exact norm-one condition group
 *   Wt{i,j}     image of the full norm-condition group
 */

#include <string>
#include <vector>

#include "bqray/residue.hpp"

namespace bqray {

struct GeneratorInfo {
    ResidueElement g;
    long order = 1;
};

struct SubgroupDescriptor {
    std::string label;
    mpz_class order;                       // claimed order
    std::vector<GeneratorInfo> generators; // for the cyclic ' groups
    std::string coset_base;                // subgroup the reps translate, "" if none
    std::vector<ResidueElement> coset_reps;
};

struct WtildeLattice {
    long N = 0, p = 0, mu = 0;
    int i0 = 0, i0p = 0; // (-d_{i0}/p) = +1, (-d_{i0p}/p) = -1
    long n0 = 0;
    long A = 0, D_i0 = 0;   // A^2 = -1, D^2 = -d_{i0} (mod p)
    ResidueElement B;       // N_{K/K_{i0p}}(B) = 1, N_{K/K_3}(B) = -1 (mod p)
    ResidueElement eps0p;   // eps0' mod p
    std::vector<SubgroupDescriptor> groups;
};

namespace detail {

// CRT lift of coords given mod p to mod N*p^k, congruent to (1,0,0,0) mod N.
inline long lift_coord(long c_mod_pk, long unit_part, long N, long pk)
{
    if (N == 1) {
        return c_mod_pk;
    }
    long m = N * pk;
    long x = mul_mod(mul_mod(mod_reduce(c_mod_pk, pk), N % m, m), inv_mod(N % pk, pk), m);
    x = mod_reduce(static_cast<long long>(x)
                       + static_cast<long long>(mul_mod(mul_mod(unit_part, pk % m, m), inv_mod(pk % N, N), m)),
                   m);
    return x;
}

inline ResidueElement lift_unit_congruent(const BiquadResidueRing &ring_m, const ResidueElement &x_mod_p, long N, long pk)
{
    return ring_m.make(lift_coord(x_mod_p.a, 1, N, pk), lift_coord(x_mod_p.b, 0, N, pk),
                       lift_coord(x_mod_p.c, 0, N, pk), lift_coord(x_mod_p.d, 0, N, pk));
}

// Residue of a Pell point x + y*sqrt(-d_i) (i = 1,2) or x + y*sqrt(d1d2) (i = 3).
inline ResidueElement pell_residue(const BiquadResidueRing &ring, int axis, const PellPoint &q)
{
    switch (axis) {
    case 1:
        return ring.make(q.x, q.y, 0, 0);
    case 2:
        return ring.make(q.x, 0, q.y, 0);
    case 3:
        return ring.make(q.x, 0, 0, q.y);
    default:
        throw internal_error("pell_residue: bad axis");
    }
}

inline void require_mu0_hypotheses(const FieldTower &t, long N, long p)
{
    if (p < 3 || p % 2 == 0) {
        throw hypothesis_error("need an odd prime p");
    }
    if (N < 1 || std::gcd(N, p) != 1) {
        throw hypothesis_error("need N >= 1 with gcd(N,p) = 1");
    }
    if (N == 2) {
        throw hypothesis_error("N = 2 is excluded in the mu = 0 case");
    }
    if (p % 4 != 1) {
        throw hypothesis_error("mu = 0 case needs p = 1 (mod 4), violated by p=" + std::to_string(p));
    }
    if (legendre(t.d1 * t.d2, p) != -1) {
        throw hypothesis_error("mu = 0 case needs (d1*d2/p) = -1");
    }
}

} // namespace detail

// Image of eps0 = eps_x + eps_y*sqrt(d1*d2) in O_K/n.
inline ResidueElement eps0_residue(const FieldTower &t, const BiquadResidueRing &ring)
{
    return ring.make(t.eps_x, mpz_class(0), mpz_class(0), t.eps_y);
}

// eps0' = sign * eps0^m0 as a residue mod n.
inline ResidueElement eps0_prime_residue(const FieldTower &t, const BiquadResidueRing &ring, const UnitExponents &ue)
{
    ResidueElement e = eps0_residue(t, ring);
    ResidueElement r = ring.pow(e, ue.m0);
    if (ue.sign < 0) {
        r = ring.make(-r.a, -r.b, -r.c, -r.d);
    }
    return r;
}

inline WtildeLattice wtilde_lattice(const FieldTower &t, long N, long p, long mu)
{
    WtildeLattice L;
    L.N = N;
    L.p = p;
    L.mu = mu;

    if (mu > 0) {
        // mu > 0: the groups live between S_{N,p,mu} and S_{N,p,mu+1}; every
        // class is 1 + N p^mu * w with w mod p, so generators are enough.
        if (std::gcd(N, p) != 1 || p < 3 || p % 2 == 0) {
            throw hypothesis_error("wtilde_lattice: need odd prime p coprime to N");
        }
        UnitExponents ue = unit_exponents(t, N, p);
        long pk = 1;
        for (long i = 0; i <= mu; ++i) {
            pk *= p;
        }
        long M = N * pk;
        BiquadResidueRing ring(t, M);
        long step = N * (pk / p); // N p^mu
        auto one_plus = [&](long b, long c, long d) { return ring.make(1, b * step, c * step, d * step); };

        SubgroupDescriptor s12{"W{1,2}/S", p, {{one_plus(0, 0, 1), p}}, "", {}};
        SubgroupDescriptor s1{"W{1}/S", mpz_class(p) * p, {{one_plus(0, 1, 0), p}, {one_plus(0, 0, 1), p}}, "", {}};
        SubgroupDescriptor s2{"W{2}/S", mpz_class(p) * p, {{one_plus(1, 0, 0), p}, {one_plus(0, 0, 1), p}}, "", {}};
        SubgroupDescriptor s3{"W{3}/S", 0, {}, "", {}};
        if (mu < ue.mu0) {
            s3.order = mpz_class(p) * p;
            s3.generators = {{one_plus(1, 0, 0), p}, {one_plus(0, 1, 0), p}};
        } else {
            s3.order = mpz_class(p) * p * p;
            s3.generators = {{one_plus(1, 0, 0), p}, {one_plus(0, 1, 0), p}, {one_plus(0, 0, 1), p}};
        }
        SubgroupDescriptor h{"H/S", 1, {}, "", {}};
        if (mu >= ue.mu0) {
            h.order = p;
            long e = ue.l0;
            for (long i = 0; i < mu - ue.mu0; ++i) {
                e *= p;
            }
            h.generators = {{ring.pow(eps0_residue(t, ring), e), p}};
        }
        SubgroupDescriptor full{"S/S+1", mpz_class(p) * p * p * p,
                                {{one_plus(1, 0, 0), p}, {one_plus(0, 1, 0), p}, {one_plus(0, 0, 1), p}},
                                "", {}};
        // the fourth direction 1 + N p^mu * 1 (rational part)
        full.generators.push_back({ring.make(1 + step, 0, 0, 0), p});
        L.groups = {full, s12, s1, s2, s3, h};
        return L;
    }

    detail::require_mu0_hypotheses(t, N, p);
    UnitExponents ue = unit_exponents(t, N, p);
    L.n0 = ue.n0;
    L.i0 = (legendre(-t.d1, p) == 1) ? 1 : 2;
    L.i0p = 3 - L.i0;
    if (legendre(-t.d1, p) * legendre(-t.d2, p) != -1) {
        throw internal_error("wtilde_lattice: characters inconsistent with (d1d2/p) = -1");
    }
    L.A = sqrt_mod(p - 1, p);
    long d_i0 = (L.i0 == 1) ? t.d1 : t.d2;
    long d_i0p = (L.i0 == 1) ? t.d2 : t.d1;
    L.D_i0 = sqrt_mod(mod_reduce(-d_i0, p), p);

    BiquadResidueRing ring(t, p);
    L.eps0p = eps0_prime_residue(t, ring, ue);

    // B = ((p+1)/2) * A * [ (1 + 1/d_{i0'}) s_{i0'} + (1/D)(1 - 1/d_{i0'}) s_3 ]
    {
        long inv_d = inv_mod(mod_reduce(d_i0p, p), p);
        long scale = mul_mod((p + 1) / 2, L.A, p);
        long coef_s = mul_mod(scale, mod_reduce(1 + inv_d, p), p);
        long coef_3 = mul_mod(mul_mod(scale, inv_mod(L.D_i0, p), p), mod_reduce(1 - inv_d, p), p);
        L.B = (L.i0p == 1) ? ring.make(0, coef_s, 0, coef_3) : ring.make(0, 0, coef_s, coef_3);
        auto nb = ring.norm_sub(L.B, L.i0p);
        if (nb.first != 1 || nb.second != 0) {
            throw internal_error("wtilde_lattice: N_{K/K_{i0'}}(B) != 1");
        }
        auto nb3 = ring.norm_sub(L.B, 3);
        if (nb3.first != p - 1 || nb3.second != 0) {
            throw internal_error("wtilde_lattice: N_{K/K_3}(B) != -1");
        }
    }

    // generators of the ' groups (lex-first full-order Pell points)
    PellCount c12 = pell_count(t.delta(), p);                 // order p+1
    PellCount c_i0_3 = pell_count(mod_reduce(-d_i0p, p), p);  // order p+1, elements of K_{i0'}
    PellCount c_i0p_3 = pell_count(mod_reduce(-d_i0, p), p);  // order p-1, elements of K_{i0}
    ResidueElement omega0 = detail::pell_residue(ring, 3, c12.generator);
    ResidueElement omega_i0p = detail::pell_residue(ring, L.i0p, c_i0_3.generator);
    ResidueElement omega_i0 = detail::pell_residue(ring, L.i0, c_i0p_3.generator);

    ResidueElement Ael = ring.make(L.A, 0, 0, 0);
    ResidueElement Del = (L.i0 == 1) ? ring.make(0, inv_mod(L.D_i0, p), 0, 0) : ring.make(0, 0, inv_mod(L.D_i0, p), 0);

    auto label = [&](const char *base, int i, int j) {
        return std::string(base) + "{" + std::to_string(std::min(i, j)) + "," + std::to_string(std::max(i, j)) + "}";
    };
    std::string l12p = "Wt'{1,2}";
    std::string li03p = label("Wt'", L.i0, 3);
    std::string li0p3p = label("Wt'", L.i0p, 3);

    std::vector<SubgroupDescriptor> gs;
    gs.push_back({l12p, p + 1, {{omega0, p + 1}}, "", {}});
    gs.push_back({li03p, p + 1, {{omega_i0p, p + 1}}, "", {}});
    gs.push_back({li0p3p, p - 1, {{omega_i0, p - 1}}, "", {}});
    gs.push_back({"Wt'{1,2,3}", 2, {{ring.make(-1, 0, 0, 0), 2}}, "", {}});

    const bool half = (L.n0 == (p + 1) / 2);
    const bool fullord = (L.n0 == p + 1);
    auto powers = [&](const ResidueElement &g, long k) {
        std::vector<ResidueElement> v;
        ResidueElement acc = ring.one();
        for (long i = 0; i < k; ++i) {
            v.push_back(acc);
            acc = ring.mul(acc, g);
        }
        return v;
    };
    auto cross = [&](const std::vector<ResidueElement> &u, const std::vector<ResidueElement> &v) {
        std::vector<ResidueElement> out;
        for (const auto &x : u) {
            for (const auto &y : v) {
                out.push_back(ring.mul(x, y));
            }
        }
        return out;
    };

    // Wt{1,2}
    if (N != 1) {
        gs.push_back({"Wt{1,2}", p + 1, {}, l12p, {ring.one()}});
    } else {
        gs.push_back({"Wt{1,2}", 4 * (p + 1), {}, l12p, cross(powers(Ael, 2), powers(Del, 2))});
    }

    // Wt{1,2,3} (the full intersection)
    {
        SubgroupDescriptor g;
        g.label = "Wt{1,2,3}";
        g.coset_base = "Wt'{1,2,3}";
        bool even = (L.n0 % 2 == 0);
        std::vector<ResidueElement> eps_reps = powers(L.eps0p, even ? L.n0 / 2 : L.n0);
        if (N != 1) {
            g.coset_reps = eps_reps;
            g.order = even ? L.n0 : 2 * L.n0;
        } else {
            g.coset_reps = cross(eps_reps, cross(powers(Ael, 2), powers(Del, 2)));
            g.order = even ? 4 * L.n0 : 8 * L.n0;
        }
        gs.push_back(g);
    }

    // The (K_{i0,3})/(K_{i0',3})/(K_3) decompositions assume n0 = (p+1)/2 or p+1.
    if (half || fullord) {
        std::vector<ResidueElement> eps_half = powers(L.eps0p, (p + 1) / 2);
        SubgroupDescriptor gi03;
        gi03.label = label("Wt", L.i0, 3);
        gi03.coset_base = li03p;
        SubgroupDescriptor gi0p3;
        gi0p3.label = label("Wt", L.i0p, 3);
        gi0p3.coset_base = li0p3p;
        if (N != 1 && half) {
            gi03.coset_reps = eps_half;
            gi03.order = mpz_class(p + 1) * ((p + 1) / 2);
            gi0p3.coset_reps = eps_half;
            gi0p3.order = mpz_class(p - 1) * ((p + 1) / 2);
        } else if (N != 1) {
            gi03.coset_reps = cross(eps_half, powers(Del, 2));
            gi03.order = mpz_class(p + 1) * (p + 1);
            gi0p3.coset_reps = cross(eps_half, powers(L.B, 2));
            gi0p3.order = mpz_class(p - 1) * (p + 1);
        } else {
            gi03.coset_reps = cross(eps_half, cross(powers(Ael, 2), powers(Del, 2)));
            gi03.order = 2 * mpz_class(p + 1) * (p + 1);
            gi0p3.coset_reps = cross(eps_half, cross(powers(Ael, 2), powers(L.B, 2)));
            gi0p3.order = 2 * mpz_class(p - 1) * (p + 1);
        }
        gs.push_back(gi03);
        gs.push_back(gi0p3);

        // Wt{i0}, Wt{i0'}, Wt{3}, Wt{0}
        bool collapse = (N == 1) || fullord; // the (K_3) index is 1
        SubgroupDescriptor gi0{label("Wt", L.i0, L.i0), {}, {}, gi03.label, {}};
        gi0.label = "Wt{" + std::to_string(L.i0) + "}";
        gi0.coset_reps = collapse ? std::vector<ResidueElement>{ring.one()} : powers(Del, 2);
        gi0.order = gi03.order * (collapse ? 1 : 2);
        SubgroupDescriptor gi0p;
        gi0p.label = "Wt{" + std::to_string(L.i0p) + "}";
        gi0p.coset_base = gi0p3.label;
        gi0p.coset_reps = collapse ? std::vector<ResidueElement>{ring.one()} : powers(L.B, 2);
        gi0p.order = gi0p3.order * (collapse ? 1 : 2);
        SubgroupDescriptor g0;
        g0.label = "Wt{0}";
        g0.coset_base = "Wt{3}";
        g0.coset_reps = collapse ? std::vector<ResidueElement>{ring.one()} : powers(Del, 2);
        g0.order = mpz_class(p + 1) * (p + 1) * (p - 1);
        SubgroupDescriptor g3;
        g3.label = "Wt{3}";
        g3.order = g0.order / (collapse ? 1 : 2);
        gs.push_back(gi0);
        gs.push_back(gi0p);
        gs.push_back(g3);
        gs.push_back(g0);
    }

    L.groups = std::move(gs);
    return L;
}

/* ---------------- degree tables ---------------- */

struct DegreeEntry {
    std::string from, to;
    mpz_class index;
};

struct DegreeTable {
    std::string case_tag;
    std::vector<DegreeEntry> entries;
};

inline DegreeTable degree_table(const FieldTower &t, long N, long p, long mu)
{
    DegreeTable tab;
    UnitExponents ue = unit_exponents(t, N, p);

    auto km = [&](long mu_exp) { // modulus N*p^mu_exp as a string
        mpz_class m(N);
        for (long i = 0; i < mu_exp; ++i) {
            m *= p;
        }
        return m.get_str();
    };
    auto add = [&](std::string from, std::string to, mpz_class index) {
        tab.entries.push_back({std::move(from), std::move(to), std::move(index)});
    };

    if (mu > 0) {
        bool high = (mu >= ue.mu0);
        tab.case_tag = high ? "mu>0,mu>=mu0" : "mu>0,mu<mu0";
        std::string up = "K(" + km(mu + 1) + ")";
        std::string down = "K(" + km(mu) + ")";
        mpz_class P(p);
        add(up, down, high ? P * p * p : P * p * p * p);
        add("K3(" + km(mu + 1) + ")", "K3(" + km(mu) + ")", high ? P : P * p);
        add(up, "Kt{1,2}", high ? 1 : p);
        add(up, "Kt{1}", high ? P : P * p);
        add(up, "Kt{2}", high ? P : P * p);
        add(up, "Kt{3}", P * p);
        add(up, "Kt{1,2,3}", 1);
        if (high) {
            add("Kt{1,2}", "Kt{1}", p);
            add("Kt{1,2}", "Kt{2}", p);
            add("Kt{1}", "Kt{3}", p);
            add("Kt{2}", "Kt{3}", p);
            add("Kt{3}", down, p);
        } else {
            add("Kt{1,2}", "Kt{1}", p);
            add("Kt{1,2}", "Kt{2}", p);
            add("Kt{1}", down, P * p);
            add("Kt{2}", down, P * p);
            add("Kt{3}", down, P * p);
        }
        return tab;
    }

    detail::require_mu0_hypotheses(t, N, p);
    const long n0 = ue.n0;
    const bool odd_n0 = (n0 % 2 == 1);
    const bool half = (n0 == (p + 1) / 2);
    const bool fullord = (n0 == p + 1);
    int i0 = (legendre(-t.d1, p) == 1) ? 1 : 2;
    int i0p = 3 - i0;

    std::string kNp = "K(" + km(1) + ")";
    std::string kN = "K(" + km(0) + ")";
    auto kt = [](std::initializer_list<int> idx) {
        std::string s = "Kt{";
        bool first = true;
        for (int i : idx) {
            if (!first) {
                s += ",";
            }
            s += std::to_string(i);
            first = false;
        }
        return s + "}";
    };

    mpz_class pp1(p + 1), pm1(p - 1);
    mpz_class full_order = pp1 * pp1 * pm1 * pm1;

    // Lemma-level orders of H/S_1 and H^(3)/S_1^(3)
    mpz_class H, H3;
    long Qk = 0;
    if (N != 1) {
        H = n0;
        tab.case_tag = half ? "mu=0,N!=1,n0=(p+1)/2" : (fullord ? "mu=0,N!=1,n0=p+1" : "mu=0,N!=1");
    } else {
        Qk = t.require_Q();
        H = odd_n0 ? 2 * mpz_class(n0) * Qk : mpz_class(n0) * Qk;
        tab.case_tag = (half || fullord) ? (half ? "mu=0,N=1,n0=(p+1)/2" : "mu=0,N=1,n0=p+1") : "mu=0,N=1";
    }
    H3 = (N != 1 || !odd_n0) ? mpz_class(n0) : 2 * mpz_class(n0);

    // ray-class steps and Theorem-level indices, valid for every n0
    add(kNp, kN, full_order / H);
    add("K3(" + km(1) + ")", "K3(" + km(0) + ")", pp1 * pm1 / H3);
    add(kNp, kt({1, 2}), ((N != 1) ? pp1 : 4 * pp1) / H);
    mpz_class wfull = (N != 1) ? (odd_n0 ? 2 * mpz_class(n0) : mpz_class(n0))
                               : (odd_n0 ? 8 * mpz_class(n0) : 4 * mpz_class(n0));
    add(kNp, kt({1, 2, 3}), wfull / H);
    add(kt({0}), kN, pm1);

    // The full lattice needs n0 = (p+1)/2 or p+1.
    if (N != 1 && half) { // diagram (i)
        add(kt({1, 2}), kt({i0, 3}), (p + 1) / 2);
        add(kt({1, 2}), kt({i0p, 3}), (p - 1) / 2);
        add(kt({i0, 3}), kt({i0}), 2);
        add(kt({i0, 3}), kt({3}), p - 1);
        add(kt({i0p, 3}), kt({3}), p + 1);
        add(kt({i0p, 3}), kt({i0p}), 2);
        add(kt({i0}), kt({0}), p - 1);
        add(kt({3}), kt({0}), 2);
        add(kt({i0p}), kt({0}), p + 1);
        add(kNp, kt({i0, 3}), p + 1);
        add(kNp, kt({i0p, 3}), p - 1);
    } else if (N != 1 && fullord) { // diagram (ii)
        add(kt({1, 2}), kt({i0}), p + 1);
        add(kt({1, 2}), kt({i0p}), p - 1);
        add(kt({i0}), kt({3}), p - 1);
        add(kt({i0p}), kt({3}), p + 1);
        add(kt({3}), kN, p - 1);
        add(kNp, kt({i0, 3}), p + 1);
        add(kt({i0, 3}), kt({i0}), 1);
        add(kNp, kt({i0p, 3}), p - 1);
        add(kt({i0p, 3}), kt({i0p}), 1);
        add(kt({3}), kt({0}), 1);
    } else if (N == 1 && (half || fullord)) { // diagram (iii)
        add(kt({1, 2}), kt({i0}), (p + 1) / 2);
        add(kt({1, 2}), kt({i0p}), (p - 1) / 2);
        add(kt({i0}), kt({3}), (p - 1) / 2);
        add(kt({i0p}), kt({3}), (p + 1) / 2);
        add(kt({3}), kN, p - 1);
        add(kNp, kt({i0, 3}), 2 * pp1 / Qk);
        add(kt({i0, 3}), kt({i0}), 1);
        add(kNp, kt({i0p, 3}), 2 * pm1 / Qk);
        add(kt({i0p, 3}), kt({i0p}), 1);
        add(kt({3}), kt({0}), 1);
    }
    if (N == 1) {
        add("K3(" + km(1) + "*inf)", "K3(" + km(1) + ")", odd_n0 ? 4 : 2);
    }
    return tab;
}

/* ---------------- Artin elements for the norm orbits ---------------- */

struct GaloisGen {
    std::string label;
    ResidueElement omega; // lift mod M = N p^{mu+1}, congruent to 1 mod N
    long order = 1;       // order as a Galois element
    long s = 0, t = 0;    // N_{K/K_I}(omega) = s*theta_I + t (mod M)
};

// Generators of Gal(Kt{I} / Kt{3}) together with the theta_I-coordinates
// of their norms, ready to be turned into index-action matrices.
inline std::vector<GaloisGen> galois_generators(const FieldTower &t, long N, long p, long mu, int I)
{
    if (I != 1 && I != 2) {
        throw hypothesis_error("galois_generators: I must be 1 or 2");
    }
    long pk = 1;
    for (long i = 0; i <= mu; ++i) {
        pk *= p;
    }
    long M = N * pk;
    BiquadResidueRing ring_M(t, M);

    if (mu > 0) {
        UnitExponents ue = unit_exponents(t, N, p);
        if (mu < ue.mu0) {
            throw hypothesis_error("galois_generators: mu >= mu0 = " + std::to_string(ue.mu0) + " required");
        }
        if (legendre(-((I == 1) ? t.d1 : t.d2), p) == 1) {
            throw hypothesis_error("galois_generators: (-d_I/p) must not be +1 for mu > 0");
        }
        long step = N * (pk / p); // N p^mu
        GaloisGen g;
        g.label = "1+Np^mu*sqrt(-d_" + std::to_string(I) + ")";
        g.omega = (I == 1) ? ring_M.make(1, step, 0, 0) : ring_M.make(1, 0, step, 0);
        g.order = p;
        auto st = ring_M.norm_as_theta(g.omega, I);
        g.s = st.first;
        g.t = st.second;
        return {g};
    }

    WtildeLattice L = wtilde_lattice(t, N, p, 0);
    // Kt{3} is a subfield of Kt{I} only when N != 1 and n0 = p+1, or N = 1
    // and n0 = (p+1)/2 or p+1.
    bool contained = (N != 1) ? (L.n0 == p + 1) : (L.n0 == (p + 1) / 2 || L.n0 == p + 1);
    if (!contained) {
        throw hypothesis_error("galois_generators: Kt{3} not contained in Kt{I} for n0 = " + std::to_string(L.n0));
    }
    BiquadResidueRing ring_p(t, p);

    auto lift = [&](const ResidueElement &x) { return detail::lift_unit_congruent(ring_M, x, N, pk); };
    auto with_norm = [&](std::string label, const ResidueElement &omega_p, long order) {
        GaloisGen g;
        g.label = std::move(label);
        g.omega = lift(omega_p);
        g.order = order;
        auto st = ring_M.norm_as_theta(g.omega, I);
        g.s = st.first;
        g.t = st.second;
        return g;
    };

    // recover the lattice generators
    const SubgroupDescriptor *w_i03 = nullptr, *w_i0p3 = nullptr;
    for (const auto &g : L.groups) {
        std::string li03 = "Wt'{" + std::to_string(std::min(L.i0, 3)) + "," + std::to_string(std::max(L.i0, 3)) + "}";
        std::string li0p3 = "Wt'{" + std::to_string(std::min(L.i0p, 3)) + "," + std::to_string(std::max(L.i0p, 3)) + "}";
        if (g.label == li03) {
            w_i03 = &g;
        }
        if (g.label == li0p3) {
            w_i0p3 = &g;
        }
    }
    if (w_i03 == nullptr || w_i0p3 == nullptr) {
        throw internal_error("galois_generators: lattice did not expose the ' groups");
    }

    std::vector<GaloisGen> gens;
    if (I == L.i0p) {
        // Gal(Kt{i0'}/Kt{3}) = <D_{i0}> x <Omega_{i0'}> (N != 1) or <Omega_{i0'}> (N = 1)
        ResidueElement Del = (L.i0 == 1) ? ring_p.make(0, inv_mod(L.D_i0, p), 0, 0)
                                         : ring_p.make(0, 0, inv_mod(L.D_i0, p), 0);
        if (N != 1) {
            gens.push_back(with_norm("D_{i0}", Del, 2));
        }
        gens.push_back(with_norm("Omega_{i0'}", w_i03->generators.at(0).g, (p + 1) / 2));
    } else {
        // Gal(Kt{i0}/Kt{3}) = <B> x <Omega_{i0}>
        gens.push_back(with_norm("B", L.B, 2));
        gens.push_back(with_norm("Omega_{i0}", w_i0p3->generators.at(0).g, (N != 1) ? (p - 1) / 2 : (p - 1) / 4));
    }
    return gens;
}

// The Frobenius-type generator of Gal(Kt{3}/K(N)): an omega with
// N_{K/Q}(omega) = C (mod p) for the smallest primitive root C, found by
// lexicographic scan over coordinates; order p-1.
inline GaloisGen hilbert_frobenius(const FieldTower &t, long N, long p, int I)
{
    detail::require_mu0_hypotheses(t, N, p);
    long C = primitive_root(p);
    BiquadResidueRing ring_p(t, p);
    long M = N * p;
    BiquadResidueRing ring_M(t, M);
    for (long a = 0; a < p; ++a) {
        for (long b = 0; b < p; ++b) {
            for (long c = 0; c < p; ++c) {
                for (long d = 0; d < p; ++d) {
                    ResidueElement x = ring_p.make(a, b, c, d);
                    if (ring_p.norm_q(x) != C) {
                        continue;
                    }
                    GaloisGen g;
                    g.label = "Omega_C";
                    g.omega = detail::lift_unit_congruent(ring_M, x, N, p);
                    g.order = p - 1;
                    auto st = ring_M.norm_as_theta(g.omega, I);
                    g.s = st.first;
                    g.t = st.second;
                    return g;
                }
            }
        }
    }
    throw internal_error("hilbert_frobenius: no element with norm C found");
}

} // namespace bqray

#endif
