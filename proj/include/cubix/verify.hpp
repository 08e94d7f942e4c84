#ifndef CUBIX_VERIFY_HPP
#define CUBIX_VERIFY_HPP

// Identity verification (the Eisenstein syzygy and its classical corollary,
// the moment characterization, equivariance) and the exhaustive finite-field
// orbit census with per-orbit sizes, stabilizers and invariants.

#include <chrono>
#include <numeric>
#include <string>
#include <vector>

#include "cubix/factor.hpp"

namespace cubix {

// ---------------------------------------------------------------------------
// Identity checks (all exact)
// ---------------------------------------------------------------------------

// omega(Psi(P),Q)^2 - 9 Q_n(P) omega(P,Q)^2
//   = -(9/2) omega(mu(P)^{x3} Q, Q) - (9/2) Q_n(P) omega(mu(P) Q, Q)
inline bool check_eisenstein_symplectic(const BinaryCubic& p, const BinaryCubic& q) {
    detail::require_same_field(p.a(), q.a());
    FieldPtr f = p.field();
    Elem wpsi = omega(psi(p), q), wpq = omega(p, q), quartic = qn(p);
    Elem lhs = wpsi * wpsi - f->from_long(9) * quartic * wpq * wpq;
    Mat2 m = moment(p);
    Elem nine_half = f->from_long(9) / f->from_long(2);
    Elem rhs = -(nine_half * omega(sym_cube_apply(m, q), q)) -
               nine_half * quartic * omega(act_algebra(m, q), q);
    return lhs == rhs;
}

// Psi(P)(v)^2 - 9 Q_n(P) P(v)^2 = -(9/2) Omega(mu(P) v, v)^3
inline bool check_eisenstein_classical(const BinaryCubic& p, const Vec2& v) {
    FieldPtr f = p.field();
    Elem pv = evaluate(p, v), psv = evaluate(psi(p), v);
    Elem lhs = psv * psv - f->from_long(9) * qn(p) * pv * pv;
    Elem om = area_form(moment(p) * v, v);
    Elem rhs = -(f->from_long(9) / f->from_long(2)) * om * om * om;
    return lhs == rhs;
}

// Tr(mu(P) xi) = -(1/3) omega(xi.P, P)  and  2 B_mu(P, xi.P) = [xi, mu(P)]
inline bool check_moment_identity(const Mat2& xi, const BinaryCubic& p) {
    if (!xi.is_traceless()) throw NotTraceless("check_moment_identity");
    FieldPtr f = p.field();
    BinaryCubic xp = act_algebra(xi, p);
    if (!(moment(p).mul_trace(xi) == -(omega(xp, p) / f->from_long(3)))) return false;
    Mat2 lhs = b_mu(p, xp).scaled(f->from_long(2));
    return lhs == commutator(xi, moment(p));
}

// mu(g.P) = g mu(P) g^-1, Psi(g.P) = g.Psi(P) for g in Sl(2,k)
inline bool check_equivariance(const Mat2& g, const BinaryCubic& p) {
    if (!(g.det() == g.field()->one())) throw NotSl2("check_equivariance: det(g) != 1");
    BinaryCubic gp = act_group(g, p);
    if (!(moment(gp) == g * moment(p) * g.inverse())) return false;
    return psi(gp) == act_group(g, psi(p));
}

// ---------------------------------------------------------------------------
// Orbit census over a small prime field
// ---------------------------------------------------------------------------

struct OrbitEntry {
    BinaryCubic rep;  // lexicographically least raw coefficient vector
    unsigned long size;
    StratumKind stratum;
    OrbitInvariant invariant;
    mpz_class stabilizer;
};

struct OrbitCensus {
    FieldPtr field;
    std::vector<OrbitEntry> sl_orbits;            // ordered by representative
    std::vector<std::vector<size_t>> gl_orbits;   // groups of sl_orbits indices
    // aggregate Sl / Gl counts per stratum
    unsigned long sl_triple = 0, sl_double = 0, sl_square = 0, sl_nonsquare = 0;
    unsigned long gl_triple = 0, gl_double = 0, gl_square = 0, gl_nonsquare = 0;
    unsigned long sl_nonzero_disc = 0, gl_nonzero_disc = 0;
};

namespace detail {

struct UnionFind {
    std::vector<size_t> parent;
    explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    size_t find(size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(size_t a, size_t b) {
        a = find(a); b = find(b);
        if (a < b) parent[b] = a;
        else if (b < a) parent[a] = b;
    }
};

} // namespace detail

inline OrbitCensus census(const FieldPtr& f, unsigned long p_bound = 13) {
    if (f->kind() != FieldKind::Prime) throw NotPrimeField("census: prime fields only");
    mpz_class p = f->cardinality();
    if (p > p_bound) throw FieldTooLarge("census: p exceeds the bound");
    unsigned long pl = p.get_ui();
    unsigned long n = pl * pl * pl * pl;

    auto decode = [&](unsigned long i) {
        return BinaryCubic::from_raw(f->from_long(long(i % pl)), f->from_long(long((i / pl) % pl)),
                                     f->from_long(long((i / (pl * pl)) % pl)),
                                     f->from_long(long(i / (pl * pl * pl))));
    };
    auto res = [](const Elem& e) { return e.residue().get_ui(); };
    auto encode = [&](const BinaryCubic& c) {
        auto r = c.raw();
        return res(r[0]) + pl * res(r[1]) + pl * pl * res(r[2]) + pl * pl * pl * res(r[3]);
    };

    std::vector<Mat2> gens = {
        {f->one(), f->one(), f->zero(), f->one()},   // upper unipotent
        {f->one(), f->zero(), f->one(), f->one()},   // lower unipotent
        Mat2::weyl(f)};
    detail::UnionFind uf(n);
    for (unsigned long i = 1; i < n; ++i) {
        BinaryCubic c = decode(i);
        for (const Mat2& g : gens) uf.unite(i, encode(act_group(g, c)));
    }

    // collect Sl orbits; roots are the least index in each class by construction
    std::vector<unsigned long> root_of(n, 0);
    std::vector<size_t> roots;
    std::vector<unsigned long> sizes;
    for (unsigned long i = 1; i < n; ++i) {
        size_t r = uf.find(i);
        root_of[i] = r;
        if (r == i) {
            roots.push_back(i);
            sizes.push_back(0);
        }
    }
    std::vector<size_t> orbit_index(n, SIZE_MAX);
    for (size_t k = 0; k < roots.size(); ++k) orbit_index[roots[k]] = k;
    for (unsigned long i = 1; i < n; ++i) ++sizes[orbit_index[root_of[i]]];

    OrbitCensus out;
    out.field = f;
    mpz_class sl_order = p * (p * p - 1);
    for (size_t k = 0; k < roots.size(); ++k) {
        BinaryCubic rep = decode(roots[k]);
        OrbitEntry e{rep, sizes[k], classify(rep).kind, invariant_of(rep), 0};
        if (sl_order % sizes[k] != 0)
            throw InternalCheckFailure("census: orbit size does not divide |Sl(2,q)|");
        e.stabilizer = sl_order / sizes[k];
        out.sl_orbits.push_back(std::move(e));
    }

    // cross-check: the invariant is constant on every orbit ...
    for (unsigned long i = 1; i < n; ++i) {
        const OrbitEntry& e = out.sl_orbits[orbit_index[root_of[i]]];
        if (!same_invariant_sl(invariant_of(decode(i)), e.invariant))
            throw InternalCheckFailure("census: invariant not constant on an orbit");
    }
    // ... and distinct across different orbits
    for (size_t a = 0; a < out.sl_orbits.size(); ++a)
        for (size_t b = a + 1; b < out.sl_orbits.size(); ++b)
            if (same_invariant_sl(out.sl_orbits[a].invariant, out.sl_orbits[b].invariant))
                throw InternalCheckFailure("census: equal invariants on distinct orbits");

    // Gl fusion: act by diag(lambda, 1) over all det classes lambda
    detail::UnionFind gf(out.sl_orbits.size());
    for (unsigned long l = 2; l < pl; ++l) {
        Mat2 dl{f->from_long(long(l)), f->zero(), f->zero(), f->one()};
        for (size_t k = 0; k < out.sl_orbits.size(); ++k) {
            unsigned long img = encode(act_group(dl, out.sl_orbits[k].rep));
            gf.unite(k, orbit_index[root_of[img]]);
        }
    }
    std::vector<size_t> gl_index(out.sl_orbits.size(), SIZE_MAX);
    for (size_t k = 0; k < out.sl_orbits.size(); ++k) {
        size_t r = gf.find(k);
        if (gl_index[r] == SIZE_MAX) {
            gl_index[r] = out.gl_orbits.size();
            out.gl_orbits.push_back({});
        }
        out.gl_orbits[gl_index[r]].push_back(k);
    }
    // cross-check Gl fusion against the Gl invariant
    for (const auto& group : out.gl_orbits)
        for (size_t k : group)
            if (!same_invariant_gl(out.sl_orbits[group[0]].invariant,
                                   out.sl_orbits[k].invariant))
                throw InternalCheckFailure("census: Gl invariant not constant on a fused orbit");

    auto bump = [](StratumKind s, unsigned long& t, unsigned long& d, unsigned long& sq,
                   unsigned long& ns) {
        switch (s) {
            case StratumKind::TripleRoot: ++t; break;
            case StratumKind::DoubleRoot: ++d; break;
            case StratumKind::GenericSquare: ++sq; break;
            case StratumKind::GenericNonSquare: ++ns; break;
            default: break;
        }
    };
    unsigned long total = 0;
    for (const auto& e : out.sl_orbits) {
        bump(e.stratum, out.sl_triple, out.sl_double, out.sl_square, out.sl_nonsquare);
        total += e.size;
    }
    if (total != n - 1) throw InternalCheckFailure("census: orbit sizes do not sum to q^4 - 1");
    for (const auto& g : out.gl_orbits)
        bump(out.sl_orbits[g[0]].stratum, out.gl_triple, out.gl_double, out.gl_square,
             out.gl_nonsquare);
    out.sl_nonzero_disc = out.sl_square + out.sl_nonsquare;
    out.gl_nonzero_disc = out.gl_square + out.gl_nonsquare;
    return out;
}

// ---------------------------------------------------------------------------
// Seeded verification suite
// ---------------------------------------------------------------------------

struct TrialReport {
    std::string name;
    unsigned long trials = 0;
    unsigned long seed = 0;
    std::vector<std::string> failures;  // witness inputs
    double elapsed_ms = 0.0;

    bool pass() const { return failures.empty(); }
};

namespace detail {

// Deterministic sampler: bounded-height rationals over Q, uniform over F_p(^2).
class Sampler {
public:
    Sampler(const FieldPtr& f, unsigned long seed) : f_(f), rng_(gmp_randinit_default) {
        rng_.seed(seed);
    }

    Elem elem() {
        switch (f_->kind()) {
            case FieldKind::Rationals: {
                long num = mpz_class(rng_.get_z_range(101)).get_si() - 50;
                long den = mpz_class(rng_.get_z_range(50)).get_si() + 1;
                return f_->from_rat(mpq_class(num, den));
            }
            default: return f_->element_at(mpz_class(rng_.get_z_range(f_->cardinality())));
        }
    }
    Elem nonzero() {
        for (;;) {
            Elem e = elem();
            if (!e.is_zero()) return e;
        }
    }
    BinaryCubic cubic() {
        for (;;) {
            BinaryCubic p = BinaryCubic::from_raw(elem(), elem(), elem(), elem());
            if (!p.is_zero()) return p;
        }
    }
    Vec2 vec() { return {elem(), elem()}; }
    Mat2 traceless() {
        Elem a = elem();
        return {a, elem(), elem(), -a};
    }
    Mat2 sl2() {
        for (;;) {
            Elem a = elem(), b = elem(), c = elem();
            if (a.is_zero()) continue;
            return {a, b, c, (f_->one() + b * c) / a};
        }
    }
    Mat2 gl2() {
        for (;;) {
            Mat2 g{elem(), elem(), elem(), elem()};
            if (!g.det().is_zero()) return g;
        }
    }

private:
    FieldPtr f_;
    gmp_randclass rng_;
};

inline std::string witness(const BinaryCubic& p) {
    auto r = p.raw();
    return "cubic(" + r[0].str() + "," + r[1].str() + "," + r[2].str() + "," + r[3].str() + ")";
}

} // namespace detail

inline std::vector<TrialReport> verify_suite(unsigned long seed, unsigned long trials,
                                             const FieldPtr& f) {
    if (trials < 1) throw Error("verify_suite: trials must be >= 1");
    std::vector<TrialReport> reports;
    auto run = [&](const std::string& name, auto&& body) {
        TrialReport rep{name, trials, seed, {}, 0.0};
        detail::Sampler s(f, seed);
        auto t0 = std::chrono::steady_clock::now();
        for (unsigned long i = 0; i < trials; ++i) body(s, rep);
        rep.elapsed_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        reports.push_back(std::move(rep));
    };

    run("eisenstein_symplectic", [](detail::Sampler& s, TrialReport& rep) {
        BinaryCubic p = s.cubic(), q = s.cubic();
        if (!check_eisenstein_symplectic(p, q))
            rep.failures.push_back(detail::witness(p) + " " + detail::witness(q));
    });
    run("eisenstein_classical", [](detail::Sampler& s, TrialReport& rep) {
        BinaryCubic p = s.cubic();
        Vec2 v = s.vec();
        if (!check_eisenstein_classical(p, v))
            rep.failures.push_back(detail::witness(p) + " v=(" + v.x.str() + "," + v.y.str() + ")");
    });
    run("moment_identity", [](detail::Sampler& s, TrialReport& rep) {
        BinaryCubic p = s.cubic();
        Mat2 xi = s.traceless();
        if (!check_moment_identity(xi, p)) rep.failures.push_back(detail::witness(p));
    });
    run("equivariance", [](detail::Sampler& s, TrialReport& rep) {
        BinaryCubic p = s.cubic();
        Mat2 g = s.sl2();
        if (!check_equivariance(g, p)) rep.failures.push_back(detail::witness(p));
    });
    run("qn_scaling", [&](detail::Sampler& s, TrialReport& rep) {
        BinaryCubic p = s.cubic();
        Mat2 g = s.gl2();
        Elem d = g.det();
        if (!(qn(act_group(g, p)) == qn(p) * pow(d, 6L)))
            rep.failures.push_back(detail::witness(p));
    });
    run("psi_squared", [&](detail::Sampler& s, TrialReport& rep) {
        BinaryCubic p = s.cubic();
        Elem c = f->from_long(9) * qn(p);
        if (!(psi(psi(p)) == p.scaled(-(c * c)))) rep.failures.push_back(detail::witness(p));
    });
    run("omega_psi", [&](detail::Sampler& s, TrialReport& rep) {
        BinaryCubic p = s.cubic();
        if (!(omega(p, psi(p)) == f->from_long(6) * qn(p)))
            rep.failures.push_back(detail::witness(p));
    });
    run("sum_of_cubes_roundtrip", [](detail::Sampler& s, TrialReport& rep) {
        BinaryCubic p = s.cubic();
        Stratum st = classify(p);
        if (st.kind != StratumKind::GenericSquare) return;  // sampled identity, guarded domain
        SumOfCubes sc = sum_of_cubes(p, *st.q);
        Elem w = omega(sc.t1, sc.t2);
        if (!(sc.t1 + sc.t2 == p) || !(w * w == qn(p)))
            rep.failures.push_back(detail::witness(p));
    });
    run("factor_roundtrip", [](detail::Sampler& s, TrialReport& rep) {
        BinaryCubic p = s.cubic();
        if (!(full_factor(p).expand() == p.form())) rep.failures.push_back(detail::witness(p));
    });
    run("mu_fibre_double", [](detail::Sampler& s, TrialReport& rep) {
        // build a double-root cubic from random forms and test its mu-fibre
        Elem e1 = s.elem(), f1 = s.elem(), e2 = s.elem(), f2 = s.elem();
        LinearForm phi{e1, f1}, xi{e2, f2};
        if (area_form(phi, xi).is_zero()) return;
        BinaryCubic p = BinaryCubic::from_form(BForm::linear(phi) * BForm::linear(phi) *
                                               BForm::linear(xi));
        MuFibreDouble fib = mu_fibre_double(p);
        if (!fib.contains(p + psi(p).scaled(s.elem())) || !fib.contains(-p + psi(p).scaled(s.elem())))
            rep.failures.push_back(detail::witness(p));
    });
    return reports;
}

} // namespace cubix

#endif
