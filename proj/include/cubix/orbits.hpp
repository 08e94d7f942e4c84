#ifndef CUBIX_ORBITS_HPP
#define CUBIX_ORBITS_HPP

// Stratum classification and the complete Sl(2,k)/Gl(2,k) orbit calculus for
// binary cubics: the triple-root invariant I_T, the canonical double-root
// normal form, sum-of-cubes decompositions, the twisted pair invariants on
// both generic strata, orbit equality tests, the group law on orbits of fixed
// discriminant, adjoint-orbit classes nu_Delta, membership in the moment
// image, and preimages under mu and Psi.

#include <utility>

#include "cubix/cubics.hpp"

namespace cubix {

// ---------------------------------------------------------------------------
// Field-change helpers for quadratic extensions
// ---------------------------------------------------------------------------

inline BinaryCubic lift_cubic(const FieldPtr& ext, const BinaryCubic& p) {
    return BinaryCubic::from_abcd(lift_to(ext, p.a()), lift_to(ext, p.b()),
                                  lift_to(ext, p.c()), lift_to(ext, p.d()));
}

inline BinaryCubic project_cubic(const BinaryCubic& p) {
    return BinaryCubic::from_abcd(project_to_base(p.a()), project_to_base(p.b()),
                                  project_to_base(p.c()), project_to_base(p.d()));
}

inline BinaryCubic conj_cubic(const BinaryCubic& p) {
    return BinaryCubic::from_abcd(quad_conjugate(p.a()), quad_conjugate(p.b()),
                                  quad_conjugate(p.c()), quad_conjugate(p.d()));
}

// If q is a nonzero multiple of p, return the scalar; p must be nonzero.
inline std::optional<Elem> proportionality(const BinaryCubic& p, const BinaryCubic& q) {
    if (p.is_zero()) throw ZeroCubic("proportionality: base cubic is zero");
    std::array<Elem, 4> pc = {p.a(), p.b(), p.c(), p.d()};
    std::array<Elem, 4> qc = {q.a(), q.b(), q.c(), q.d()};
    std::optional<Elem> t;
    for (size_t i = 0; i < 4; ++i) {
        if (pc[i].is_zero()) {
            if (!qc[i].is_zero()) return std::nullopt;
            continue;
        }
        Elem r = qc[i] / pc[i];
        if (t && !(*t == r)) return std::nullopt;
        t = r;
    }
    return t;
}

// ---------------------------------------------------------------------------
// Strata
// ---------------------------------------------------------------------------

enum class StratumKind { Zero, TripleRoot, DoubleRoot, GenericSquare, GenericNonSquare };

inline const char* stratum_name(StratumKind k) {
    switch (k) {
        case StratumKind::Zero: return "Zero";
        case StratumKind::TripleRoot: return "TripleRoot";
        case StratumKind::DoubleRoot: return "DoubleRoot";
        case StratumKind::GenericSquare: return "GenericSquare";
        case StratumKind::GenericNonSquare: return "GenericNonSquare";
    }
    return "?";
}

struct Stratum {
    StratumKind kind;
    std::optional<Elem> q;  // GenericSquare: the canonical square root of Q_n
    FieldPtr extension;     // GenericNonSquare: splitting field of x^2 - Q_n
};

// The canonical splitting field of x^2 - m for a nonsquare m: F_p(sqrt(d))
// with d the least non-residue, or Q(sqrt(D)) with D the square-free part.
inline FieldPtr splitting_field(const Elem& m) { return canonical_quad_ext_for(m.field(), m); }

inline Stratum classify(const BinaryCubic& p) {
    if (p.is_zero()) return {StratumKind::Zero, std::nullopt, nullptr};
    Mat2 m = moment(p);
    if (m.is_zero()) return {StratumKind::TripleRoot, std::nullopt, nullptr};
    Elem quartic = qn(p);
    if (quartic.is_zero()) return {StratumKind::DoubleRoot, std::nullopt, nullptr};
    if (auto q = sqrt_in_field(quartic))
        return {StratumKind::GenericSquare, canonical_sign(*q), nullptr};
    if (p.field()->kind() == FieldKind::QuadExt)
        throw Unsupported("classification beyond one quadratic extension");
    return {StratumKind::GenericNonSquare, std::nullopt, splitting_field(quartic)};
}

// ---------------------------------------------------------------------------
// Triple-root stratum: I_T
// ---------------------------------------------------------------------------

// Factorization P = lambda * phi^3 of a triple-root cubic.
inline std::pair<Elem, LinearForm> i_t_factor(const BinaryCubic& p) {
    if (classify(p).kind != StratumKind::TripleRoot)
        throw NotTripleRoot("i_t: cubic has no triple root");
    FieldPtr f = p.field();
    if (p.b().is_zero() && p.c().is_zero()) {
        if (p.d().is_zero()) return {p.a(), {f->one(), f->zero()}};   // a x^3
        return {p.d(), {f->zero(), f->one()}};                       // d y^3
    }
    Elem lambda = (p.b() * p.c()).inv();                             // (1/bc)(bx+cy)^3
    LinearForm phi{p.b(), p.c()};
    if (!(cube_of(phi).scaled(lambda) == p))
        throw InternalCheckFailure("i_t_factor: factorization check failed");
    return {lambda, phi};
}

inline CubeClass i_t(const BinaryCubic& p) { return cube_class(i_t_factor(p).first); }

// ---------------------------------------------------------------------------
// Double-root stratum: normal form and mu-fibre
// ---------------------------------------------------------------------------

// The unique pair with P = phi^2 xi and Omega(phi, xi) = 1.
inline std::pair<LinearForm, LinearForm> double_root_form(const BinaryCubic& p) {
    if (classify(p).kind != StratumKind::DoubleRoot)
        throw NotDoubleRoot("double_root_form: cubic has no double root");
    Mat2 m = moment(p);
    FieldPtr f = p.field();
    // Ker mu(P) in the form action is spanned by gamma*x - alpha*y, or y when
    // both vanish.
    LinearForm phi1 = (!m.a21.is_zero() || !m.a11.is_zero())
                          ? LinearForm{m.a21, -m.a11}
                          : LinearForm{f->zero(), f->one()};
    BForm phi2sq = BForm::linear(phi1) * BForm::linear(phi1);
    auto xi_form = exact_divide(p.form(), phi2sq);
    if (!xi_form || xi_form->degree() != 1)
        throw InternalCheckFailure("double_root_form: square factor does not divide");
    LinearForm xi1{xi_form->coeffs[0], xi_form->coeffs[1]};
    Elem lambda = area_form(phi1, xi1);
    if (lambda.is_zero())
        throw InternalCheckFailure("double_root_form: degenerate factorization");
    LinearForm phi = scale(lambda, phi1);
    LinearForm xi = scale((lambda * lambda).inv(), xi1);
    BForm check = BForm::linear(phi) * BForm::linear(phi) * BForm::linear(xi);
    if (!(check == p.form()) || !(area_form(phi, xi) == f->one()))
        throw InternalCheckFailure("double_root_form: normalization check failed");
    return {phi, xi};
}

// mu^-1(mu(P)) for P with nilpotent nonzero moment: the two affine lines
// {P + a Psi(P)} and {-P + b Psi(P)}, whose common direction is also phi^3.
struct MuFibreDouble {
    BinaryCubic base;       // P
    BinaryCubic direction;  // Psi(P), a nonzero multiple of phi^3
    LinearForm phi;         // square factor of P

    bool contains(const BinaryCubic& q) const {
        for (const BinaryCubic& b : {base, -base}) {
            BinaryCubic diff = q - b;
            if (diff.is_zero()) return true;
            if (proportionality(direction, diff).has_value()) return true;
        }
        return false;
    }
};

inline MuFibreDouble mu_fibre_double(const BinaryCubic& p) {
    auto [phi, xi] = double_root_form(p);  // also validates the stratum
    MuFibreDouble out{p, psi(p), phi};
    if (!proportionality(cube_of(phi), out.direction).has_value())
        throw InternalCheckFailure("mu_fibre_double: Psi(P) is not a multiple of phi^3");
    return out;
}

// ---------------------------------------------------------------------------
// Generic strata: eigenbasis, sum of cubes, invariants
// ---------------------------------------------------------------------------

struct Eigenbasis {
    Elem lambda1, lambda2;
    LinearForm phi1, phi2;
    Elem q;  // = lambda1 lambda2 Omega(phi1,phi2)^3, a square root of Q_n
};

// The closed-form decomposition P = lambda1 phi1^3 + lambda2 phi2^3 attached
// to a chosen square root q of Q_n(P).
inline Eigenbasis mu_eigenbasis(const BinaryCubic& p, std::optional<Elem> q_opt = std::nullopt) {
    FieldPtr f = p.field();
    Elem quartic = qn(p);
    if (quartic.is_zero()) throw NotGeneric("mu_eigenbasis: Q_n(P) = 0");
    Elem q = f->zero();
    if (q_opt) {
        q = *q_opt;
        if (!(q * q == quartic)) throw QMismatch("mu_eigenbasis: q^2 != Q_n(P)");
    } else {
        auto r = sqrt_in_field(quartic);
        if (!r) throw NotGeneric("mu_eigenbasis: Q_n(P) is not a square in the field");
        q = canonical_sign(*r);
    }
    Mat2 m = moment(p);
    const Elem &al = m.a11, &be = m.a12, &ga = m.a21;
    Elem two = f->from_long(2);
    Eigenbasis eb;
    eb.q = q;
    if (be.is_zero() && ga.is_zero()) {
        // P = a x^3 + d y^3, ad = +/- q
        if (p.a() * p.d() == q) {
            eb.lambda1 = p.a(); eb.phi1 = {f->one(), f->zero()};
            eb.lambda2 = p.d(); eb.phi2 = {f->zero(), f->one()};
        } else {
            eb.lambda1 = p.d(); eb.phi1 = {f->zero(), f->one()};
            eb.lambda2 = p.a(); eb.phi2 = {f->one(), f->zero()};
        }
    } else if (!ga.is_zero()) {
        eb.lambda1 = ((al + q) * p.a() + ga * p.b()) / (two * q);
        eb.phi1 = {f->one(), -((al - q) / ga)};
        eb.lambda2 = -((al - q) * p.a() + ga * p.b()) / (two * q);
        eb.phi2 = {f->one(), -((al + q) / ga)};
    } else {
        eb.lambda1 = (be * p.c() - (al - q) * p.d()) / (two * q);
        eb.phi1 = {(al + q) / be, f->one()};
        eb.lambda2 = (-(be * p.c()) + (al + q) * p.d()) / (two * q);
        eb.phi2 = {(al - q) / be, f->one()};
    }
    if (eb.lambda1.is_zero() || eb.lambda2.is_zero())
        throw InternalCheckFailure("mu_eigenbasis: zero coefficient in decomposition");
    BinaryCubic recon = cube_of(eb.phi1).scaled(eb.lambda1) + cube_of(eb.phi2).scaled(eb.lambda2);
    if (!(recon == p))
        throw InternalCheckFailure("mu_eigenbasis: decomposition does not reproduce P");
    Elem om = area_form(eb.phi1, eb.phi2);
    if (!(eb.lambda1 * eb.lambda2 * om * om * om == q))
        throw InternalCheckFailure("mu_eigenbasis: q relation failed");
    return eb;
}

struct SumOfCubes {
    BinaryCubic t1, t2;
    Elem lambda1, lambda2;
    LinearForm phi1, phi2;
};

// T1 = (1/2)(P + (1/3q) Psi(P)), T2 = (1/2)(P - (1/3q) Psi(P)).
inline SumOfCubes sum_of_cubes(const BinaryCubic& p, const Elem& q) {
    FieldPtr f = p.field();
    Elem quartic = qn(p);
    if (quartic.is_zero()) throw NotGeneric("sum_of_cubes: Q_n(P) = 0");
    if (q.is_zero() || !(q * q == quartic)) throw QMismatch("sum_of_cubes: q^2 != Q_n(P)");
    Elem half = f->from_long(2).inv();
    Elem coef = (f->from_long(3) * q).inv();
    BinaryCubic sp = psi(p);
    SumOfCubes sc;
    sc.t1 = (p + sp.scaled(coef)).scaled(half);
    sc.t2 = (p - sp.scaled(coef)).scaled(half);
    Eigenbasis eb = mu_eigenbasis(p, q);
    BinaryCubic c1 = cube_of(eb.phi1).scaled(eb.lambda1);
    BinaryCubic c2 = cube_of(eb.phi2).scaled(eb.lambda2);
    if (sc.t1 == c1 && sc.t2 == c2) {
        sc.lambda1 = eb.lambda1; sc.phi1 = eb.phi1;
        sc.lambda2 = eb.lambda2; sc.phi2 = eb.phi2;
    } else if (sc.t1 == c2 && sc.t2 == c1) {
        sc.lambda1 = eb.lambda2; sc.phi1 = eb.phi2;
        sc.lambda2 = eb.lambda1; sc.phi2 = eb.phi1;
    } else {
        throw InternalCheckFailure("sum_of_cubes: eigenbasis mismatch");
    }
    if (!(sc.t1 + sc.t2 == p))
        throw InternalCheckFailure("sum_of_cubes: T1 + T2 != P");
    Elem w = omega(sc.t1, sc.t2);
    if (!(w == q) && !(w == -q))
        throw InternalCheckFailure("sum_of_cubes: omega(T1,T2) != +/- q");
    return sc;
}

// ---------------------------------------------------------------------------
// Orbit invariants
// ---------------------------------------------------------------------------

struct OrbitInvariant {
    StratumKind kind;
    std::optional<CubeClass> c;  // TripleRoot / GenericSquare / GenericNonSquare
    std::optional<Elem> q;       // GenericSquare (in k) / GenericNonSquare (in k-hat)
    FieldPtr extension;          // GenericNonSquare
};

// I_{O[1]}(P) = [q, [lambda1][lambda2]^-1] with the canonical square root q.
inline OrbitInvariant i_o1(const BinaryCubic& p) {
    Stratum s = classify(p);
    if (s.kind != StratumKind::GenericSquare)
        throw NotGenericSquare("i_o1: Q_n(P) is not a nonzero square");
    Eigenbasis eb = mu_eigenbasis(p, s.q);
    return {StratumKind::GenericSquare, cube_class(eb.lambda1 / eb.lambda2), eb.q, nullptr};
}

// I_{O-hat[1]}(P) = [q-hat, [lambda lambda-bar^-1]] over the canonical
// splitting field; q-hat is pure imaginary and the class is unitary.
inline OrbitInvariant i_o1_hat(const BinaryCubic& p) {
    Stratum s = classify(p);
    if (s.kind != StratumKind::GenericNonSquare)
        throw NotGenericNonSquare("i_o1_hat: Q_n(P) is a square or zero");
    FieldPtr ext = s.extension;
    BinaryCubic ph = lift_cubic(ext, p);
    auto qh = sqrt_in_field(lift_to(ext, qn(p)));
    if (!qh) throw InternalCheckFailure("i_o1_hat: Q_n does not split in the extension");
    Elem q = canonical_sign(*qh);
    if (!is_pure_imaginary(q))
        throw InternalCheckFailure("i_o1_hat: square root of Q_n is not pure imaginary");
    Eigenbasis eb = mu_eigenbasis(ph, q);
    BinaryCubic t1 = cube_of(eb.phi1).scaled(eb.lambda1);
    BinaryCubic t2 = cube_of(eb.phi2).scaled(eb.lambda2);
    if (!(conj_cubic(t1) == t2))
        throw InternalCheckFailure("i_o1_hat: T2 is not the conjugate of T1");
    Elem u = eb.lambda1 * quad_conjugate(eb.lambda1).inv();
    if (!(u * quad_conjugate(u) == ext->one()))
        throw InternalCheckFailure("i_o1_hat: class representative is not unitary");
    return {StratumKind::GenericNonSquare, cube_class(u), q, ext};
}

// The full Sl-orbit invariant of a nonzero cubic.
inline OrbitInvariant invariant_of(const BinaryCubic& p) {
    Stratum s = classify(p);
    switch (s.kind) {
        case StratumKind::Zero: throw ZeroCubic("invariant_of: zero cubic");
        case StratumKind::TripleRoot:
            return {StratumKind::TripleRoot, i_t(p), std::nullopt, nullptr};
        case StratumKind::DoubleRoot:
            return {StratumKind::DoubleRoot, std::nullopt, std::nullopt, nullptr};
        case StratumKind::GenericSquare: return i_o1(p);
        case StratumKind::GenericNonSquare: return i_o1_hat(p);
    }
    throw InternalCheckFailure("invariant_of: unreachable");
}

// Equality in k* x_{Z2} k*/k*^3 (and its unitary analogue): (q,c) = (q',c')
// or (q,c) = (-q', c'^-1).
inline bool same_invariant_sl(const OrbitInvariant& a, const OrbitInvariant& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case StratumKind::TripleRoot: return *a.c == *b.c;
        case StratumKind::DoubleRoot: return true;
        case StratumKind::GenericSquare:
        case StratumKind::GenericNonSquare:
            if (a.kind == StratumKind::GenericNonSquare && !a.extension->same(*b.extension))
                return false;
            if (*a.q == *b.q && *a.c == *b.c) return true;
            if (*a.q == -*b.q && *a.c == b.c->inverse()) return true;
            return false;
        default: return false;
    }
}

// Gl-level equality: J = ([q] in k*/k*^3, class modulo inversion); in the
// nonsquare case [q] is taken modulo cubes of the base field k*.
inline bool same_invariant_gl(const OrbitInvariant& a, const OrbitInvariant& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case StratumKind::TripleRoot: return *a.c == *b.c;  // Sl orbits = Gl orbits on Z_mu
        case StratumKind::DoubleRoot: return true;
        case StratumKind::GenericSquare: {
            if (!(cube_class(*a.q) == cube_class(*b.q))) return false;
            return *a.c == *b.c || *a.c == b.c->inverse();
        }
        case StratumKind::GenericNonSquare: {
            Elem aq = *a.q;
            CubeClass ac = *a.c;
            if (!a.extension->same(*b.extension)) {
                // over Q the best-effort square-free reduction can present the
                // same abstract field as Q(sqrt(d1)) and Q(sqrt(d2)) with
                // d1/d2 a square; translate q across when that happens
                FieldPtr base = a.extension->base();
                if (!base->same(*b.extension->base())) return false;
                auto s = sqrt_in_field(a.extension->d() / b.extension->d());
                if (!s) return false;
                aq = b.extension->make(base->zero(), aq.im() * *s);
                const Elem& u = a.c->raw();
                ac = cube_class(b.extension->make(u.re(), u.im() * *s));
            }
            // q'/q is a ratio of pure imaginaries, hence in the base field
            Elem ratio = project_to_base(aq / *b.q);
            if (!cbrt_in_field(ratio).has_value()) return false;
            return ac == *b.c || ac == b.c->inverse();
        }
        default: return false;
    }
}

inline bool same_sl2_orbit(const BinaryCubic& p, const BinaryCubic& p2) {
    if (p.is_zero() || p2.is_zero()) throw ZeroCubic("same_sl2_orbit: zero cubic");
    detail::require_same_field(p.a(), p2.a());
    return same_invariant_sl(invariant_of(p), invariant_of(p2));
}

inline bool same_gl2_orbit(const BinaryCubic& p, const BinaryCubic& p2) {
    if (p.is_zero() || p2.is_zero()) throw ZeroCubic("same_gl2_orbit: zero cubic");
    detail::require_same_field(p.a(), p2.a());
    return same_invariant_gl(invariant_of(p), invariant_of(p2));
}

// ---------------------------------------------------------------------------
// Group law on orbits of fixed discriminant
// ---------------------------------------------------------------------------

// A representative of the composed orbit [q, c1 c2] in O_M/Sl(2,k).
inline BinaryCubic orbit_compose(const Elem& m, const BinaryCubic& p1, const BinaryCubic& p2) {
    if (m.is_zero()) throw NotGeneric("orbit_compose: M must be nonzero");
    if (!(qn(p1) == m) || !(qn(p2) == m))
        throw DiscriminantMismatch("orbit_compose: Q_n(P_i) != M");
    Stratum s1 = classify(p1), s2 = classify(p2);
    if (s1.kind != s2.kind) throw MixedStrata("orbit_compose: different strata");
    FieldPtr f = p1.field();
    if (s1.kind == StratumKind::GenericSquare) {
        OrbitInvariant i1 = i_o1(p1), i2 = i_o1(p2);
        Elem q = *i1.q;  // canonical, equal for both
        Elem alpha = (*i1.c * *i2.c).rep();
        // (1/(q alpha)) x^3 + q^2 alpha y^3 has invariant [q, [alpha]]
        BinaryCubic rep = BinaryCubic::from_abcd((q * alpha).inv(), f->zero(), f->zero(),
                                                 q * q * alpha);
        if (!(qn(rep) == m)) throw InternalCheckFailure("orbit_compose: wrong discriminant");
        OrbitInvariant expected{StratumKind::GenericSquare, *i1.c * *i2.c, q, nullptr};
        if (!same_invariant_sl(invariant_of(rep), expected))
            throw InternalCheckFailure("orbit_compose: composed invariant mismatch");
        return rep;
    }
    if (s1.kind != StratumKind::GenericNonSquare)
        throw NotGeneric("orbit_compose: both cubics must have nonzero discriminant");
    OrbitInvariant i1 = i_o1_hat(p1), i2 = i_o1_hat(p2);
    FieldPtr ext = i1.extension;
    Elem q = *i1.q;
    // exact unitary representative of the composed class
    Elem sigma = i1.c->raw() * i2.c->raw();
    Elem lam = quad_conjugate(sigma);  // [lambda] = conj(s); lambda lambda-bar = 1 = 1^3
    Elem two = ext->from_long(2);
    LinearForm alpha{-(q / two), ext->one()};
    LinearForm alpha_bar{quad_conjugate(alpha.e), quad_conjugate(alpha.f)};
    BinaryCubic ph = cube_of(alpha).scaled(lam / q) -
                     cube_of(alpha_bar).scaled(quad_conjugate(lam) / q);
    BinaryCubic rep = project_cubic(ph);
    if (!(qn(rep) == m)) throw InternalCheckFailure("orbit_compose: wrong discriminant");
    OrbitInvariant expected{StratumKind::GenericNonSquare, cube_class(sigma), q, ext};
    if (!same_invariant_sl(invariant_of(rep), expected))
        throw InternalCheckFailure("orbit_compose: composed invariant mismatch");
    return rep;
}

// ---------------------------------------------------------------------------
// Adjoint orbits, nu_Delta and the moment image
// ---------------------------------------------------------------------------

// nu_Delta(X) = [Omega(v, X v)] in k*/k*_Delta for any non-eigenvector v.
struct NuClass {
    Elem rep;    // Omega(v, X v)
    Elem delta;  // det X

    bool operator==(const NuClass& o) const {
        detail::require_same_field(rep, o.rep);
        if (!(delta == o.delta)) return false;
        return hilbert_membership(rep / o.rep, delta);
    }
    bool is_class_of(const Elem& x) const { return hilbert_membership(rep / x, delta); }
};

inline NuClass nu_delta(const Mat2& x) {
    if (x.is_zero()) throw ZeroMatrix("nu_delta: zero matrix");
    if (!x.is_traceless()) throw NotTraceless("nu_delta: matrix has nonzero trace");
    FieldPtr f = x.field();
    for (const Vec2& v : {Vec2{f->one(), f->zero()}, Vec2{f->zero(), f->one()},
                          Vec2{f->one(), f->one()}}) {
        Elem w = area_form(v, x * v);
        if (!w.is_zero()) return {w, x.det()};
    }
    throw InternalCheckFailure("nu_delta: all candidates are eigenvectors");
}

inline bool in_moment_image(const Mat2& x) {
    NuClass nu = nu_delta(x);
    return nu.is_class_of(x.field()->from_long(2));
}

// A cubic P with mu(P) = X, by the constructive direction of the moment-image
// characterization.  Absent when X is not in the image, or (over Q) when no
// norm-form witness is found within the search bound.
inline std::optional<BinaryCubic> moment_preimage(const Mat2& x) {
    if (x.is_zero()) throw ZeroMatrix("moment_preimage: zero matrix");
    if (!x.is_traceless()) throw NotTraceless("moment_preimage: matrix has nonzero trace");
    if (!in_moment_image(x)) return std::nullopt;
    FieldPtr f = x.field();
    Elem delta = x.det();
    // antidiagonalize: v non-eigenvector, w = Xv/s with s = Omega(v, Xv);
    // then g^-1 = [v w] is in Sl(2,k) and  g X g^-1 = [[0, -delta/s],[s, 0]].
    Vec2 v{f->one(), f->zero()};
    Elem s = area_form(v, x * v);
    if (s.is_zero()) {
        v = {f->zero(), f->one()};
        s = area_form(v, x * v);
    }
    if (s.is_zero()) {
        v = {f->one(), f->one()};
        s = area_form(v, x * v);
    }
    Vec2 w = (x * v);
    w = {w.x / s, w.y / s};
    Mat2 ginv{v.x, w.x, v.y, w.y};
    Mat2 g = ginv.inverse();
    Elem beta = -(delta / s), gamma = s;
    // Weyl-flip once if beta vanished (nilpotent case)
    bool flipped = false;
    if (beta.is_zero()) {
        std::swap(beta, gamma);
        beta = -beta;
        gamma = -gamma;
        flipped = true;
    }
    // witness -beta/2 = p^2 + q^2 delta
    auto wit = norm_form_witness(-(beta / f->from_long(2)), delta);
    if (!wit) return std::nullopt;  // honest absence within the search bound
    const Elem &pw = wit->first, &qw = wit->second;
    Elem c = pw, a = (gamma / beta) * pw, d = beta * qw, b = gamma * qw;
    BinaryCubic p0 = BinaryCubic::from_abcd(a, b, c, d);
    if (flipped) p0 = act_group(Mat2::weyl(f).inverse(), p0);
    BinaryCubic pre = act_group(ginv, p0);
    if (!(moment(pre) == x)) throw InternalCheckFailure("moment_preimage: mu mismatch");
    return pre;
}

// ---------------------------------------------------------------------------
// Preimages under Psi
// ---------------------------------------------------------------------------

inline std::optional<BinaryCubic> psi_preimage(const BinaryCubic& p) {
    if (p.is_zero()) throw ZeroCubic("psi_preimage: zero cubic");
    FieldPtr f = p.field();
    Elem quartic = qn(p);
    if (!quartic.is_zero()) {
        auto lam = cbrt_in_field(f->from_long(9) * quartic);
        if (!lam) return std::nullopt;
        BinaryCubic b = psi(p).scaled(-(*lam * *lam).inv());
        if (!(psi(b) == p)) throw InternalCheckFailure("psi_preimage: Psi(B) != P");
        return b;
    }
    // Q_n = 0: preimage exists iff mu(P)=0 and I_T(P)=[6]; then B = phi^2 (t xi0)
    // with Omega(phi, xi0)=1 and t^3 = -9 lambda / 2.
    if (!moment(p).is_zero()) return std::nullopt;
    auto [lambda, phi] = i_t_factor(p);
    Elem target = -(f->from_long(9) * lambda) / f->from_long(2);
    auto t = cbrt_in_field(target);
    if (!t) return std::nullopt;
    // xi0 with Omega(phi, xi0) = 1
    LinearForm xi0 = !phi.e.is_zero() ? LinearForm{f->zero(), phi.e.inv()}
                                      : LinearForm{-(phi.f.inv()), f->zero()};
    LinearForm xi = scale(*t, xi0);
    BForm bf = BForm::linear(phi) * BForm::linear(phi) * BForm::linear(xi);
    BinaryCubic b = BinaryCubic::from_form(bf);
    if (!(psi(b) == p)) throw InternalCheckFailure("psi_preimage: Psi(B) != P on N_mu");
    return b;
}

} // namespace cubix

#endif
