#ifndef CUBIX_CUBICS_HPP
#define CUBIX_CUBICS_HPP

// Binary cubics P = a x^3 + 3b x^2 y + 3c xy^2 + d y^3 and their symplectic
// covariants: the form omega, the moment map mu, the cubic covariant Psi, the
// normalized quartic Q_n, the polarized B_mu, and the Sl(2,k) / sl(2,k)
// actions.  Coefficients are stored with the 3-factors baked in; raw
// coefficient I/O divides/multiplies by 3 at the boundary.

#include <array>
#include <vector>

#include "cubix/fields.hpp"

namespace cubix {

// ---------------------------------------------------------------------------
// Small linear algebra over a field
// ---------------------------------------------------------------------------

struct Vec2 {
    Elem x, y;
};

// The linear form e*x + f*y.
struct LinearForm {
    Elem e, f;

    bool is_zero() const { return e.is_zero() && f.is_zero(); }
    bool operator==(const LinearForm& o) const { return e == o.e && f == o.f; }
};

struct Mat2 {
    Elem a11, a12, a21, a22;

    static Mat2 identity(const FieldPtr& f) {
        return {f->one(), f->zero(), f->zero(), f->one()};
    }
    static Mat2 zero(const FieldPtr& f) {
        return {f->zero(), f->zero(), f->zero(), f->zero()};
    }
    // [[0,-1],[1,0]]
    static Mat2 weyl(const FieldPtr& f) {
        return {f->zero(), -f->one(), f->one(), f->zero()};
    }

    const FieldPtr& field() const { return a11.field(); }

    Elem det() const { return a11 * a22 - a12 * a21; }
    Elem trace() const { return a11 + a22; }
    bool is_zero() const {
        return a11.is_zero() && a12.is_zero() && a21.is_zero() && a22.is_zero();
    }
    bool is_traceless() const { return trace().is_zero(); }

    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Mat2 operator+(const Mat2& o) const {
        return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
    }
    Mat2 operator-(const Mat2& o) const {
        return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
    }
    Mat2 operator-() const { return {-a11, -a12, -a21, -a22}; }
    Mat2 scaled(const Elem& s) const { return {s * a11, s * a12, s * a21, s * a22}; }
    bool operator==(const Mat2& o) const {
        return a11 == o.a11 && a12 == o.a12 && a21 == o.a21 && a22 == o.a22;
    }
    bool operator!=(const Mat2& o) const { return !(*this == o); }

    Mat2 inverse() const {
        Elem dd = det();
        if (dd.is_zero()) throw SingularMatrix("inverse of singular matrix");
        Elem di = dd.inv();
        return {a22 * di, -a12 * di, -a21 * di, a11 * di};
    }
    // The cofactor matrix (no transpose): [[m22,-m21],[-m12,m11]].
    Mat2 cofactor() const { return {a22, -a21, -a12, a11}; }

    Vec2 operator*(const Vec2& v) const {
        return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y};
    }

    Elem mul_trace(const Mat2& o) const {  // Tr(this * o)
        return a11 * o.a11 + a12 * o.a21 + a21 * o.a12 + a22 * o.a22;
    }
};

inline Mat2 commutator(const Mat2& a, const Mat2& b) { return a * b - b * a; }

// Symplectic area form on k^2: Omega(v,w) = v1 w2 - v2 w1.
inline Elem area_form(const Vec2& v, const Vec2& w) { return v.x * w.y - v.y * w.x; }

// Omega on linear forms: Omega(e x + f y, e' x + f' y) = e f' - f e'.
inline Elem area_form(const LinearForm& a, const LinearForm& b) {
    return a.e * b.f - a.f * b.e;
}

// tilde(v) = -v2 x + v1 y, the symplectic identification of k^2 with forms.
inline LinearForm tilde(const Vec2& v) { return {-v.y, v.x}; }

inline LinearForm operator+(const LinearForm& a, const LinearForm& b) {
    return {a.e + b.e, a.f + b.f};
}
inline LinearForm operator-(const LinearForm& a) { return {-a.e, -a.f}; }
inline LinearForm scale(const Elem& s, const LinearForm& a) { return {s * a.e, s * a.f}; }

// ---------------------------------------------------------------------------
// Homogeneous binary forms of arbitrary degree (factorization plumbing)
// ---------------------------------------------------------------------------

// coeffs[i] is the coefficient of x^(n-i) y^i, n = coeffs.size()-1.
struct BForm {
    FieldPtr field;
    std::vector<Elem> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    bool is_zero() const {
        for (const Elem& c : coeffs)
            if (!c.is_zero()) return false;
        return true;
    }
    bool operator==(const BForm& o) const {
        return degree() == o.degree() && [&] {
            for (size_t i = 0; i < coeffs.size(); ++i)
                if (!(coeffs[i] == o.coeffs[i])) return false;
            return true;
        }();
    }

    static BForm constant(const FieldPtr& f, const Elem& c) { return {f, {c}}; }
    static BForm linear(const LinearForm& l) { return {l.e.field(), {l.e, l.f}}; }
};

inline BForm operator*(const BForm& a, const BForm& b) {
    FieldPtr f = a.field;
    std::vector<Elem> out(a.coeffs.size() + b.coeffs.size() - 1, f->zero());
    for (size_t i = 0; i < a.coeffs.size(); ++i)
        for (size_t j = 0; j < b.coeffs.size(); ++j)
            out[i + j] = out[i + j] + a.coeffs[i] * b.coeffs[j];
    return {f, out};
}

inline BForm operator+(const BForm& a, const BForm& b) {
    if (a.degree() != b.degree()) throw InternalCheckFailure("BForm addition degree mismatch");
    std::vector<Elem> out;
    for (size_t i = 0; i < a.coeffs.size(); ++i) out.push_back(a.coeffs[i] + b.coeffs[i]);
    return {a.field, out};
}

inline BForm operator-(const BForm& a, const BForm& b) {
    if (a.degree() != b.degree()) throw InternalCheckFailure("BForm subtraction degree mismatch");
    std::vector<Elem> out;
    for (size_t i = 0; i < a.coeffs.size(); ++i) out.push_back(a.coeffs[i] - b.coeffs[i]);
    return {a.field, out};
}

inline BForm scale(const Elem& s, const BForm& a) {
    std::vector<Elem> out;
    for (const Elem& c : a.coeffs) out.push_back(s * c);
    return {a.field, out};
}

// Exact division of homogeneous forms; nullopt when g does not divide f.
inline std::optional<BForm> exact_divide(const BForm& f, const BForm& g) {
    if (g.is_zero()) throw DivisionByZero("division of forms by zero");
    int n = f.degree(), m = g.degree();
    if (f.is_zero() || n < m) return std::nullopt;
    // leading index (lex order with x > y) of g
    size_t gl = 0;
    while (g.coeffs[gl].is_zero()) ++gl;
    FieldPtr k = f.field;
    std::vector<Elem> rem = f.coeffs;
    std::vector<Elem> quo(static_cast<size_t>(n - m) + 1, k->zero());
    auto lead = [&]() -> long {
        for (size_t i = 0; i < rem.size(); ++i)
            if (!rem[i].is_zero()) return static_cast<long>(i);
        return -1;
    };
    for (long fl = lead(); fl >= 0; fl = lead()) {
        long qi = fl - static_cast<long>(gl);  // y-exponent of quotient monomial
        if (qi < 0 || qi > n - m) return std::nullopt;
        Elem coef = rem[static_cast<size_t>(fl)] / g.coeffs[gl];
        quo[static_cast<size_t>(qi)] = quo[static_cast<size_t>(qi)] + coef;
        for (size_t j = gl; j < g.coeffs.size(); ++j) {
            size_t idx = static_cast<size_t>(qi) + j;
            rem[idx] = rem[idx] - coef * g.coeffs[j];
        }
    }
    return BForm{k, quo};
}

// ---------------------------------------------------------------------------
// BinaryCubic
// ---------------------------------------------------------------------------

class BinaryCubic {
public:
    // From internal coefficients (a,b,c,d) of a x^3 + 3b x^2 y + 3c xy^2 + d y^3.
    static BinaryCubic from_abcd(const Elem& a, const Elem& b, const Elem& c, const Elem& d) {
        detail::require_same_field(a, b);
        detail::require_same_field(a, c);
        detail::require_same_field(a, d);
        BinaryCubic p;
        p.a_ = a; p.b_ = b; p.c_ = c; p.d_ = d;
        return p;
    }

    // From raw coefficients of p0 x^3 + p1 x^2 y + p2 xy^2 + p3 y^3.
    static BinaryCubic from_raw(const Elem& p0, const Elem& p1, const Elem& p2, const Elem& p3) {
        Elem three = p0.field()->from_long(3);
        return from_abcd(p0, p1 / three, p2 / three, p3);
    }

    static BinaryCubic zero(const FieldPtr& f) {
        return from_abcd(f->zero(), f->zero(), f->zero(), f->zero());
    }

    const FieldPtr& field() const { return a_.field(); }
    const Elem& a() const { return a_; }
    const Elem& b() const { return b_; }
    const Elem& c() const { return c_; }
    const Elem& d() const { return d_; }

    std::array<Elem, 4> raw() const {
        Elem three = field()->from_long(3);
        return {a_, three * b_, three * c_, d_};
    }

    bool is_zero() const {
        return a_.is_zero() && b_.is_zero() && c_.is_zero() && d_.is_zero();
    }

    bool operator==(const BinaryCubic& o) const {
        return a_ == o.a_ && b_ == o.b_ && c_ == o.c_ && d_ == o.d_;
    }
    bool operator!=(const BinaryCubic& o) const { return !(*this == o); }

    BinaryCubic operator+(const BinaryCubic& o) const {
        return from_abcd(a_ + o.a_, b_ + o.b_, c_ + o.c_, d_ + o.d_);
    }
    BinaryCubic operator-(const BinaryCubic& o) const {
        return from_abcd(a_ - o.a_, b_ - o.b_, c_ - o.c_, d_ - o.d_);
    }
    BinaryCubic operator-() const { return from_abcd(-a_, -b_, -c_, -d_); }
    BinaryCubic scaled(const Elem& s) const {
        return from_abcd(s * a_, s * b_, s * c_, s * d_);
    }

    BForm form() const {
        auto r = raw();
        return {field(), {r[0], r[1], r[2], r[3]}};
    }
    static BinaryCubic from_form(const BForm& f) {
        if (f.degree() != 3) throw InternalCheckFailure("from_form: degree != 3");
        return from_raw(f.coeffs[0], f.coeffs[1], f.coeffs[2], f.coeffs[3]);
    }

private:
    Elem a_, b_, c_, d_;
};

// (e x + f y)^3 as a binary cubic
inline BinaryCubic cube_of(const LinearForm& l) {
    return BinaryCubic::from_abcd(l.e * l.e * l.e, l.e * l.e * l.f, l.e * l.f * l.f,
                                  l.f * l.f * l.f);
}

// ---------------------------------------------------------------------------
// omega, evaluation
// ---------------------------------------------------------------------------

// omega(P,P') = a d' - d a' - 3 b c' + 3 c b'
inline Elem omega(const BinaryCubic& p, const BinaryCubic& q) {
    detail::require_same_field(p.a(), q.a());
    Elem three = p.field()->from_long(3);
    return p.a() * q.d() - p.d() * q.a() - three * p.b() * q.c() + three * p.c() * q.b();
}

// P(v1,v2) by direct substitution, cross-checked against omega(P, tilde(v)^3).
inline Elem evaluate(const BinaryCubic& p, const Vec2& v) {
    Elem three = p.field()->from_long(3);
    Elem direct = p.a() * v.x * v.x * v.x + three * p.b() * v.x * v.x * v.y +
                  three * p.c() * v.x * v.y * v.y + p.d() * v.y * v.y * v.y;
    Elem pairing = omega(p, cube_of(tilde(v)));
    if (!(direct == pairing))
        throw InternalCheckFailure("evaluate: direct and symplectic routes disagree");
    return direct;
}

// ---------------------------------------------------------------------------
// Moment map, B_mu, Psi, Q_n
// ---------------------------------------------------------------------------

// mu(P) = [[ad-bc, 2(bd-c^2)], [2(b^2-ac), -(ad-bc)]]
inline Mat2 moment(const BinaryCubic& p) {
    Elem two = p.field()->from_long(2);
    Elem alpha = p.a() * p.d() - p.b() * p.c();
    Elem beta = two * (p.b() * p.d() - p.c() * p.c());
    Elem gamma = two * (p.b() * p.b() - p.a() * p.c());
    return {alpha, beta, gamma, -alpha};
}

// Polarization of mu: B_mu(P,P) = mu(P), symmetric bilinear.
inline Mat2 b_mu(const BinaryCubic& p, const BinaryCubic& q) {
    detail::require_same_field(p.a(), q.a());
    Elem two = p.field()->from_long(2);
    Elem alpha = (p.a() * q.d() + p.d() * q.a() - p.b() * q.c() - p.c() * q.b()) / two;
    Elem beta = p.b() * q.d() + p.d() * q.b() - two * p.c() * q.c();
    Elem gamma = two * p.b() * q.b() - (p.a() * q.c() + p.c() * q.a());
    return {alpha, beta, gamma, -alpha};
}

// Lie algebra action of a traceless matrix on a binary cubic (derivation).
inline BinaryCubic act_algebra(const Mat2& xi, const BinaryCubic& p) {
    if (!xi.is_traceless()) throw NotTraceless("act_algebra: matrix has nonzero trace");
    const Elem &al = xi.a11, &be = xi.a12, &ga = xi.a21;
    auto r = p.raw();
    Elem two = p.field()->from_long(2);
    Elem three = p.field()->from_long(3);
    Elem s0 = -three * al * r[0] - ga * r[1];
    Elem s1 = -three * be * r[0] - al * r[1] - two * ga * r[2];
    Elem s2 = -two * be * r[1] + al * r[2] - three * ga * r[3];
    Elem s3 = -be * r[2] + three * al * r[3];
    return BinaryCubic::from_raw(s0, s1, s2, s3);
}

// Lie algebra action on linear forms: x -> -ax - by, y -> -cx + ay.
inline LinearForm act_algebra(const Mat2& xi, const LinearForm& l) {
    if (!xi.is_traceless()) throw NotTraceless("act_algebra: matrix has nonzero trace");
    return {-l.e * xi.a11 - l.f * xi.a21, -l.e * xi.a12 + l.f * xi.a11};
}

// Psi(P) = mu(P) . P, the cubic covariant.
inline BinaryCubic psi(const BinaryCubic& p) { return act_algebra(moment(p), p); }

// Q_n(P) = -det mu(P); also the closed form a^2d^2 - 3b^2c^2 - 6abcd + 4b^3d
// + 4ac^3.  Both are computed and must agree.
inline Elem qn(const BinaryCubic& p) {
    const Elem &a = p.a(), &b = p.b(), &c = p.c(), &d = p.d();
    FieldPtr f = p.field();
    Elem closed = a * a * d * d - f->from_long(3) * b * b * c * c -
                  f->from_long(6) * a * b * c * d + f->from_long(4) * b * b * b * d +
                  f->from_long(4) * a * c * c * c;
    Elem viadet = -moment(p).det();
    if (!(closed == viadet)) throw InternalCheckFailure("qn: determinant route disagrees");
    return closed;
}

// ---------------------------------------------------------------------------
// Group action and substitution
// ---------------------------------------------------------------------------

// Substitute x -> fx, y -> fy into P (images are linear forms), expanding exactly.
inline BinaryCubic substitute(const BinaryCubic& p, const LinearForm& fx, const LinearForm& fy) {
    BForm bx = BForm::linear(fx), by = BForm::linear(fy);
    auto r = p.raw();
    BForm acc = scale(r[0], bx * bx * bx) + scale(r[1], bx * bx * by) +
                scale(r[2], bx * by * by) + scale(r[3], by * by * by);
    return BinaryCubic::from_form(acc);
}

// Group action of g=[[a,b],[c,d]] on cubics: x -> dx - by, y -> -cx + ay.
inline BinaryCubic act_group(const Mat2& g, const BinaryCubic& p) {
    if (g.det().is_zero()) throw SingularMatrix("act_group: singular matrix");
    LinearForm fx{g.a22, -g.a12};
    LinearForm fy{-g.a21, g.a11};
    return substitute(p, fx, fy);
}

// Group action on linear forms (same substitution applied to e x + f y).
inline LinearForm act_group(const Mat2& g, const LinearForm& l) {
    if (g.det().is_zero()) throw SingularMatrix("act_group: singular matrix");
    return {l.e * g.a22 - l.f * g.a21, -l.e * g.a12 + l.f * g.a11};
}

// J = [[0,-1],[1,0]]: (a,b,c,d) -> (-d, c, -b, a).
inline BinaryCubic j_involution(const BinaryCubic& p) {
    return BinaryCubic::from_abcd(-p.d(), p.c(), -p.b(), p.a());
}

// The symmetric-cube endomorphism M^(x3) of the cubic space: the unique linear
// map with M^(x3)(phi^3) = (M.phi)^3; realized by substituting x -> M.x,
// y -> M.y (Lie-algebra form action images) and expanding.
inline BinaryCubic sym_cube_apply(const Mat2& m, const BinaryCubic& p) {
    if (!m.is_traceless()) throw NotTraceless("sym_cube_apply: matrix has nonzero trace");
    FieldPtr f = p.field();
    LinearForm fx = act_algebra(m, LinearForm{f->one(), f->zero()});
    LinearForm fy = act_algebra(m, LinearForm{f->zero(), f->one()});
    return substitute(p, fx, fy);
}

// The 4x4 matrix of M^(x3) on the raw monomial basis (x^3, x^2 y, x y^2, y^3),
// column j = image of the j-th basis monomial.
inline std::array<std::array<Elem, 4>, 4> sym_cube_matrix(const Mat2& m) {
    FieldPtr f = m.field();
    std::array<std::array<Elem, 4>, 4> cols{};
    for (int j = 0; j < 4; ++j) {
        std::array<Elem, 4> raws = {f->zero(), f->zero(), f->zero(), f->zero()};
        raws[static_cast<size_t>(j)] = f->one();
        BinaryCubic basis = BinaryCubic::from_raw(raws[0], raws[1], raws[2], raws[3]);
        auto img = sym_cube_apply(m, basis).raw();
        for (int i = 0; i < 4; ++i) cols[static_cast<size_t>(j)][static_cast<size_t>(i)] = img[static_cast<size_t>(i)];
    }
    // transpose columns into row-major
    std::array<std::array<Elem, 4>, 4> rows = cols;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            rows[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                cols[static_cast<size_t>(j)][static_cast<size_t>(i)];
    return rows;
}

} // namespace cubix

#endif
