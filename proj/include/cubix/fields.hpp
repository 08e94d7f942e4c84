#ifndef CUBIX_FIELDS_HPP
#define CUBIX_FIELDS_HPP

// Exact field arithmetic for Q, F_p (p prime, p != 2,3) and quadratic
// extensions k(sqrt(D)) of either, together with square/cube root
// extraction, square/cube class groups and norm-form membership tests.
//
// All values are immutable; every operation is a pure function.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cubix/errors.hpp"

namespace cubix {

class Field;
using FieldPtr = std::shared_ptr<const Field>;

enum class FieldKind { Rationals, Prime, QuadExt };

namespace detail {

// Default trial-division bound for the factorization-backed operations
// over Q (canonical cube/square classes, Hilbert symbols).
inline constexpr unsigned long kFactorBound = 1000000UL;

inline mpz_class powmod(const mpz_class& base, const mpz_class& exp, const mpz_class& mod) {
    mpz_class r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
    return r;
}

inline bool is_prime(const mpz_class& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

// Trial division up to `bound`; throws FactorizationBoundExceeded when a
// composite cofactor survives. n must be positive.
inline std::map<mpz_class, int> factorize(mpz_class n, unsigned long bound = kFactorBound) {
    std::map<mpz_class, int> out;
    if (n <= 0) throw ZeroElement("factorize: argument must be positive");
    for (mpz_class p = 2; p * p <= n && p <= bound; p == 2 ? p = 3 : p += 2) {
        while (n % p == 0) {
            out[p] += 1;
            n /= p;
        }
    }
    if (n > 1) {
        if (is_prime(n)) {
            out[n] += 1;
        } else {
            // composite survivor: accept perfect prime powers, else give up
            mpz_class r;
            if (mpz_perfect_square_p(n.get_mpz_t())) {
                mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
                if (is_prime(r)) {
                    out[r] += 2;
                    return out;
                }
            }
            if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), 3) != 0 && is_prime(r)) {
                out[r] += 3;
                return out;
            }
            throw FactorizationBoundExceeded("factorize: cofactor " + n.get_str() +
                                             " exceeds trial division bound");
        }
    }
    return out;
}

inline std::optional<mpz_class> exact_sqrt(const mpz_class& n) {
    if (n < 0) return std::nullopt;
    if (mpz_perfect_square_p(n.get_mpz_t())) {
        mpz_class r;
        mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
        return r;
    }
    return std::nullopt;
}

inline std::optional<mpz_class> exact_cbrt(const mpz_class& n) {
    mpz_class r;
    if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), 3) != 0) return r;
    return std::nullopt;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Elem: one exact element of Q, F_p or k(sqrt(D)).
// ---------------------------------------------------------------------------
class Elem {
public:
    Elem() = default;

    const FieldPtr& field() const { return field_; }
    FieldKind kind() const;

    bool is_zero() const;
    bool is_one() const;

    Elem operator+(const Elem& o) const;
    Elem operator-(const Elem& o) const;
    Elem operator*(const Elem& o) const;
    Elem operator/(const Elem& o) const;
    Elem operator-() const;
    Elem inv() const;
    bool operator==(const Elem& o) const;
    bool operator!=(const Elem& o) const { return !(*this == o); }

    Elem& operator+=(const Elem& o) { return *this = *this + o; }
    Elem& operator-=(const Elem& o) { return *this = *this - o; }
    Elem& operator*=(const Elem& o) { return *this = *this * o; }
    Elem& operator/=(const Elem& o) { return *this = *this / o; }

    // Payload accessors (valid for the matching field kind only).
    const mpq_class& rat() const { return rat_; }
    const mpz_class& residue() const { return res_; }
    const Elem& re() const { return uv_[0]; }  // u of u+v*sqrt(D)
    const Elem& im() const { return uv_[1]; }  // v of u+v*sqrt(D)

    std::string str() const;

private:
    friend class Field;
    friend struct ElemAccess;

    FieldPtr field_;
    mpq_class rat_;          // Rationals payload
    mpz_class res_;          // Prime payload, in [0,p)
    std::vector<Elem> uv_;   // QuadExt payload: {u, v}
};

Elem pow(const Elem& base, const mpz_class& e);
Elem pow(const Elem& base, long e);
std::optional<Elem> sqrt_in_field(const Elem& x);
std::optional<Elem> cbrt_in_field(const Elem& x);

// ---------------------------------------------------------------------------
// Field descriptor.
// ---------------------------------------------------------------------------
class Field : public std::enable_shared_from_this<Field> {
public:
    static FieldPtr rationals();
    static FieldPtr prime(const mpz_class& p);
    static FieldPtr quad_ext(const FieldPtr& base, const Elem& d);

    FieldKind kind() const { return kind_; }
    const mpz_class& p() const { return p_; }
    const FieldPtr& base() const { return base_; }
    const Elem& d() const { return d_[0]; }     // adjoined sqrt(d), d in base

    bool same(const Field& o) const;
    bool same(const FieldPtr& o) const { return same(*o); }

    Elem zero() const { return from_long(0); }
    Elem one() const { return from_long(1); }
    Elem from_long(long n) const;
    Elem from_rat(const mpq_class& q) const;            // Rationals
    Elem from_residue(const mpz_class& r) const;        // Prime
    Elem make(const Elem& u, const Elem& v) const;      // QuadExt, u,v in base

    // Multiplicative group order of a finite field (p-1 or p^2-1).
    mpz_class group_order() const;
    bool is_finite() const;

    // Deterministic enumeration of all field elements (finite fields only).
    mpz_class cardinality() const;
    Elem element_at(const mpz_class& index) const;

    std::string descriptor() const;  // "rat", "fp:7", "quad:rat:-1", "quad:fp:7:3"

    static FieldPtr parse_descriptor(const std::string& s);
    Elem parse_element(const std::string& s) const;

private:
    Field() = default;

    FieldKind kind_ = FieldKind::Rationals;
    mpz_class p_;
    FieldPtr base_;
    std::vector<Elem> d_;   // size 1 for QuadExt
};

// ---------------------------------------------------------------------------
// Field construction and structural equality
// ---------------------------------------------------------------------------

inline FieldPtr Field::rationals() {
    static FieldPtr instance = [] {
        auto f = std::shared_ptr<Field>(new Field());
        f->kind_ = FieldKind::Rationals;
        return FieldPtr(f);
    }();
    return instance;
}

inline FieldPtr Field::prime(const mpz_class& p) {
    if (p == 2 || p == 3 || !detail::is_prime(p))
        throw NotPrimeField("prime field requires a prime p with p != 2,3, got " + p.get_str());
    auto f = std::shared_ptr<Field>(new Field());
    f->kind_ = FieldKind::Prime;
    f->p_ = p;
    return f;
}

inline bool Field::same(const Field& o) const {
    if (kind_ != o.kind_) return false;
    switch (kind_) {
        case FieldKind::Rationals: return true;
        case FieldKind::Prime: return p_ == o.p_;
        case FieldKind::QuadExt:
            return base_->same(*o.base_) && d_[0] == o.d_[0];
    }
    return false;
}

inline Elem Field::from_long(long n) const {
    Elem e;
    e.field_ = shared_from_this();
    switch (kind_) {
        case FieldKind::Rationals:
            e.rat_ = n;
            break;
        case FieldKind::Prime: {
            mpz_class m = n;
            mpz_mod(e.res_.get_mpz_t(), m.get_mpz_t(), p_.get_mpz_t());
            break;
        }
        case FieldKind::QuadExt:
            e.uv_ = {base_->from_long(n), base_->from_long(0)};
            break;
    }
    return e;
}

inline Elem Field::from_rat(const mpq_class& q) const {
    if (kind_ == FieldKind::Rationals) {
        Elem e;
        e.field_ = shared_from_this();
        e.rat_ = q;
        e.rat_.canonicalize();
        return e;
    }
    if (kind_ == FieldKind::Prime) {
        mpz_class num = q.get_num(), den = q.get_den(), r, dinv;
        mpz_mod(num.get_mpz_t(), num.get_mpz_t(), p_.get_mpz_t());
        mpz_mod(den.get_mpz_t(), den.get_mpz_t(), p_.get_mpz_t());
        if (den == 0) throw DivisionByZero("denominator divisible by p");
        if (mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), p_.get_mpz_t()) == 0)
            throw DivisionByZero("denominator not invertible mod p");
        r = num * dinv;
        return from_residue(r);
    }
    return make(base_->from_rat(q), base_->from_long(0));
}

inline Elem Field::from_residue(const mpz_class& r) const {
    if (kind_ != FieldKind::Prime) throw FieldMismatch("from_residue on non-prime field");
    Elem e;
    e.field_ = shared_from_this();
    mpz_mod(e.res_.get_mpz_t(), r.get_mpz_t(), p_.get_mpz_t());
    return e;
}

inline Elem Field::make(const Elem& u, const Elem& v) const {
    if (kind_ != FieldKind::QuadExt) throw NotAnExtension("make(u,v) on non-extension field");
    if (!u.field()->same(*base_) || !v.field()->same(*base_))
        throw FieldMismatch("make(u,v): components must live in the base field");
    Elem e;
    e.field_ = shared_from_this();
    e.uv_ = {u, v};
    return e;
}

inline bool Field::is_finite() const {
    return kind_ == FieldKind::Prime ||
           (kind_ == FieldKind::QuadExt && base_->kind() == FieldKind::Prime);
}

inline mpz_class Field::group_order() const {
    if (kind_ == FieldKind::Prime) return p_ - 1;
    if (kind_ == FieldKind::QuadExt && base_->kind() == FieldKind::Prime)
        return base_->p() * base_->p() - 1;
    throw Unsupported("group_order: field is not finite");
}

inline mpz_class Field::cardinality() const {
    if (kind_ == FieldKind::Prime) return p_;
    if (kind_ == FieldKind::QuadExt && base_->kind() == FieldKind::Prime)
        return base_->p() * base_->p();
    throw Unsupported("cardinality: field is not finite");
}

inline Elem Field::element_at(const mpz_class& index) const {
    if (kind_ == FieldKind::Prime) return from_residue(index);
    if (kind_ == FieldKind::QuadExt && base_->kind() == FieldKind::Prime) {
        mpz_class u = index / base_->p();
        mpz_class v = index % base_->p();
        return make(base_->from_residue(u), base_->from_residue(v));
    }
    throw Unsupported("element_at: field is not finite");
}

// ---------------------------------------------------------------------------
// Elem arithmetic
// ---------------------------------------------------------------------------

inline FieldKind Elem::kind() const { return field_->kind(); }

inline bool Elem::is_zero() const {
    switch (kind()) {
        case FieldKind::Rationals: return rat_ == 0;
        case FieldKind::Prime: return res_ == 0;
        case FieldKind::QuadExt: return uv_[0].is_zero() && uv_[1].is_zero();
    }
    return false;
}

inline bool Elem::is_one() const { return *this == field_->one(); }

namespace detail {
inline void require_same_field(const Elem& a, const Elem& b) {
    if (!a.field() || !b.field() || !a.field()->same(*b.field()))
        throw FieldMismatch("operands live in different fields");
}
} // namespace detail

inline Elem Elem::operator+(const Elem& o) const {
    detail::require_same_field(*this, o);
    Elem r;
    r.field_ = field_;
    switch (kind()) {
        case FieldKind::Rationals: r.rat_ = rat_ + o.rat_; break;
        case FieldKind::Prime: {
            mpz_class s = res_ + o.res_;
            mpz_mod(r.res_.get_mpz_t(), s.get_mpz_t(), field_->p().get_mpz_t());
            break;
        }
        case FieldKind::QuadExt:
            r.uv_ = {uv_[0] + o.uv_[0], uv_[1] + o.uv_[1]};
            break;
    }
    return r;
}

inline Elem Elem::operator-() const {
    Elem r;
    r.field_ = field_;
    switch (kind()) {
        case FieldKind::Rationals: r.rat_ = -rat_; break;
        case FieldKind::Prime: {
            mpz_class s = -res_;
            mpz_mod(r.res_.get_mpz_t(), s.get_mpz_t(), field_->p().get_mpz_t());
            break;
        }
        case FieldKind::QuadExt:
            r.uv_ = {-uv_[0], -uv_[1]};
            break;
    }
    return r;
}

inline Elem Elem::operator-(const Elem& o) const { return *this + (-o); }

inline Elem Elem::operator*(const Elem& o) const {
    detail::require_same_field(*this, o);
    Elem r;
    r.field_ = field_;
    switch (kind()) {
        case FieldKind::Rationals: r.rat_ = rat_ * o.rat_; break;
        case FieldKind::Prime: {
            mpz_class s = res_ * o.res_;
            mpz_mod(r.res_.get_mpz_t(), s.get_mpz_t(), field_->p().get_mpz_t());
            break;
        }
        case FieldKind::QuadExt: {
            const Elem& d = field_->d();
            r.uv_ = {uv_[0] * o.uv_[0] + uv_[1] * o.uv_[1] * d,
                     uv_[0] * o.uv_[1] + uv_[1] * o.uv_[0]};
            break;
        }
    }
    return r;
}

inline Elem Elem::inv() const {
    if (is_zero()) throw DivisionByZero("inverse of zero");
    Elem r;
    r.field_ = field_;
    switch (kind()) {
        case FieldKind::Rationals: r.rat_ = 1 / rat_; break;
        case FieldKind::Prime:
            if (mpz_invert(r.res_.get_mpz_t(), res_.get_mpz_t(), field_->p().get_mpz_t()) == 0)
                throw DivisionByZero("residue not invertible");
            break;
        case FieldKind::QuadExt: {
            // (u+v w)^-1 = (u-v w)/(u^2 - d v^2)
            const Elem& d = field_->d();
            Elem n = uv_[0] * uv_[0] - uv_[1] * uv_[1] * d;
            if (n.is_zero()) throw DivisionByZero("zero norm in quadratic extension");
            Elem ninv = n.inv();
            r.uv_ = {uv_[0] * ninv, (-uv_[1]) * ninv};
            break;
        }
    }
    return r;
}

inline Elem Elem::operator/(const Elem& o) const { return *this * o.inv(); }

inline bool Elem::operator==(const Elem& o) const {
    detail::require_same_field(*this, o);
    switch (kind()) {
        case FieldKind::Rationals: return rat_ == o.rat_;
        case FieldKind::Prime: return res_ == o.res_;
        case FieldKind::QuadExt: return uv_[0] == o.uv_[0] && uv_[1] == o.uv_[1];
    }
    return false;
}

inline Elem pow(const Elem& base, const mpz_class& e) {
    if (e < 0) return pow(base.inv(), mpz_class(-e));
    Elem acc = base.field()->one();
    Elem b = base;
    mpz_class n = e;
    while (n > 0) {
        if (mpz_odd_p(n.get_mpz_t())) acc = acc * b;
        b = b * b;
        n >>= 1;
    }
    return acc;
}

inline Elem pow(const Elem& base, long e) { return pow(base, mpz_class(e)); }

// ---------------------------------------------------------------------------
// Conjugation, norm, imaginary part tests on quadratic extensions
// ---------------------------------------------------------------------------

inline Elem quad_conjugate(const Elem& x) {
    if (x.kind() != FieldKind::QuadExt) throw NotAnExtension("quad_conjugate");
    return x.field()->make(x.re(), -x.im());
}

inline Elem quad_norm(const Elem& x) {
    if (x.kind() != FieldKind::QuadExt) throw NotAnExtension("quad_norm");
    return x.re() * x.re() - x.im() * x.im() * x.field()->d();
}

inline bool is_pure_imaginary(const Elem& x) {
    if (x.kind() != FieldKind::QuadExt) throw NotAnExtension("is_pure_imaginary");
    return x.re().is_zero();
}

// Embed an element of the base field into its quadratic extension.
inline Elem lift_to(const FieldPtr& ext, const Elem& x) {
    if (ext->kind() != FieldKind::QuadExt) throw NotAnExtension("lift_to");
    if (x.field()->same(*ext)) return x;
    if (!x.field()->same(*ext->base())) throw FieldMismatch("lift_to: not a base element");
    return ext->make(x, x.field()->from_long(0));
}

// Project u+0*w back to the base field; throws if the imaginary part is nonzero.
inline Elem project_to_base(const Elem& x) {
    if (x.kind() != FieldKind::QuadExt) throw NotAnExtension("project_to_base");
    if (!x.im().is_zero()) throw InternalCheckFailure("project_to_base: element not in base field");
    return x.re();
}

// ---------------------------------------------------------------------------
// Square and cube roots
// ---------------------------------------------------------------------------

namespace detail {

// First element z (in enumeration order) of a finite field k with
// z^(m/ell) != 1, i.e. a non ell-th power; m = |k*|.
inline Elem find_non_power(const FieldPtr& f, const mpz_class& ell) {
    mpz_class m = f->group_order();
    mpz_class e = m / ell;
    for (mpz_class i = 1; i < f->cardinality(); ++i) {
        Elem z = f->element_at(i);
        if (z.is_zero()) continue;
        if (!(pow(z, e) == f->one())) return z;
    }
    throw InternalCheckFailure("find_non_power: no non-residue found");
}

// Tonelli-Shanks in any cyclic group k* of known order m.
inline std::optional<Elem> finite_sqrt(const Elem& a) {
    const FieldPtr& f = a.field();
    if (a.is_zero()) return a;
    mpz_class m = f->group_order();
    Elem one = f->one();
    if (!(pow(a, m / 2) == one)) return std::nullopt;  // Euler criterion
    mpz_class t = m;
    unsigned s = 0;
    while (mpz_even_p(t.get_mpz_t())) { t >>= 1; ++s; }
    if (s == 1) {
        Elem r = pow(a, (t + 1) / 2);
        return r;
    }
    Elem z = find_non_power(f, 2);
    Elem c = pow(z, t);
    Elem r = pow(a, (t + 1) / 2);
    Elem u = pow(a, t);
    unsigned mexp = s;
    while (!(u == one)) {
        Elem u2 = u;
        unsigned i = 0;
        while (!(u2 == one)) { u2 = u2 * u2; ++i; }
        Elem b = c;
        for (unsigned j = 0; j + i + 1 < mexp; ++j) b = b * b;
        mexp = i;
        c = b * b;
        u = u * c;
        r = r * b;
    }
    return r;
}

// Cube roots in any finite field; Adleman-Manders-Miller when 3 | m.
inline std::optional<Elem> finite_cbrt(const Elem& a) {
    const FieldPtr& f = a.field();
    if (a.is_zero()) return a;
    mpz_class m = f->group_order();
    Elem one = f->one();
    if (m % 3 != 0) {
        // cubing is a bijection: unique root a^(3^-1 mod m)
        mpz_class inv3;
        mpz_class three = 3;
        mpz_invert(inv3.get_mpz_t(), three.get_mpz_t(), m.get_mpz_t());
        return pow(a, inv3);
    }
    if (!(pow(a, m / 3) == one)) return std::nullopt;
    mpz_class t = m;
    unsigned s = 0;
    while (t % 3 == 0) { t /= 3; ++s; }
    Elem z = find_non_power(f, 3);
    Elem g = pow(z, t);  // generator of the Sylow 3-subgroup, order 3^s
    // discrete log of a^t base g, digit by digit
    Elem xi = pow(a, t);
    mpz_class order3 = 1;
    for (unsigned i = 0; i < s; ++i) order3 *= 3;
    Elem g1 = pow(g, order3 / 3);  // primitive 3rd root of unity
    mpz_class e = 0, digit_base = 1;
    Elem cur = xi;
    for (unsigned i = 0; i < s; ++i) {
        Elem probe = pow(cur, order3 / (digit_base * 3));
        mpz_class digit = 0;
        Elem w = one;
        while (!(probe == w)) {
            w = w * g1;
            digit += 1;
            if (digit > 2) throw InternalCheckFailure("finite_cbrt: bad discrete log digit");
        }
        e += digit * digit_base;
        if (digit != 0) cur = cur * pow(g, order3 - digit * digit_base);
        digit_base *= 3;
    }
    if (e % 3 != 0) return std::nullopt;
    // x = a^u * g^w with 3u = t+1 or 2t+1, w fixing the Sylow part
    mpz_class u, w;
    if (t % 3 == 2) {
        u = (t + 1) / 3;
        w = (order3 - e / 3) % order3;
    } else {
        u = (2 * t + 1) / 3;
        w = (order3 - 2 * (e / 3) % order3 + order3) % order3;
    }
    Elem x = pow(a, u) * pow(g, w);
    if (!(x * x * x == a)) throw InternalCheckFailure("finite_cbrt: validation failed");
    return x;
}

std::vector<mpq_class> rational_roots(const std::vector<mpq_class>& coeffs,
                                      unsigned long bound);

} // namespace detail

inline std::optional<Elem> sqrt_in_field(const Elem& x) {
    const FieldPtr& f = x.field();
    if (x.is_zero()) return x;
    switch (f->kind()) {
        case FieldKind::Rationals: {
            const mpq_class& q = x.rat();
            auto n = detail::exact_sqrt(q.get_num());
            auto d = detail::exact_sqrt(q.get_den());
            if (!n || !d) return std::nullopt;
            return f->from_rat(mpq_class(*n, *d));
        }
        case FieldKind::Prime:
            return detail::finite_sqrt(x);
        case FieldKind::QuadExt: {
            if (f->is_finite()) return detail::finite_sqrt(x);
            // (a+b w)^2 = u+v w over Q(sqrt(D)), solved through the norm
            const Elem& u = x.re();
            const Elem& v = x.im();
            const Elem& D = f->d();
            if (v.is_zero()) {
                if (auto r = sqrt_in_field(u)) return lift_to(f, *r);
                if (auto r = sqrt_in_field(u / D))
                    return f->make(u.field()->from_long(0), *r);
                return std::nullopt;
            }
            Elem norm = u * u - v * v * D;
            auto s = sqrt_in_field(norm);
            if (!s) return std::nullopt;
            Elem two = u.field()->from_long(2);
            for (const Elem& sv : {*s, -*s}) {
                Elem asq = (u + sv) / two;
                if (auto a = sqrt_in_field(asq)) {
                    if (!a->is_zero()) {
                        Elem b = v / (two * *a);
                        Elem cand = f->make(*a, b);
                        if (cand * cand == x) return cand;
                    }
                }
            }
            return std::nullopt;
        }
    }
    return std::nullopt;
}

inline std::optional<Elem> cbrt_in_field(const Elem& x) {
    const FieldPtr& f = x.field();
    if (x.is_zero()) return x;
    switch (f->kind()) {
        case FieldKind::Rationals: {
            const mpq_class& q = x.rat();
            auto n = detail::exact_cbrt(q.get_num());
            auto d = detail::exact_cbrt(q.get_den());
            if (!n || !d) return std::nullopt;
            return f->from_rat(mpq_class(*n, *d));
        }
        case FieldKind::Prime:
            return detail::finite_cbrt(x);
        case FieldKind::QuadExt: {
            if (f->is_finite()) return detail::finite_cbrt(x);
            // (s+t w)^3 = u+v w over Q(sqrt(D)):
            //   s^3 + 3 s t^2 D = u,  3 s^2 t + t^3 D = v.
            const Elem& u = x.re();
            const Elem& v = x.im();
            const Elem& D = f->d();
            FieldPtr base = f->base();
            Elem three = base->from_long(3);
            if (v.is_zero()) {
                if (auto s = cbrt_in_field(u)) return lift_to(f, *s);
                // 3 s^2 + t^2 D = 0 branch: u = -8 s^3
                Elem eight = base->from_long(8);
                if (auto s = cbrt_in_field(-(u / eight))) {
                    if (!s->is_zero()) {
                        Elem tsq = -(three * *s * *s) / D;
                        if (auto t = sqrt_in_field(tsq)) {
                            Elem cand = f->make(*s, *t);
                            if (cand * cand * cand == x) return cand;
                        }
                    }
                }
                return std::nullopt;
            }
            // eliminate: with r = s/t, v r^3 - 3u r^2 + 3Dv r - Du = 0
            std::vector<mpq_class> poly = {v.rat(), mpq_class(-3) * u.rat(),
                                           mpq_class(3) * D.rat() * v.rat(),
                                           -(D.rat() * u.rat())};
            for (const mpq_class& rq : detail::rational_roots(poly, detail::kFactorBound)) {
                Elem r = base->from_rat(rq);
                Elem den = three * r * r + D;
                if (den.is_zero()) continue;
                if (auto t = cbrt_in_field(v / den)) {
                    Elem cand = f->make(r * *t, *t);
                    if (cand * cand * cand == x) return cand;
                }
            }
            // pure-imaginary root candidate (s = 0): x = t^3 D w requires u=0
            return std::nullopt;
        }
    }
    return std::nullopt;
}

namespace detail {

// All rational roots of c0 x^n + c1 x^(n-1) + ... + cn, by the rational
// root theorem on the integer-cleared polynomial.
inline std::vector<mpq_class> rational_roots(const std::vector<mpq_class>& coeffs,
                                             unsigned long bound) {
    std::vector<mpq_class> roots;
    if (coeffs.empty()) return roots;
    // clear denominators
    mpz_class lcm = 1;
    for (const auto& c : coeffs) {
        mpz_class d = c.get_den();
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), d.get_mpz_t());
    }
    std::vector<mpz_class> ic;
    for (const auto& c : coeffs) {
        mpq_class v = c * lcm;
        v.canonicalize();
        ic.push_back(v.get_num());
    }
    // strip leading zeros
    size_t lead = 0;
    while (lead < ic.size() && ic[lead] == 0) ++lead;
    ic.erase(ic.begin(), ic.begin() + static_cast<long>(lead));
    if (ic.size() <= 1) return roots;
    // deflate x=0 roots
    bool zero_root = false;
    while (ic.back() == 0) {
        ic.pop_back();
        zero_root = true;
        if (ic.size() == 1) break;
    }
    if (zero_root) roots.emplace_back(0);
    if (ic.size() <= 1) return roots;

    auto divisors = [&](const mpz_class& n) {
        std::vector<mpz_class> out = {1};
        for (const auto& [pfac, e] : factorize(abs(n), bound)) {
            size_t cur = out.size();
            mpz_class pk = 1;
            for (int i = 0; i < e; ++i) {
                pk *= pfac;
                for (size_t j = 0; j < cur; ++j) out.push_back(out[j] * pk);
            }
        }
        return out;
    };
    auto eval = [&](const mpq_class& t) {
        mpq_class acc = 0;
        for (const auto& c : ic) acc = acc * t + mpq_class(c);
        return acc;
    };
    for (const mpz_class& num : divisors(ic.back())) {
        for (const mpz_class& den : divisors(ic.front())) {
            for (int sign : {1, -1}) {
                mpq_class t(sign * num, den);
                t.canonicalize();
                if (eval(t) == 0) {
                    bool seen = false;
                    for (const auto& r : roots) seen = seen || (r == t);
                    if (!seen) roots.push_back(t);
                }
            }
        }
    }
    return roots;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Cube classes and square classes
// ---------------------------------------------------------------------------

namespace detail {

// Canonical coset representative of x in k*/k*^n for n in {2,3}.
// Q: positive factored representative (sign kept for n=2);
// F_p: least positive coset member; small finite quad ext: least member in
// enumeration order. For Q(sqrt(D)) the element itself is kept (equality is
// still exact, via root extraction on quotients).
inline Elem class_canonical_rep(const Elem& x, int n, unsigned long bound = kFactorBound) {
    const FieldPtr& f = x.field();
    auto has_root = [&](const Elem& e) {
        return n == 2 ? sqrt_in_field(e).has_value() : cbrt_in_field(e).has_value();
    };
    switch (f->kind()) {
        case FieldKind::Rationals: {
            const mpq_class& q = x.rat();
            // x * den^n is an integer in the same class: num * den^(n-1)
            mpz_class m = q.get_num();
            for (int i = 0; i + 1 < n; ++i) m *= q.get_den();
            int sign = mpz_sgn(m.get_mpz_t());
            mpz_class rep = 1;
            try {
                for (const auto& [pfac, e] : factorize(abs(m), bound)) {
                    int r = e % n;
                    for (int i = 0; i < r; ++i) rep *= pfac;
                }
            } catch (const FactorizationBoundExceeded&) {
                return x;  // keep raw; class equality still works via root tests
            }
            if (n == 2 && sign < 0) rep = -rep;  // -1 is a cube, not a square
            return f->from_rat(mpq_class(rep));
        }
        case FieldKind::Prime:
        case FieldKind::QuadExt: {
            if (!f->is_finite()) return x;  // Q(sqrt(D)): keep as is
            if (f->kind() == FieldKind::QuadExt && f->base()->p() > 200) return x;
            mpz_class card = f->cardinality();
            for (mpz_class i = 1; i < card; ++i) {
                Elem y = f->element_at(i);
                if (y.is_zero()) continue;
                if (has_root(y / x)) return y;
            }
            throw InternalCheckFailure("class_canonical_rep: no representative found");
        }
    }
    return x;
}

} // namespace detail

template <int N>
class PowerClass {
    static_assert(N == 2 || N == 3);

public:
    static PowerClass of(const Elem& x) {
        if (x.is_zero()) throw ZeroElement("class of zero element");
        PowerClass c;
        c.raw_ = x;
        c.rep_ = detail::class_canonical_rep(x, N);
        return c;
    }

    const Elem& rep() const { return rep_; }
    const Elem& raw() const { return raw_; }

    bool operator==(const PowerClass& o) const {
        detail::require_same_field(rep_, o.rep_);
        if (rep_ == o.rep_) return true;
        Elem q = rep_ / o.rep_;
        return N == 2 ? sqrt_in_field(q).has_value() : cbrt_in_field(q).has_value();
    }
    bool operator!=(const PowerClass& o) const { return !(*this == o); }

    PowerClass operator*(const PowerClass& o) const { return of(raw_ * o.raw_); }

    // x^-1 and x^(N-1) lie in the same class; avoids a division
    PowerClass inverse() const { return of(pow(raw_, long(N - 1))); }

    bool is_identity() const {
        return N == 2 ? sqrt_in_field(rep_).has_value() : cbrt_in_field(rep_).has_value();
    }

private:
    Elem raw_;
    Elem rep_;
};

using CubeClass = PowerClass<3>;
using SquareClass = PowerClass<2>;

inline CubeClass cube_class(const Elem& x) { return CubeClass::of(x); }
inline SquareClass square_class(const Elem& x) { return SquareClass::of(x); }

// ---------------------------------------------------------------------------
// Hilbert symbols over Q and membership in k*_Delta = {a^2 + b^2 Delta}
// ---------------------------------------------------------------------------

namespace detail {

inline int legendre(const mpz_class& a, const mpz_class& p) {
    return mpz_legendre(a.get_mpz_t(), p.get_mpz_t());
}

// Hilbert symbol (a,b)_p for nonzero integers a,b; p = 0 means the real place.
inline int hilbert_symbol_at(mpz_class a, mpz_class b, const mpz_class& p) {
    if (p == 0) return (a < 0 && b < 0) ? -1 : 1;
    auto split = [&](mpz_class n, mpz_class& unit) {
        int val = 0;
        while (n % p == 0) { n /= p; ++val; }
        unit = n;
        return val;
    };
    mpz_class u, w;
    int alpha = split(a, u), beta = split(b, w);
    if (p == 2) {
        auto eps = [](const mpz_class& n) { return ((n - 1) / 2) % 2 != 0; };
        auto omg = [](const mpz_class& n) { return ((n * n - 1) / 8) % 2 != 0; };
        bool neg = (eps(u) && eps(w));
        if (alpha % 2 != 0 && omg(w)) neg = !neg;
        if (beta % 2 != 0 && omg(u)) neg = !neg;
        return neg ? -1 : 1;
    }
    int r = 1;
    if (alpha % 2 != 0 && beta % 2 != 0 && ((p - 1) / 2) % 2 != 0) r = -r;
    if (beta % 2 != 0) r *= legendre(u, p);
    if (alpha % 2 != 0) r *= legendre(w, p);
    return r;
}

// Hilbert symbol (a,b) = 1 at every place of Q?
inline bool hilbert_everywhere_trivial(const mpq_class& a, const mpq_class& b,
                                       unsigned long bound = kFactorBound) {
    mpz_class ia = a.get_num() * a.get_den();  // square-class representative
    mpz_class ib = b.get_num() * b.get_den();
    if (hilbert_symbol_at(ia, ib, 0) != 1) return false;
    std::map<mpz_class, int> places = factorize(abs(ia), bound);
    for (const auto& [pfac, e] : factorize(abs(ib), bound)) places[pfac] += e;
    places[2] += 0;
    for (const auto& [pfac, e] : places) {
        (void)e;
        if (hilbert_symbol_at(ia, ib, pfac) != 1) return false;
    }
    return true;
}

} // namespace detail

// True iff x = a^2 + b^2 Delta has a solution (a,b) in k^2.
inline bool hilbert_membership(const Elem& x, const Elem& delta) {
    if (x.is_zero()) throw ZeroElement("hilbert_membership: x must be nonzero");
    detail::require_same_field(x, delta);
    const FieldPtr& f = x.field();
    if (delta.is_zero()) return sqrt_in_field(x).has_value();
    if (sqrt_in_field(-delta).has_value()) return true;  // k*_Delta = k*
    if (f->is_finite()) return true;  // nondegenerate binary forms are universal
    if (f->kind() == FieldKind::Rationals) {
        // x is a norm from Q(sqrt(-Delta)) iff (x, -Delta)_v = 1 at all places
        return detail::hilbert_everywhere_trivial(x.rat(), (-delta).rat());
    }
    throw Unsupported("hilbert_membership over quadratic extensions of Q");
}

// Explicit witness (a,b) with x = a^2 + b^2 Delta.  Finite fields: direct
// search.  Q: bounded-height search (membership should be established first);
// returns nullopt when the height bound is exhausted.
inline std::optional<std::pair<Elem, Elem>> norm_form_witness(const Elem& x, const Elem& delta,
                                                              long height_bound = 120) {
    detail::require_same_field(x, delta);
    const FieldPtr& f = x.field();
    if (delta.is_zero()) {
        if (auto a = sqrt_in_field(x)) return std::make_pair(*a, f->zero());
        return std::nullopt;
    }
    if (f->is_finite()) {
        mpz_class card = f->cardinality();
        for (mpz_class i = 0; i < card; ++i) {
            Elem a = f->element_at(i);
            Elem rest = (x - a * a) / delta;
            if (auto b = sqrt_in_field(rest)) return std::make_pair(a, *b);
        }
        return std::nullopt;
    }
    if (f->kind() == FieldKind::Rationals) {
        for (long den = 1; den <= height_bound; ++den) {
            for (long num = 0; num <= height_bound; ++num) {
                mpq_class bq(num, den);
                bq.canonicalize();
                Elem b = f->from_rat(bq);
                Elem rest = x - b * b * delta;
                if (auto a = sqrt_in_field(rest)) return std::make_pair(*a, b);
            }
        }
        return std::nullopt;
    }
    throw Unsupported("norm_form_witness over quadratic extensions of Q");
}

// ---------------------------------------------------------------------------
// Descriptor and element text formats
// ---------------------------------------------------------------------------

inline std::string Field::descriptor() const {
    switch (kind_) {
        case FieldKind::Rationals: return "rat";
        case FieldKind::Prime: return "fp:" + p_.get_str();
        case FieldKind::QuadExt: {
            if (base_->kind() == FieldKind::Rationals)
                return "quad:rat:" + d_[0].rat().get_str();
            return "quad:fp:" + base_->p().get_str() + ":" + d_[0].residue().get_str();
        }
    }
    return "?";
}

inline std::string Elem::str() const {
    switch (kind()) {
        case FieldKind::Rationals: return rat_.get_str();
        case FieldKind::Prime: return res_.get_str();
        case FieldKind::QuadExt: {
            std::string u = uv_[0].str(), v = uv_[1].str();
            if (uv_[1].is_zero()) return u;
            std::string tail = v + "*w";
            if (uv_[0].is_zero()) return tail;
            return u + "+" + tail;
        }
    }
    return "?";
}

inline FieldPtr Field::parse_descriptor(const std::string& s) {
    auto split = [](const std::string& str, char sep) {
        std::vector<std::string> parts;
        std::string cur;
        for (char ch : str) {
            if (ch == sep) { parts.push_back(cur); cur.clear(); }
            else cur.push_back(ch);
        }
        parts.push_back(cur);
        return parts;
    };
    std::vector<std::string> parts = split(s, ':');
    try {
        if (parts[0] == "rat" && parts.size() == 1) return rationals();
        if (parts[0] == "fp" && parts.size() == 2) return prime(mpz_class(parts[1]));
        if (parts[0] == "quad" && parts.size() >= 3) {
            if (parts[1] == "rat" && parts.size() == 3) {
                FieldPtr base = rationals();
                return quad_ext(base, base->from_rat(mpq_class(parts[2])));
            }
            if (parts[1] == "fp" && parts.size() == 4) {
                FieldPtr base = prime(mpz_class(parts[2]));
                return quad_ext(base, base->from_residue(mpz_class(parts[3])));
            }
        }
    } catch (const std::invalid_argument&) {
        throw ParseError("bad field descriptor: " + s);
    }
    throw ParseError("bad field descriptor: " + s);
}

inline Elem Field::parse_element(const std::string& s) const {
    auto parse_base_scalar = [](const FieldPtr& f, const std::string& text) -> Elem {
        try {
            mpq_class q(text);
            q.canonicalize();
            return f->from_rat(q);
        } catch (const std::invalid_argument&) {
            throw ParseError("bad element literal: " + text);
        }
    };
    FieldPtr self = shared_from_this();
    if (kind_ != FieldKind::QuadExt) return parse_base_scalar(self, s);
    // forms: "u", "v*w", "u+v*w", "u-v*w"
    std::string text = s;
    size_t wpos = text.find("*w");
    if (wpos == std::string::npos) {
        if (!text.empty() && text.back() == 'w') {
            // allow "w" / "-w"
            std::string head = text.substr(0, text.size() - 1);
            if (head.empty() || head == "+") head = "1";
            else if (head == "-") head = "-1";
            else if (head.back() == '*') head.pop_back();
            return make(base_->from_long(0), parse_base_scalar(base_, head));
        }
        return make(parse_base_scalar(base_, text), base_->from_long(0));
    }
    // split at the sign that separates u from v, scanning from wpos backwards
    std::string vpart = text.substr(0, wpos);
    // find split point: last '+'/'-' before vpart begins that is not leading
    size_t split = std::string::npos;
    for (size_t i = vpart.size(); i-- > 1;) {
        if ((vpart[i] == '+' || vpart[i] == '-') && vpart[i - 1] != '/' && vpart[i - 1] != '+' &&
            vpart[i - 1] != '-') {
            split = i;
            break;
        }
    }
    std::string upart;
    if (split != std::string::npos) {
        upart = vpart.substr(0, split);
        char sign = vpart[split];
        vpart = vpart.substr(split + 1);
        if (sign == '-') vpart = "-" + vpart;
    } else {
        upart = "0";
    }
    return make(parse_base_scalar(base_, upart), parse_base_scalar(base_, vpart));
}

inline FieldPtr Field::quad_ext(const FieldPtr& base, const Elem& d) {
    if (base->kind() == FieldKind::QuadExt)
        throw Unsupported("quadratic extensions may only be taken over Q or F_p");
    if (!d.field()->same(*base)) throw FieldMismatch("quad_ext: d must live in the base field");
    if (d.is_zero()) throw ZeroElement("quad_ext: d must be nonzero");
    if (sqrt_in_field(d).has_value())
        throw Error("quad_ext: d is a square in the base field");
    auto f = std::shared_ptr<Field>(new Field());
    f->kind_ = FieldKind::QuadExt;
    f->base_ = base;
    f->d_ = {d};
    return f;
}

// The canonical quadratic extension used throughout: F_p(sqrt(d)) with d the
// least non-residue, Q(sqrt(D)) with D the square-free part of the argument.
inline FieldPtr canonical_quad_ext_for(const FieldPtr& k, const Elem& nonsquare) {
    if (k->kind() == FieldKind::Prime) {
        for (mpz_class i = 2; i < k->p(); ++i) {
            Elem d = k->from_residue(i);
            if (!sqrt_in_field(d).has_value()) return Field::quad_ext(k, d);
        }
        throw InternalCheckFailure("no quadratic non-residue found");
    }
    if (k->kind() == FieldKind::Rationals) {
        const mpq_class& q = nonsquare.rat();
        mpz_class m = q.get_num() * q.get_den();
        int sign = mpz_sgn(m.get_mpz_t());
        // best-effort square-free reduction: strip square factors found by
        // trial division; a surviving cofactor beyond the bound is kept as is
        // (deterministic per value, so equal Q_n always yields equal fields)
        mpz_class rest = abs(m), rep = 1;
        for (unsigned long d = 2; d <= detail::kFactorBound && rest > 1; ++d) {
            if (mpz_cmp_ui(rest.get_mpz_t(), d) >= 0 && rest < mpz_class(d) * d) {
                rep *= rest;  // remaining cofactor is prime
                rest = 1;
                break;
            }
            if (mpz_divisible_ui_p(rest.get_mpz_t(), d) == 0) continue;
            unsigned e = 0;
            while (mpz_divisible_ui_p(rest.get_mpz_t(), d)) {
                rest /= d;
                ++e;
            }
            if (e % 2 != 0) rep *= d;
        }
        if (rest > 1) {
            if (auto r = detail::exact_sqrt(rest)) (void)r;  // perfect square: drop it
            else rep *= rest;
        }
        if (sign < 0) rep = -rep;
        return Field::quad_ext(k, k->from_rat(mpq_class(rep)));
    }
    throw Unsupported("canonical_quad_ext_for: base must be Q or F_p");
}

// Deterministic sign choice for square roots: Q positive, F_p least residue,
// quadratic extensions by lexicographic order on (u,v).
inline Elem canonical_sign(const Elem& x) {
    switch (x.kind()) {
        case FieldKind::Rationals:
            return x.rat() < 0 ? -x : x;
        case FieldKind::Prime: {
            Elem neg = -x;
            return neg.residue() < x.residue() ? neg : x;
        }
        case FieldKind::QuadExt: {
            auto key = [](const Elem& e) {
                auto part_key = [](const Elem& c) {
                    if (c.kind() == FieldKind::Prime) return c.residue();
                    // rationals: order by numerator sign then magnitude
                    return mpz_class(c.rat().get_num());
                };
                return std::make_pair(part_key(e.re()), part_key(e.im()));
            };
            Elem neg = -x;
            return key(neg) < key(x) ? neg : x;
        }
    }
    return x;
}

} // namespace cubix

#endif
