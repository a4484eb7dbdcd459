#ifndef DSB_UNIVARIATE_HPP
#define DSB_UNIVARIATE_HPP

#include <stdexcept>
#include <vector>

#include "dsb/fields.hpp"

namespace dsb {

// Dense univariate polynomials over a runtime field context. These carry the
// dehomogenized side of binary-form computations: gcds and function-field
// ranks all happen here.
template <class F>
struct Poly1 {
    std::vector<typename F::Elt> c;  // ascending powers; empty = zero

    bool is_zero() const { return c.empty(); }
    int deg() const { return static_cast<int>(c.size()) - 1; }  // -1 for zero
};

template <class F>
void p1_normalize(const F& K, Poly1<F>& a) {
    while (!a.c.empty() && K.is_zero(a.c.back())) a.c.pop_back();
}

template <class F>
Poly1<F> p1_zero(const F&) {
    return {};
}

template <class F>
Poly1<F> p1_const(const F& K, typename F::Elt v) {
    Poly1<F> r;
    if (!K.is_zero(v)) r.c.push_back(v);
    return r;
}

template <class F>
bool p1_equal(const F& K, const Poly1<F>& a, const Poly1<F>& b) {
    if (a.c.size() != b.c.size()) return false;
    for (std::size_t i = 0; i < a.c.size(); ++i)
        if (!K.is_zero(K.sub(a.c[i], b.c[i]))) return false;
    return true;
}

template <class F>
Poly1<F> p1_add(const F& K, const Poly1<F>& a, const Poly1<F>& b) {
    Poly1<F> r;
    r.c.resize(std::max(a.c.size(), b.c.size()), K.zero());
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] = K.add(r.c[i], b.c[i]);
    p1_normalize(K, r);
    return r;
}

template <class F>
Poly1<F> p1_sub(const F& K, const Poly1<F>& a, const Poly1<F>& b) {
    Poly1<F> r;
    r.c.resize(std::max(a.c.size(), b.c.size()), K.zero());
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] = K.sub(r.c[i], b.c[i]);
    p1_normalize(K, r);
    return r;
}

template <class F>
Poly1<F> p1_mul(const F& K, const Poly1<F>& a, const Poly1<F>& b) {
    if (a.is_zero() || b.is_zero()) return {};
    Poly1<F> r;
    r.c.assign(a.c.size() + b.c.size() - 1, K.zero());
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = K.add(r.c[i + j], K.mul(a.c[i], b.c[j]));
    p1_normalize(K, r);
    return r;
}

template <class F>
Poly1<F> p1_scale(const F& K, const Poly1<F>& a, typename F::Elt v) {
    if (K.is_zero(v)) return {};
    Poly1<F> r = a;
    for (auto& x : r.c) x = K.mul(x, v);
    return r;
}

// Euclidean division: returns {quotient, remainder}.
template <class F>
std::pair<Poly1<F>, Poly1<F>> p1_divmod(const F& K, const Poly1<F>& a, const Poly1<F>& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    Poly1<F> rem = a, quo;
    if (a.deg() >= b.deg()) quo.c.assign(a.deg() - b.deg() + 1, K.zero());
    auto lead_inv = K.inv(b.c.back());
    while (!rem.is_zero() && rem.deg() >= b.deg()) {
        int shift = rem.deg() - b.deg();
        auto coef = K.mul(rem.c.back(), lead_inv);
        quo.c[shift] = coef;
        for (std::size_t i = 0; i < b.c.size(); ++i)
            rem.c[i + shift] = K.sub(rem.c[i + shift], K.mul(coef, b.c[i]));
        p1_normalize(K, rem);
    }
    p1_normalize(K, quo);
    return {quo, rem};
}

// Exact division; throws internal_error on a nonzero remainder. Used where an
// algebraic identity guarantees divisibility (Bareiss pivots, gcd checks).
template <class F>
Poly1<F> p1_divexact(const F& K, const Poly1<F>& a, const Poly1<F>& b) {
    auto [q, r] = p1_divmod(K, a, b);
    if (!r.is_zero()) throw internal_error("exact polynomial division left a remainder");
    return q;
}

template <class F>
Poly1<F> p1_monic(const F& K, const Poly1<F>& a) {
    if (a.is_zero()) return a;
    return p1_scale(K, a, K.inv(a.c.back()));
}

// Monic gcd. Over GF(p) this is plain Euclid. Over QQ the remainders are
// rescaled to primitive integer polynomials each round, which keeps the
// coefficients from exploding on long chains.
template <class F>
Poly1<F> p1_gcd(const F& K, Poly1<F> a, Poly1<F> b);

template <class F>
Poly1<F> p1_gcd_euclid(const F& K, Poly1<F> a, Poly1<F> b) {
    while (!b.is_zero()) {
        auto r = p1_divmod(K, a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return p1_monic(K, a);
}

template <>
inline Poly1<GFpField> p1_gcd(const GFpField& K, Poly1<GFpField> a, Poly1<GFpField> b) {
    return p1_gcd_euclid(K, std::move(a), std::move(b));
}

inline Poly1<RatField> p1_primitive_scale(const RatField& K, const Poly1<RatField>& a) {
    if (a.is_zero()) return a;
    Int lcm_den = 1, gcd_num = 0;
    for (const auto& q : a.c) lcm_den = lcm(lcm_den, q.get_den());
    Poly1<RatField> r = a;
    for (auto& q : r.c) q *= Rat(lcm_den);
    for (const auto& q : r.c) gcd_num = gcd(gcd_num, q.get_num());
    if (sgn(gcd_num) != 0)
        for (auto& q : r.c) q /= Rat(gcd_num);
    for (auto& q : r.c) q.canonicalize();
    (void)K;
    return r;
}

template <>
inline Poly1<RatField> p1_gcd(const RatField& K, Poly1<RatField> a, Poly1<RatField> b) {
    a = p1_primitive_scale(K, a);
    b = p1_primitive_scale(K, b);
    while (!b.is_zero()) {
        auto r = p1_divmod(K, a, b).second;
        a = std::move(b);
        b = p1_primitive_scale(K, r);
    }
    return p1_monic(K, a);
}

template <class F>
typename F::Elt p1_eval(const F& K, const Poly1<F>& a, const typename F::Elt& x) {
    auto acc = K.zero();
    for (auto it = a.c.rbegin(); it != a.c.rend(); ++it) acc = K.add(K.mul(acc, x), *it);
    return acc;
}

}  // namespace dsb

#endif
