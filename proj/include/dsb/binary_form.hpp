#ifndef DSB_BINARY_FORM_HPP
#define DSB_BINARY_FORM_HPP

#include <algorithm>
#include <cctype>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsb/fields.hpp"
#include "dsb/univariate.hpp"

namespace dsb {

// Homogeneous form in s, t over the field context F. Coefficients are stored
// densely: index k holds the coefficient of s^(deg-k) t^k. The canonical zero
// has deg == -1 and no coefficients, independent of any ambient degree.
template <class F>
struct BinaryForm {
    F field{};
    int deg = -1;
    std::vector<typename F::Elt> c;

    bool is_zero() const { return deg < 0; }
};

template <class F>
BinaryForm<F> bf_zero(const F& K) {
    return BinaryForm<F>{K, -1, {}};
}

template <class F>
BinaryForm<F> bf_from_coeffs(const F& K, int deg, std::vector<typename F::Elt> coeffs) {
    if (deg < 0 || static_cast<int>(coeffs.size()) != deg + 1)
        throw std::invalid_argument("binary form needs deg+1 coefficients");
    bool all_zero = true;
    for (const auto& x : coeffs)
        if (!K.is_zero(x)) {
            all_zero = false;
            break;
        }
    if (all_zero) return bf_zero(K);
    return BinaryForm<F>{K, deg, std::move(coeffs)};
}

// s^(deg-k) t^k
template <class F>
BinaryForm<F> bf_monomial(const F& K, int deg, int k, typename F::Elt coef) {
    std::vector<typename F::Elt> cs(deg + 1, K.zero());
    cs[k] = coef;
    return bf_from_coeffs(K, deg, std::move(cs));
}

template <class F>
BinaryForm<F> bf_const(const F& K, typename F::Elt v) {
    return bf_from_coeffs(K, 0, {v});
}

template <class F>
void bf_check_fields(const BinaryForm<F>& a, const BinaryForm<F>& b) {
    if (!a.field.same(b.field)) throw field_mismatch("binary forms over different fields");
}

template <class F>
bool bf_equal(const BinaryForm<F>& a, const BinaryForm<F>& b) {
    bf_check_fields(a, b);
    if (a.deg != b.deg) return false;
    const F& K = a.field;
    for (std::size_t i = 0; i < a.c.size(); ++i)
        if (!K.is_zero(K.sub(a.c[i], b.c[i]))) return false;
    return true;
}

template <class F>
BinaryForm<F> bf_add(const BinaryForm<F>& a, const BinaryForm<F>& b) {
    bf_check_fields(a, b);
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.deg != b.deg) throw std::invalid_argument("sum of forms of different degrees is inhomogeneous");
    const F& K = a.field;
    std::vector<typename F::Elt> cs(a.c.size());
    for (std::size_t i = 0; i < cs.size(); ++i) cs[i] = K.add(a.c[i], b.c[i]);
    return bf_from_coeffs(K, a.deg, std::move(cs));
}

template <class F>
BinaryForm<F> bf_neg(const BinaryForm<F>& a) {
    if (a.is_zero()) return a;
    const F& K = a.field;
    auto cs = a.c;
    for (auto& x : cs) x = K.neg(x);
    return BinaryForm<F>{K, a.deg, std::move(cs)};
}

template <class F>
BinaryForm<F> bf_sub(const BinaryForm<F>& a, const BinaryForm<F>& b) {
    return bf_add(a, bf_neg(b));
}

template <class F>
BinaryForm<F> bf_scale(const BinaryForm<F>& a, const typename F::Elt& v) {
    if (a.is_zero()) return a;
    const F& K = a.field;
    if (K.is_zero(v)) return bf_zero(K);
    auto cs = a.c;
    for (auto& x : cs) x = K.mul(x, v);
    return BinaryForm<F>{K, a.deg, std::move(cs)};
}

template <class F>
BinaryForm<F> bf_mul(const BinaryForm<F>& a, const BinaryForm<F>& b) {
    bf_check_fields(a, b);
    const F& K = a.field;
    if (a.is_zero() || b.is_zero()) return bf_zero(K);
    std::vector<typename F::Elt> cs(a.deg + b.deg + 1, K.zero());
    for (int i = 0; i <= a.deg; ++i)
        for (int j = 0; j <= b.deg; ++j)
            cs[i + j] = K.add(cs[i + j], K.mul(a.c[i], b.c[j]));
    return bf_from_coeffs(K, a.deg + b.deg, std::move(cs));
}

template <class F>
typename F::Elt bf_eval(const BinaryForm<F>& f, const typename F::Elt& s0, const typename F::Elt& t0) {
    const F& K = f.field;
    if (f.is_zero()) return K.zero();
    std::vector<typename F::Elt> sp(f.deg + 1, K.one());
    for (int i = 1; i <= f.deg; ++i) sp[i] = K.mul(sp[i - 1], s0);
    auto acc = K.zero();
    auto tpow = K.one();
    for (int k = 0; k <= f.deg; ++k) {
        acc = K.add(acc, K.mul(f.c[k], K.mul(sp[f.deg - k], tpow)));
        tpow = K.mul(tpow, t0);
    }
    return acc;
}

// t-adic valuation: largest m with t^m dividing f.
template <class F>
int bf_t_valuation(const BinaryForm<F>& f) {
    if (f.is_zero()) throw std::invalid_argument("valuation of the zero form");
    const F& K = f.field;
    int m = 0;
    while (m <= f.deg && K.is_zero(f.c[m])) ++m;
    return m;
}

// f(x, 1) as a univariate polynomial in x = s/t (ascending powers of x).
template <class F>
Poly1<F> bf_dehomogenize(const BinaryForm<F>& f) {
    const F& K = f.field;
    Poly1<F> r;
    if (f.is_zero()) return r;
    r.c.assign(f.deg + 1, K.zero());
    for (int k = 0; k <= f.deg; ++k) r.c[f.deg - k] = f.c[k];
    p1_normalize(K, r);
    return r;
}

// Homogenize g(x) back to degree d (multiplying in the t-power that
// dehomogenization dropped).
template <class F>
BinaryForm<F> bf_homogenize(const F& K, const Poly1<F>& g, int d) {
    if (g.is_zero()) return bf_zero(K);
    if (g.deg() > d) throw std::invalid_argument("homogenization target degree too small");
    std::vector<typename F::Elt> cs(d + 1, K.zero());
    for (int i = 0; i <= g.deg(); ++i) cs[d - i] = g.c[i];
    return bf_from_coeffs(K, d, std::move(cs));
}

// Exact division; nullopt-style via thrown domain_error would be clumsy here,
// so a flag result is returned.
template <class F>
bool bf_divides(const BinaryForm<F>& d, const BinaryForm<F>& a, BinaryForm<F>* quot = nullptr) {
    bf_check_fields(d, a);
    const F& K = a.field;
    if (d.is_zero()) return false;
    if (a.is_zero()) {
        if (quot) *quot = bf_zero(K);
        return true;
    }
    if (a.deg < d.deg) return false;
    int vd = bf_t_valuation(d), va = bf_t_valuation(a);
    if (vd > va) return false;
    auto [q, r] = p1_divmod(K, bf_dehomogenize(a), bf_dehomogenize(d));
    if (!r.is_zero()) return false;
    if (quot) *quot = bf_homogenize(K, q, a.deg - d.deg);
    return true;
}

// Monic gcd of a family of forms. The common projective zeros of the family
// are exactly the zeros of this gcd (over the algebraic closure), which is
// what the generatedness test consumes.
template <class F>
BinaryForm<F> bf_gcd(const F& K, std::span<const BinaryForm<F>> forms) {
    int min_tval = -1;
    Poly1<F> g = p1_zero(K);
    bool any = false;
    for (const auto& f : forms) {
        if (f.is_zero()) continue;
        if (!f.field.same(K)) throw field_mismatch("gcd of forms over different fields");
        any = true;
        int v = bf_t_valuation(f);
        min_tval = (min_tval < 0) ? v : std::min(min_tval, v);
        g = p1_gcd(K, g, bf_dehomogenize(f));
        if (g.deg() == 0 && min_tval == 0) break;  // already constant
    }
    if (!any) throw std::invalid_argument("gcd of an all-zero family");
    return bf_homogenize(K, g, g.deg() + min_tval);
}

template <class F>
BinaryForm<F> bf_gcd(const F& K, const std::vector<BinaryForm<F>>& forms) {
    return bf_gcd(K, std::span<const BinaryForm<F>>(forms.data(), forms.size()));
}

template <class F>
std::string bf_str(const BinaryForm<F>& f) {
    if (f.is_zero()) return "0";
    const F& K = f.field;
    std::string out;
    for (int k = 0; k <= f.deg; ++k) {
        if (K.is_zero(f.c[k])) continue;
        std::string coef = K.str(f.c[k]);
        std::string mono;
        int es = f.deg - k, et = k;
        if (es > 0) mono += (es == 1) ? "s" : "s^" + std::to_string(es);
        if (et > 0) {
            if (!mono.empty()) mono += "*";
            mono += (et == 1) ? "t" : "t^" + std::to_string(et);
        }
        std::string term;
        if (mono.empty())
            term = coef;
        else if (coef == "1")
            term = mono;
        else if (coef == "-1")
            term = "-" + mono;
        else
            term = coef + "*" + mono;
        if (!out.empty() && term[0] != '-') out += " + ";
        else if (!out.empty()) {
            out += " - ";
            term = term.substr(1);
        }
        out += term;
    }
    return out;
}

namespace detail {
template <class F>
typename F::Elt parse_scalar(const F& K, const std::string& tok);

inline GFpField::Elt parse_scalar_impl(const GFpField& K, const std::string& tok) {
    std::size_t pos = 0;
    long long v = std::stoll(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("bad coefficient '" + tok + "'");
    return K.from_int(v);
}

inline Rat parse_scalar_impl(const RatField&, const std::string& tok) {
    Rat r;
    if (tok.find('/') != std::string::npos) {
        r = Rat(tok);
    } else {
        r = Rat(Int(tok));
    }
    r.canonicalize();
    return r;
}
}  // namespace detail

// Parser for the scenario polynomial syntax: sums of terms like
//   3*s^2*t - t^3,  -s,  5,  1/2*s*t   (rational coefficients over QQ)
// Every term must have total degree == declared_degree; anything else is
// rejected as inhomogeneous. "0" is accepted at any declared degree.
template <class F>
BinaryForm<F> parse_binary_form(const F& K, const std::string& text, int declared_degree) {
    if (declared_degree < 0) throw std::invalid_argument("declared degree must be >= 0");
    std::vector<typename F::Elt> cs(declared_degree + 1, K.zero());

    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    if (i == text.size()) throw std::invalid_argument("empty polynomial");

    bool first = true;
    bool saw_term = false;
    while (true) {
        skip_ws();
        if (i == text.size()) break;
        int sign = 1;
        if (text[i] == '+' || text[i] == '-') {
            sign = (text[i] == '-') ? -1 : 1;
            ++i;
        } else if (!first) {
            throw std::invalid_argument("expected '+' or '-' at position " + std::to_string(i));
        }
        first = false;
        skip_ws();

        // term: [number] (*? var (^exp)?)*
        std::string num;
        while (i < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '/')) {
            num += text[i++];
        }
        int es = 0, et = 0;
        bool have_var = false;
        while (true) {
            skip_ws();
            bool after_star = false;
            if (i < text.size() && text[i] == '*') {
                if (num.empty() && !have_var)
                    throw std::invalid_argument("'*' without a preceding factor at position " +
                                                std::to_string(i));
                after_star = true;
                ++i;
                skip_ws();
            }
            if (after_star && (i >= text.size() || (text[i] != 's' && text[i] != 't')))
                throw std::invalid_argument("'*' must be followed by a variable at position " +
                                            std::to_string(i));
            if (i < text.size() && (text[i] == 's' || text[i] == 't')) {
                char var = text[i++];
                int e = 1;
                if (i < text.size() && text[i] == '^') {
                    ++i;
                    std::string ex;
                    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ex += text[i++];
                    if (ex.empty()) throw std::invalid_argument("missing exponent after '^'");
                    e = std::stoi(ex);
                }
                (var == 's' ? es : et) += e;
                have_var = true;
            } else {
                break;
            }
        }
        if (num.empty() && !have_var)
            throw std::invalid_argument("malformed term at position " + std::to_string(i));

        typename F::Elt coef = num.empty() ? K.one() : detail::parse_scalar_impl(K, num);
        if (sign < 0) coef = K.neg(coef);

        if (!have_var && num == "0") {
            saw_term = true;
            continue;  // explicit zero term, any degree
        }
        if (es + et != declared_degree)
            throw std::invalid_argument("term of degree " + std::to_string(es + et) +
                                        " is inhomogeneous against declared degree " +
                                        std::to_string(declared_degree));
        cs[et] = K.add(cs[et], coef);
        saw_term = true;
    }
    if (!saw_term) throw std::invalid_argument("empty polynomial");
    return bf_from_coeffs(K, declared_degree, std::move(cs));
}

}  // namespace dsb

#endif
