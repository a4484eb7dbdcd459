#ifndef DSB_FIELDS_HPP
#define DSB_FIELDS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include "dsb/prng.hpp"
#include "dsb/rational.hpp"

namespace dsb {

struct field_mismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised when a certified cross-check disagrees with the primary computation.
// This always indicates a bug in the tool, never bad user input.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

inline bool is_prime_u32(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Runtime description of the coefficient field of a scenario.
struct FieldSpec {
    enum class Kind { rationals, prime_field };

    Kind kind = Kind::rationals;
    std::uint32_t p = 0;

    static FieldSpec rationals() { return FieldSpec{Kind::rationals, 0}; }

    static FieldSpec prime(std::uint32_t p) {
        if (p >= (1u << 16)) throw std::invalid_argument("prime field modulus must be < 2^16");
        if (!is_prime_u32(p)) throw std::invalid_argument("prime field modulus must be prime");
        return FieldSpec{Kind::prime_field, p};
    }

    bool operator==(const FieldSpec&) const = default;

    std::string str() const {
        return kind == Kind::rationals ? "QQ" : "GF(" + std::to_string(p) + ")";
    }
};

// Prime field GF(p), p < 2^16. Elements are plain machine words and the field
// object is the arithmetic context, so matrices over GF(p) stay flat and fast.
struct GFpField {
    using Elt = std::uint64_t;

    std::uint64_t p = 2;

    GFpField() = default;
    explicit GFpField(std::uint64_t modulus) : p(modulus) {
        if (!is_prime_u32(static_cast<std::uint32_t>(modulus)) || modulus >= (1ull << 16))
            throw std::invalid_argument("GFpField: modulus must be a prime < 2^16");
    }

    FieldSpec spec() const { return FieldSpec::prime(static_cast<std::uint32_t>(p)); }
    bool same(const GFpField& o) const { return p == o.p; }

    Elt zero() const { return 0; }
    Elt one() const { return 1 % p; }
    bool is_zero(Elt a) const { return a == 0; }

    Elt from_int(long long v) const {
        long long m = v % static_cast<long long>(p);
        if (m < 0) m += static_cast<long long>(p);
        return static_cast<Elt>(m);
    }

    Elt add(Elt a, Elt b) const {
        Elt s = a + b;
        return s >= p ? s - p : s;
    }
    Elt sub(Elt a, Elt b) const { return a >= b ? a - b : a + p - b; }
    Elt neg(Elt a) const { return a == 0 ? 0 : p - a; }
    Elt mul(Elt a, Elt b) const { return (a * b) % p; }

    Elt inv(Elt a) const {
        if (a == 0) throw std::domain_error("GFpField: inverse of zero");
        // extended Euclid on (a, p)
        long long t = 0, nt = 1;
        long long r = static_cast<long long>(p), nr = static_cast<long long>(a);
        while (nr != 0) {
            long long q = r / nr;
            long long tmp = t - q * nt;
            t = nt;
            nt = tmp;
            tmp = r - q * nr;
            r = nr;
            nr = tmp;
        }
        if (t < 0) t += static_cast<long long>(p);
        return static_cast<Elt>(t);
    }
    Elt div(Elt a, Elt b) const { return mul(a, inv(b)); }

    Elt random(SplitMix64& g) const { return g.below(p); }

    std::string str(Elt a) const { return std::to_string(a); }
};

// The rational field; elements are exact GMP rationals.
struct RatField {
    using Elt = Rat;

    FieldSpec spec() const { return FieldSpec::rationals(); }
    bool same(const RatField&) const { return true; }

    Elt zero() const { return Rat(0); }
    Elt one() const { return Rat(1); }
    bool is_zero(const Elt& a) const { return sgn(a) == 0; }

    Elt from_int(long long v) const { return rat_of(v); }

    Elt add(const Elt& a, const Elt& b) const { return a + b; }
    Elt sub(const Elt& a, const Elt& b) const { return a - b; }
    Elt neg(const Elt& a) const { return -a; }
    Elt mul(const Elt& a, const Elt& b) const { return a * b; }
    Elt inv(const Elt& a) const {
        if (sgn(a) == 0) throw std::domain_error("RatField: inverse of zero");
        return Rat(1) / a;
    }
    Elt div(const Elt& a, const Elt& b) const { return a / inv_guard(b); }

    // Random sections over QQ use small integer coefficients in [-9, 9];
    // genericity statements only need Zariski-dense sampling.
    Elt random(SplitMix64& g) const { return rat_of(static_cast<long long>(g.below(19)) - 9); }

    std::string str(const Elt& a) const { return rat_str(a); }

  private:
    const Elt& inv_guard(const Elt& b) const {
        if (sgn(b) == 0) throw std::domain_error("RatField: division by zero");
        return b;
    }
};

}  // namespace dsb

#endif
