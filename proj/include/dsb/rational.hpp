#ifndef DSB_RATIONAL_HPP
#define DSB_RATIONAL_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace dsb {

// Exact arithmetic scalars. Everything in this project is exact; there is no
// floating-point numeric type anywhere.
using Int = mpz_class;
using Rat = mpq_class;

inline Int int_of(long long n) {
    // mpz_class has no long long constructor; long is 64-bit on every target
    // this project builds for.
    static_assert(sizeof(long) == sizeof(long long));
    return Int(static_cast<long>(n));
}

inline Rat make_rat(long long num, long long den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rat r{Int(static_cast<long>(num)), Int(static_cast<long>(den))};
    r.canonicalize();
    return r;
}

inline Rat rat_of(long long n) { return Rat(int_of(n)); }

// Canonical "p/q" rendering; integers render without the "/1" tail.
inline std::string rat_str(const Rat& r) { return r.get_str(); }

inline long long to_ll(const Int& z) {
    if (!z.fits_slong_p()) throw std::overflow_error("integer too large for long long");
    return z.get_si();
}

inline std::uint64_t to_u64(const Int& z) {
    if (sgn(z) < 0 || !z.fits_ulong_p()) throw std::overflow_error("integer out of uint64 range");
    return z.get_ui();
}

}  // namespace dsb

#endif
