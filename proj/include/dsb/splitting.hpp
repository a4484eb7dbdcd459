#ifndef DSB_SPLITTING_HPP
#define DSB_SPLITTING_HPP

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "dsb/rational.hpp"

namespace dsb {

// h^0 and h^1 of the line bundle O(a) on the projective line.
inline std::pair<long long, long long> cohomology_line(long long a) {
    return {std::max(0ll, a + 1), std::max(0ll, -a - 1)};
}

inline long long h0_line(long long a) { return std::max(0ll, a + 1); }

// Splitting type of a direct sum of line bundles on P^1, kept as a multiset
// of twists in descending order. The empty type (rank 0) is allowed so that
// kernels of injective maps have a value.
struct SplittingType {
    std::vector<long long> degs;  // descending

    SplittingType() = default;
    explicit SplittingType(std::vector<long long> d) : degs(std::move(d)) {
        std::sort(degs.begin(), degs.end(), std::greater<>());
    }

    static SplittingType trivial(std::size_t rank) {
        return SplittingType(std::vector<long long>(rank, 0));
    }

    std::size_t rank() const { return degs.size(); }
    bool empty() const { return degs.empty(); }

    long long degree() const { return std::accumulate(degs.begin(), degs.end(), 0ll); }

    Rat slope() const {
        if (degs.empty()) throw std::domain_error("slope of the zero bundle");
        return make_rat(degree(), static_cast<long long>(rank()));
    }

    SplittingType twist(long long m) const {
        auto d = degs;
        for (auto& x : d) x += m;
        return SplittingType(std::move(d));
    }

    SplittingType dual() const {
        auto d = degs;
        for (auto& x : d) x = -x;
        return SplittingType(std::move(d));
    }

    long long h0(long long twist_by = 0) const {
        long long total = 0;
        for (auto a : degs) total += h0_line(a + twist_by);
        return total;
    }

    bool operator==(const SplittingType&) const = default;

    std::string str() const {
        if (degs.empty()) return "0";
        std::string out;
        for (std::size_t i = 0; i < degs.size(); ++i) {
            if (i) out += " + ";
            out += "O(" + std::to_string(degs[i]) + ")";
        }
        return out;
    }
};

}  // namespace dsb

#endif
