#ifndef DSB_PRNG_HPP
#define DSB_PRNG_HPP

#include <cstdint>
#include <string_view>

namespace dsb {

// SplitMix64: small, fast, and fully specified, so seeded runs reproduce
// bit-for-bit on every platform (std::uniform_int_distribution would not).
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n) by rejection; exact, no modulo bias.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % n;
    }
};

// Seed-splitting scheme: every randomized stage of a run derives its own
// stream as derive_seed(master, "<purpose>", index). Serial and parallel
// executions therefore consume identical streams per stage.
inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose, std::uint64_t index = 0) {
    SplitMix64 g(master ^ fnv1a(purpose) ^ (0x9e3779b97f4a7c15ull * (index + 1)));
    return g.next();
}

}  // namespace dsb

#endif
