#ifndef SUMMER_RNG_HPP
#define SUMMER_RNG_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <unordered_set>
#include <vector>

namespace summer {

// splitmix64; used to derive independent sub-stream seeds from (seed, tags).
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
    std::uint64_t s = mix_seed(seed ^ 0x6d75736963ULL);
    s = mix_seed(s ^ a);
    s = mix_seed(s ^ b);
    return mix_seed(s ^ c);
}

// Deterministic pseudo-random source. All draws are implemented on top of the
// raw mt19937_64 stream so results are bit-identical across standard library
// implementations (std::*_distribution is not portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return double(bits() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer on [0, n), rejection sampled (n > 0).
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = bits();
        } while (x >= limit);
        return x % n;
    }

    /// Standard normal pair via Box-Muller.
    void gaussian_pair(double& g0, double& g1) {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        g0 = r * std::cos(t);
        g1 = r * std::sin(t);
    }

    double gaussian() {
        double g0, g1;
        gaussian_pair(g0, g1);
        return g0;
    }

    /// Circularly-symmetric complex normal with E|z|^2 = 1.
    std::complex<double> complex_gaussian() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-std::log(u1));
        return std::polar(r, 2.0 * std::numbers::pi * u2);
    }

    /// Unit-modulus value with phase uniform on [0, 2pi).
    std::complex<double> unit_phase() {
        return std::polar(1.0, 2.0 * std::numbers::pi * uniform());
    }

    /// k distinct indices from [0, n), uniform over subsets and over orderings.
    /// Floyd's algorithm followed by a Fisher-Yates shuffle; O(k) memory.
    std::vector<std::uint64_t> sample_without_replacement(std::uint64_t n, std::uint64_t k) {
        std::unordered_set<std::uint64_t> chosen;
        std::vector<std::uint64_t> out;
        out.reserve(k);
        for (std::uint64_t i = n - k; i < n; ++i) {
            const std::uint64_t j = uniform_index(i + 1);
            if (chosen.insert(j).second) {
                out.push_back(j);
            } else {
                chosen.insert(i);
                out.push_back(i);
            }
        }
        for (std::uint64_t i = k; i > 1; --i) {
            std::swap(out[i - 1], out[uniform_index(i)]);
        }
        return out;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace summer

#endif
