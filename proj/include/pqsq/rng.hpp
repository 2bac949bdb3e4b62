#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace pqsq {

// Seeded generator with explicit inverse-CDF / Box-Muller transforms so
// sequences are identical across standard libraries. mt19937_64 supplies
// the raw bits.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // [0, 1)
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller; the second deviate is cached.
    double normal(double mean = 0.0, double sd = 1.0) {
        if (have_spare_) {
            have_spare_ = false;
            return mean + sd * spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return mean + sd * radius * std::cos(angle);
    }

    // Inverse CDF: x = mean - b sign(u - 1/2) ln(1 - 2|u - 1/2|).
    double laplace(double mean, double scale) {
        const double t = uniform() - 0.5;
        const double s = (t > 0.0) - (t < 0.0);
        return mean - scale * s * std::log(1.0 - 2.0 * std::fabs(t));
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

    // Stable replicate-seed derivation (splitmix64 over master ^ stream).
    static std::uint64_t derive(std::uint64_t master, std::uint64_t stream) {
        std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace pqsq
