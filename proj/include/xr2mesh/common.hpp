#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace xrm {

using Vec3 = Eigen::Vector3d;
using Vec3i = Eigen::Vector3i;

// Error categories surfaced by the CLI. All carry a plain message.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParseError : Error {
    using Error::Error;
};
struct FormatError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};
struct DegenerateGeometryError : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct PreconditionError : Error {
    using Error::Error;
};
struct InputError : Error {
    using Error::Error;
};
struct ShapeError : Error {
    using Error::Error;
};
struct TrainingError : Error {
    using Error::Error;
};

// Deterministic RNG. std::mt19937_64 output is pinned by the standard;
// the double mapping is explicit so streams are bit-identical across
// platforms (the std distributions are implementation-defined).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n), n > 0, rejection-sampled to avoid modulo bias
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

    // standard normal via Box-Muller (polar form avoided to keep the
    // consumption pattern fixed: exactly two uniforms per pair)
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    Vec3 uniform_vec3(double lo, double hi) {
        const double x = uniform(lo, hi);
        const double y = uniform(lo, hi);
        const double z = uniform(lo, hi);
        return Vec3(x, y, z);
    }

  private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Stable 64-bit string hash (FNV-1a), used to derive per-item RNG streams
// from a base seed and a stable identifier.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace xrm
