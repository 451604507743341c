#pragma once

#include <cstdint>
#include <string_view>

#include "framekit/linalg.hpp"

namespace framekit {

/// xoshiro256** with explicit, platform-independent distributions.
///
/// The standard library's distributions are implementation-defined, so the
/// uniform and normal draws are derived here from the raw 64-bit output.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Stream keyed by (seed, name, index). Adding a new name never shifts
    /// the draws of an existing one.
    static Rng stream(std::uint64_t seed, std::string_view name, std::uint64_t index = 0);

    std::uint64_t next_u64();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
    double normal();
    /// Circular complex Gaussian with E|z|^2 = 1.
    cdouble complex_normal();

    CMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols);
    CVector gaussian_vector(Eigen::Index n);

private:
    std::uint64_t s_[4];
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t& state);

/// FNV-1a, used to key named streams.
std::uint64_t fnv1a64(std::string_view text);

} // namespace framekit
