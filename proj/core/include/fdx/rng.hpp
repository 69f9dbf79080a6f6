// SPDX-License-Identifier: Apache-2.0
//
// Deterministic random streams. Every stochastic quantity in the simulator is
// drawn from an Rng that was derived from (master seed, experiment id, trial
// index, purpose). Derivation uses splitmix64 so streams are decorrelated and
// the same trial produces the same numbers no matter which worker runs it or
// in which order trials execute.
//
// Gaussian variates are produced by an explicit Box-Muller transform instead
// of std::normal_distribution, whose algorithm is implementation-defined and
// would break cross-platform reproducibility.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace fdx {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Stable stream labels. Values are part of the reproducibility contract:
// renumbering them changes every emitted figure.
enum class StreamPurpose : std::uint64_t {
    kChannel = 1,
    kTxData = 2,
    kSoi = 3,
    kNoise = 4,
    kMeasTxData = 5,
    kMeasSoi = 6,
    kMeasNoise = 7,
    kGeneric = 8,
};

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(whiten(seed)) {}

    // 53-bit uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Standard real normal via Box-Muller, one spare cached.
    double gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Circular complex normal, E|z|^2 = 1. Uses the polar form directly so
    // one (u1, u2) pair yields one sample.
    std::complex<double> cgauss() {
        double u1 = 1.0 - uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Modulo is biased for general n; all call sites use tiny n (e.g. 4)
        // where the bias is ~2^-62 and irrelevant next to Monte-Carlo noise.
        return engine_() % n;
    }

    std::uint64_t raw() { return engine_(); }

  private:
    static std::uint64_t whiten(std::uint64_t seed) {
        std::uint64_t s = seed;
        return splitmix64(s);
    }

    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Derives the seed for one purpose-scoped stream of one trial.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t experiment_id,
                                 std::uint64_t trial_index, StreamPurpose purpose) {
    std::uint64_t s = master;
    std::uint64_t h = splitmix64(s);
    s = h ^ (experiment_id * 0xD1B54A32D192ED03ULL);
    h = splitmix64(s);
    s = h ^ (trial_index * 0x8CB92BA72F3D8DD7ULL);
    h = splitmix64(s);
    s = h ^ (static_cast<std::uint64_t>(purpose) * 0xA24BAED4963EE407ULL);
    return splitmix64(s);
}

inline Rng make_stream(std::uint64_t master, std::uint64_t experiment_id,
                       std::uint64_t trial_index, StreamPurpose purpose) {
    return Rng(derive_seed(master, experiment_id, trial_index, purpose));
}

}  // namespace fdx
