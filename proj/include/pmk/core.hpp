#pragma once

// Shared primitives: ids, distances, error type, deterministic RNG helpers.

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace pmk {

using VertexId = int;
using EdgeId = int;
using Dist = long long;

// Large enough to survive additions without overflow.
inline constexpr Dist INF_DIST = std::numeric_limits<Dist>::max() / 4;

// All recoverable failures carry a stable code string (matched by tests and
// mapped to exit codes by the CLI) plus a human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& msg) {
    throw Error(code, msg);
}

inline void require(bool cond, const std::string& code, const std::string& msg) {
    if (!cond) fail(code, msg);
}

// mt19937_64 is bit-exact across platforms; the std distributions are not,
// so all sampling goes through the helpers below.
using Rng = std::mt19937_64;

inline std::uint64_t next_u64(Rng& rng) { return rng(); }

// Uniform integer in [0, bound) without modulo bias.
inline std::uint64_t uniform_u64(Rng& rng, std::uint64_t bound) {
    if (bound == 0) return 0;
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        std::uint64_t r = rng();
        if (r >= threshold) return r % bound;
    }
}

// Uniform double in (0, 1]; never returns 0 so log() is safe.
inline double uniform_unit(Rng& rng) {
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

inline double sample_exponential(Rng& rng, double rate) {
    return -std::log(uniform_unit(rng)) / rate;
}

// Box-Muller; deterministic given the rng state.
inline double sample_gaussian(Rng& rng) {
    double u1 = uniform_unit(rng);
    double u2 = uniform_unit(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

inline int ceil_log2(std::uint64_t x) {
    int b = 0;
    while ((std::uint64_t(1) << b) < x) ++b;
    return b;
}

} // namespace pmk
