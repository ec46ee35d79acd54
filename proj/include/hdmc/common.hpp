#ifndef HDMC_COMMON_HPP
#define HDMC_COMMON_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hdmc {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct OracleBudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PolicyTypeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelCapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_number(line) {}
    int line_number;
};

struct EmptyDatasetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Deterministic RNG
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derive a child seed from a parent seed and a stream id.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(seed, a), b);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1), 53 bits of entropy.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n), unbiased.
    int uniform_int(int n) {
        std::uint64_t bound = std::uint64_t(n);
        std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return static_cast<int>(x % bound);
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Sample an index from unnormalized nonnegative weights.
    int categorical(std::span<const double> w) {
        double total = 0;
        for (double x : w) total += x;
        double u = uniform() * total;
        double acc = 0;
        for (std::size_t i = 0; i + 1 < w.size(); ++i) {
            acc += w[i];
            if (u < acc) return static_cast<int>(i);
        }
        return static_cast<int>(w.size()) - 1;
    }

    // Underlying engine, for use with <random> distributions.
    std::mt19937_64& engine() { return gen_; }

  private:
    std::mt19937_64 gen_;
};

// ---------------------------------------------------------------------------
// Small statistics helpers
// ---------------------------------------------------------------------------

inline double mean(std::span<const double> xs) {
    double s = 0;
    for (double x : xs) s += x;
    return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

inline double sample_std(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    double m = mean(xs);
    double ss = 0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

// Half-width of the 95% normal confidence interval for the mean.
inline double ci95_halfwidth(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    return 1.96 * sample_std(xs) / std::sqrt(static_cast<double>(xs.size()));
}

// Chi-square critical values at significance 0.001.
inline double chi2_crit_001(int df) {
    switch (df) {
        case 1: return 10.828;
        case 2: return 13.816;
        case 3: return 16.266;
        case 4: return 18.467;
        default: throw std::invalid_argument("chi2_crit_001: unsupported df");
    }
}

// Stable numeric formatting for CSV/SVG output (re-runs must be byte-identical).
inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

}  // namespace hdmc

#endif  // HDMC_COMMON_HPP
