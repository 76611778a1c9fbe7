#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace decflow {

using VertexId = int;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Comparison tolerance for distances/weights throughout the library.
inline constexpr double kEps = 1e-9;

inline bool approx_le(double a, double b, double scale = 1.0) {
  return a <= b + kEps * std::max(1.0, std::abs(scale));
}

inline bool approx_eq(double a, double b, double scale = 1.0) {
  return std::abs(a - b) <= kEps * std::max(1.0, std::abs(scale));
}

// x rounded up to the nearest multiple of g (g > 0).
inline double round_up_multiple(double x, double g) {
  if (x <= 0) return 0.0;
  return std::ceil(x / g - 1e-12) * g;
}

// x rounded up to the nearest power of b (b > 1, x > 0).
inline double round_up_power(double x, double b) {
  if (x <= 0) throw std::invalid_argument("round_up_power: x must be positive");
  double e = std::ceil(std::log(x) / std::log(b) - 1e-12);
  return std::pow(b, e);
}

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define DECFLOW_CHECK(cond, msg)                                      \
  do {                                                                \
    if (!(cond)) {                                                    \
      std::ostringstream oss_;                                        \
      oss_ << msg;                                                    \
      throw ::decflow::Error(oss_.str());                             \
    }                                                                 \
  } while (0)

// Seeded PRNG wrapper. All randomness in the library flows through this so
// that a fixed seed reproduces runs bit-exactly on one platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in (0, 1]; avoids returning 0 so that log() is always finite.
  double uniform01() {
    std::uint64_t x = eng_() >> 11;  // 53 bits
    return (static_cast<double>(x) + 1.0) * (1.0 / 9007199254740992.0);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  // Standard normal via Box-Muller.
  double gaussian() {
    double u1 = uniform01(), u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  // Exponential with rate lambda via inverse CDF.
  double exponential(double lambda) { return -std::log(uniform01()) / lambda; }

 private:
  std::mt19937_64 eng_;
};

// Fixed 9-decimal formatting used by every report so diffs are stable.
inline std::string fmt_num(double x) {
  if (x == kInf) return "inf";
  if (x == -kInf) return "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9f", x);
  return buf;
}

}  // namespace decflow
