#ifndef METROPLAN_COMMON_HPP
#define METROPLAN_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace metroplan {

/// Input or configuration rejected before any planning state was touched.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Planning cannot proceed: all fiber-pair tiers exhausted for some demand.
struct BlockingError : std::runtime_error {
  BlockingError(const std::string& what, int node, int year)
      : std::runtime_error(what), node(node), year(year) {}
  int node = -1;
  int year = -1;
};

/// File-system level failure (missing archive, unwritable directory, ...).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr double kAbsent = std::numeric_limits<double>::infinity();

inline bool is_absent(double v) { return !(v < kAbsent); }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

/// Quantize a value recorded into a plan ledger or report. Archives must be
/// byte-stable across platforms, and 1e-9 absorbs last-ulp libm differences
/// without losing anything a planning decision can see.
inline double ledger_round(double v) {
  if (!std::isfinite(v)) return v;
  return std::round(v * 1e9) / 1e9;
}

/// Uniform double in [0, 1) built from explicit mt19937_64 bits so that the
/// stream is identical on every platform (std::uniform_real_distribution is
/// implementation-defined).
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// FNV-1a, used for content-addressed cache keys.
inline std::uint64_t fnv1a(const void* data, std::size_t n,
                           std::uint64_t seed = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t fnv1a(const std::string& s, std::uint64_t seed = 0xcbf29ce484222325ULL) {
  return fnv1a(s.data(), s.size(), seed);
}

inline std::uint64_t fnv1a(double v, std::uint64_t seed) {
  return fnv1a(&v, sizeof(v), seed);
}

inline std::uint64_t fnv1a(std::int64_t v, std::uint64_t seed) {
  return fnv1a(&v, sizeof(v), seed);
}

}  // namespace metroplan

#endif  // METROPLAN_COMMON_HPP
