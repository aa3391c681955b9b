#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace ssframe {

/// Malformed or out-of-domain input (bad letter, non-rational digit, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An enumeration or matrix size would exceed a configured cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caps, tolerances and default depths shared by every operation.
///
/// All fields have desk-scale defaults. The CLI echoes the effective values
/// in every report so that a run can be reproduced exactly.
struct Config {
  // Maximum number of words N^k enumerated by any word-level operation.
  std::uint64_t enumeration_cap = 1'000'000;
  // Maximum truncation depth of the Fourier infinite product.
  int max_product_depth = 400;
  // Float screen for mask zeros.
  double zero_tolerance = 1e-10;
  // Tolerance for floating identities (refinement, symmetry, Gram entries).
  double identity_tolerance = 1e-12;
  // Hard cap on the period search for integer tilings.
  std::uint64_t period_cap = std::uint64_t{1} << 20;
  // Backtracking node budget across a whole tiling search.
  std::uint64_t tiling_node_budget = 50'000'000;
  // Width of the uncertain band around cover boundaries.
  double boundary_tolerance = 1e-9;
  // Largest step subspace used for frame-bound estimation.
  std::size_t frame_dimension_cap = 4096;
  // Largest Gabor system |Lambda| * |J|.
  std::size_t gabor_size_cap = 4096;
  // Cover depth used when a verdict needs an overlap check.
  int overlap_depth = 6;
  // Gram orthonormality tolerance for the Gabor verdict.
  double gram_tolerance = 1e-9;
  // Lower band for the Jorgensen-Pedersen sum in the Gabor verdict.
  double jp_threshold = 0.98;
  // Tolerance for equality of window values.
  double window_value_tolerance = 1e-12;
  // Slack used by the density-ratio comparison in the frame gap check.
  double ratio_tolerance = 0.05;

  /// Defaults overridden by SSFRAME_ENUM_CAP / SSFRAME_PERIOD_CAP /
  /// SSFRAME_FRAME_DIM_CAP when those are set.
  static Config from_environment() {
    Config cfg;
    auto read = [](const char* name, auto& field) {
      if (const char* raw = std::getenv(name); raw != nullptr && *raw != '\0') {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(raw, &end, 10);
        if (end == nullptr || *end != '\0' || v == 0) {
          throw InputError(std::string("environment variable ") + name +
                           " must be a positive integer");
        }
        field = static_cast<std::remove_reference_t<decltype(field)>>(v);
      }
    };
    read("SSFRAME_ENUM_CAP", cfg.enumeration_cap);
    read("SSFRAME_PERIOD_CAP", cfg.period_cap);
    read("SSFRAME_FRAME_DIM_CAP", cfg.frame_dimension_cap);
    return cfg;
  }
};

namespace detail {

// N^k with saturation at cap + 1, so callers can compare against the cap
// without overflowing.
inline std::uint64_t bounded_power(std::uint64_t base, int exponent,
                                   std::uint64_t cap) {
  std::uint64_t result = 1;
  for (int i = 0; i < exponent; ++i) {
    if (base != 0 && result > cap / base) return cap + 1;
    result *= base;
  }
  return result;
}

inline void require_enumerable(std::uint64_t base, int depth,
                               const Config& cfg, const char* what) {
  if (bounded_power(base, depth, cfg.enumeration_cap) > cfg.enumeration_cap) {
    throw ResourceError(std::string(what) + ": " + std::to_string(base) + "^" +
                        std::to_string(depth) +
                        " words exceed the enumeration cap of " +
                        std::to_string(cfg.enumeration_cap));
  }
}

}  // namespace detail
}  // namespace ssframe
