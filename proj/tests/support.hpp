#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ssframe/ssframe.hpp"

namespace testing {

using ssframe::IfsSpec;
using ssframe::Rational;
using ssframe::Word;

inline constexpr int kCases = 256;

inline Rational q(const std::string& s) { return Rational::parse(s); }
inline Rational q(long long n, long long d = 1) { return Rational(n) / Rational(d); }

// Deterministic generator for the property suites; each suite seeds its own.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long long integer(long long lo, long long hi) { return std::uniform_int_distribution<long long>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  Rational rational(long long lo, long long hi, long long max_den) {
    const long long d = integer(1, max_den);
    return q(integer(lo * d, hi * d), d);
  }

  // Positive weights summing to one exactly.
  std::vector<Rational> weights(int n) {
    std::vector<long long> raw(static_cast<std::size_t>(n));
    long long total = 0;
    for (auto& r : raw) total += (r = integer(1, 9));
    std::vector<Rational> w;
    for (auto r : raw) w.push_back(q(r, total));
    return w;
  }

  IfsSpec ifs(int max_maps = 4) {
    const int n = static_cast<int>(integer(2, max_maps));
    const long long den = integer(2, 7);
    const Rational ratio = q(integer(1, den - 1), den);
    std::vector<Rational> digits;
    while (static_cast<int>(digits.size()) < n) {
      Rational d = rational(-2, 2, 12);
      if (std::find(digits.begin(), digits.end(), d) == digits.end()) digits.push_back(d);
    }
    std::sort(digits.begin(), digits.end());
    return IfsSpec(ratio, digits, weights(n));
  }

  Word word(int letters, int length) {
    Word w;
    for (int i = 0; i < length; ++i) w.push_back(static_cast<int>(integer(1, letters)));
    return w;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testing
