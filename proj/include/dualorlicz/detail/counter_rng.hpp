#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace dualorlicz::detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stateless generator: the k-th draw of stream `seed` is a pure function of (seed, k),
/// so sample blocks can be evaluated in any order and merged.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_(splitmix64(seed ^ 0x5851f42d4c957f2dULL)) {}

  std::uint64_t bits(std::uint64_t counter) const { return splitmix64(key_ + splitmix64(counter)); }

  /// Uniform in the open interval (0, 1).
  double uniform(std::uint64_t counter) const {
    return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal pair from draws 2k and 2k+1 (Box-Muller).
  void normal_pair(std::uint64_t k, double& a, double& b) const {
    const double u1 = uniform(2 * k);
    const double u2 = uniform(2 * k + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    a = r * std::cos(2.0 * std::numbers::pi * u2);
    b = r * std::sin(2.0 * std::numbers::pi * u2);
  }

  /// Up to four standard normals for sample index k.
  template <typename Vec>
  void normals(std::uint64_t k, Vec& out, int count) const {
    double v[4];
    normal_pair(2 * k, v[0], v[1]);
    if (count > 2) normal_pair(2 * k + 1, v[2], v[3]);
    for (int i = 0; i < count && i < 4; ++i) out[i] = v[i];
  }

 private:
  std::uint64_t key_;
};

}  // namespace dualorlicz::detail
