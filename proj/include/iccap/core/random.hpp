#pragma once

#include <cstdint>
#include <random>

namespace iccap {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Seedable random source. `split(k)` derives an independent stream from
/// the construction seed only, so work item k draws the same numbers no
/// matter which thread runs it or in which order.
class Rng {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(detail::splitmix64(seed)) {}

  [[nodiscard]] Rng split(std::uint64_t stream) const {
    return Rng(detail::splitmix64(seed_ ^ detail::splitmix64(stream + 0x632be59bd9b4e019ULL)));
  }

  [[nodiscard]] std::uint64_t seed() const { return seed_; }

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }

  double normal() { return std::normal_distribution<double>{}(engine_); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace iccap
