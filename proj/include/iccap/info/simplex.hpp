#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "iccap/core/errors.hpp"
#include "iccap/core/random.hpp"

namespace iccap {

/// Uniform draw from the probability simplex of dimension `dim`, via
/// normalized exponential spacings.
inline std::vector<double> sample_simplex(std::size_t dim, Rng& rng) {
  if (dim == 0) throw ArgumentError("sample_simplex: dimension must be positive");
  if (dim == 1) return {1.0};
  std::vector<double> p(dim);
  double total = 0.0;
  for (auto& x : p) {
    x = -std::log1p(-rng.uniform());
    total += x;
  }
  if (total <= 0.0) return sample_simplex(dim, rng);
  for (auto& x : p) x /= total;
  return p;
}

/// Simplex draw biased toward faces and vertices: a uniform draw raised
/// elementwise to `sharpness` and renormalized.
inline std::vector<double> sample_simplex_sharp(std::size_t dim, Rng& rng, double sharpness = 4.0) {
  auto p = sample_simplex(dim, rng);
  double total = 0.0;
  for (auto& x : p) {
    x = std::pow(x, sharpness);
    total += x;
  }
  for (auto& x : p) x /= total;
  return p;
}

}  // namespace iccap
