#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "iccap/core/errors.hpp"
#include "iccap/core/random.hpp"
#include "iccap/gaussian/bounds.hpp"

namespace iccap {

/// Two scalar outputs of the same inputs with unit Gaussian noise:
/// Y1 = Σ a_i X_i + Z1, Y2 = Σ b_i X_i + Z2. The first mu1 inputs are the
/// decoded ones, the rest are conditioned on.
struct GaussianSystem {
  std::vector<double> a;
  std::vector<double> b;
  std::size_t mu1 = 1;

  void validate() const {
    if (a.size() != b.size()) throw ArgumentError("GaussianSystem: a and b differ in length");
    if (mu1 < 1 || mu1 > a.size()) throw ArgumentError("GaussianSystem: need 1 <= mu1 <= number of inputs");
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!std::isfinite(a[i]) || !std::isfinite(b[i])) throw ArgumentError("GaussianSystem: coefficients must be finite");
    }
  }

  /// Random system with a_i = α b_i on the decoded inputs.
  static GaussianSystem random_proportional(std::size_t mu1, std::size_t mu2, double alpha, Rng& rng) {
    GaussianSystem s;
    s.mu1 = mu1;
    for (std::size_t i = 0; i < mu1 + mu2; ++i) {
      const double bi = rng.uniform(-3.0, 3.0);
      s.b.push_back(bi);
      s.a.push_back(i < mu1 ? alpha * bi : rng.uniform(-3.0, 3.0));
    }
    return s;
  }
};

/// α with a_i = α·b_i on the decoded inputs and |α| <= 1, if any (same
/// tolerances as the channel-level proportional-gain test).
inline std::optional<double> proportional_alpha(const GaussianSystem& sys) {
  sys.validate();
  const std::vector<double> a(sys.a.begin(), sys.a.begin() + static_cast<std::ptrdiff_t>(sys.mu1));
  const std::vector<double> b(sys.b.begin(), sys.b.begin() + static_cast<std::ptrdiff_t>(sys.mu1));
  const auto fit = detail::fit_ratio(a, b);
  if (fit.mismatch > kRatioTolerance || std::abs(fit.alpha) > 1.0 + 1e-12) return std::nullopt;
  return std::clamp(fit.alpha, -1.0, 1.0);
}

namespace detail {

/// Largest deviation between the conditional law of the synthetic output
///   Ỹ1 = αY2 + Σ_{j>mu1} sign·(a_j − αb_j) X_j + √(1−α²) Z̃
/// and that of Y1, given all inputs: conditional mean coefficients and the
/// conditional variance α² + (1 − α²) against 1. sign = −1 flips the
/// correction term, which breaks the match whenever a_j != αb_j.
inline double equivalence_mismatch(const GaussianSystem& sys, double alpha, double sign) {
  sys.validate();
  if (!(std::abs(alpha) <= 1.0)) throw DomainError("degradation_equivalence_check: |alpha| must be at most 1");
  double worst = 0.0;
  for (std::size_t j = 0; j < sys.a.size(); ++j) {
    double coeff = alpha * sys.b[j];
    if (j >= sys.mu1) coeff += sign * (sys.a[j] - alpha * sys.b[j]);
    worst = std::max(worst, std::abs(coeff - sys.a[j]));
  }
  const double variance = alpha * alpha + (1.0 - alpha * alpha);
  return std::max(worst, std::abs(variance - 1.0));
}

}  // namespace detail

/// Max absolute mismatch between the conditional law of the degraded
/// reconstruction of Y1 from Y2 and the law of Y1, given every input. For
/// jointly Gaussian conditionals equal means and variances mean equal laws.
inline double degradation_equivalence_check(const GaussianSystem& sys, double alpha) {
  return detail::equivalence_mismatch(sys, alpha, 1.0);
}

}  // namespace iccap
