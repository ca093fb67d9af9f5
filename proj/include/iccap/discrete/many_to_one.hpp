#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "iccap/core/report.hpp"
#include "iccap/discrete/conditions.hpp"
#include "iccap/discrete/search.hpp"
#include "iccap/info/assemble.hpp"

namespace iccap {

inline constexpr double kFactorizationTolerance = 1e-12;

/// Largest deviation of the transition from
/// P(y|x) = Π_{i<K} P(y_i|x_i) · P(y_K|x), where P(y_i|x) may depend on x_i only.
inline double many_to_one_deviation(const DiscreteIC& ch) {
  const std::size_t k = ch.users();
  const std::size_t nx = ch.num_inputs();
  std::vector<std::vector<double>> marg(k);
  for (std::size_t r = 0; r < k; ++r) marg[r] = receiver_marginal(ch, {r});
  double dev = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    const auto xd = detail::unflatten(x, ch.input_cards());
    for (std::size_t r = 0; r + 1 < k; ++r) {
      // Compare with the input tuple that keeps x_r and zeroes every other input.
      std::vector<std::size_t> ref(k, 0);
      ref[r] = xd[r];
      const std::size_t xr = detail::flatten(ref, ch.input_cards());
      for (std::size_t y = 0; y < ch.output_cards()[r]; ++y) {
        dev = std::max(dev, std::abs(marg[r][x * ch.output_cards()[r] + y] - marg[r][xr * ch.output_cards()[r] + y]));
      }
    }
    for (std::size_t y = 0; y < ch.num_outputs(); ++y) {
      const auto yd = detail::unflatten(y, ch.output_cards());
      double p = 1.0;
      for (std::size_t r = 0; r < k; ++r) p *= marg[r][x * ch.output_cards()[r] + yd[r]];
      dev = std::max(dev, std::abs(p - ch.prob(x, y)));
    }
  }
  return dev;
}

/// Sum capacity of a many-to-one channel under treating interference as
/// noise: max Σ_i I(X_i; Y_i | Q). Certified iff the receiver-group
/// less-noisy condition survives `samples` falsification draws.
inline BoundResult many_to_one_tin_capacity(const DiscreteIC& ch, const SearchConfig& cfg = {},
                                            std::size_t samples = 10000) {
  if (ch.users() < 2) throw NotManyToOneError("many_to_one_tin_capacity: need at least two users");
  const double dev = many_to_one_deviation(ch);
  if (dev > kFactorizationTolerance) {
    throw NotManyToOneError("many_to_one_tin_capacity: transition deviates from the many-to-one factorization by " +
                            std::to_string(dev));
  }
  auto result = maximize_expression(ch, expressions::tin(ch.users()), cfg);
  ConditionSpec spec;
  spec.kind = ConditionKind::ManyToOne;
  const auto cex = falsify_condition(ch, spec, samples, Rng(cfg.seed).split(0x4d324f));
  result.conditions.push_back({"many-to-one", !cex.has_value(), cex ? -cex->margin : 0.0});
  result.certified = !cex.has_value();
  return result;
}

}  // namespace iccap
