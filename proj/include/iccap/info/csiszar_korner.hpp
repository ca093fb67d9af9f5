#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "iccap/info/joint_dist.hpp"

namespace iccap {

/// Variable names used by the telescoping identity checker: `Ya_1..Ya_n`,
/// `Yb_1..Yb_n` and an optional side variable `W`.
inline std::string ya_name(std::size_t t) { return "Ya_" + std::to_string(t); }
inline std::string yb_name(std::size_t t) { return "Yb_" + std::to_string(t); }
inline const std::string kSideVariable = "W";

namespace detail {

inline VarSet sequence_range(std::string (*name)(std::size_t), std::size_t first, std::size_t last) {
  std::vector<std::string> names;
  for (std::size_t t = first; t <= last; ++t) names.push_back(name(t));
  return VarSet(std::move(names));
}

}  // namespace detail

/// Σ_t I(Yb_{t+1}^n; Ya_t | W, Ya^{t-1}) − Σ_t I(Ya^{t-1}; Yb_t | W, Yb_{t+1}^n).
/// Zero for every joint distribution; the return value is the numerical residual.
inline double csiszar_korner_residual(const JointDist& d, std::size_t n) {
  if (n == 0) throw ArgumentError("csiszar_korner_residual: blocklength must be at least 1");
  for (std::size_t t = 1; t <= n; ++t) {
    (void)d.index_of(ya_name(t));
    (void)d.index_of(yb_name(t));
  }
  const VarSet side = d.has(kSideVariable) ? VarSet{kSideVariable} : VarSet{};
  double forward = 0.0;
  double backward = 0.0;
  for (std::size_t t = 1; t <= n; ++t) {
    const VarSet a_past = detail::sequence_range(ya_name, 1, t - 1);
    const VarSet b_future = detail::sequence_range(yb_name, t + 1, n);
    forward += conditional_mi(d, b_future, VarSet{ya_name(t)}, side + a_past);
    backward += conditional_mi(d, a_past, VarSet{yb_name(t)}, side + b_future);
  }
  return forward - backward;
}

}  // namespace iccap
