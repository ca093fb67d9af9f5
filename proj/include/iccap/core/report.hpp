#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "iccap/discrete/channel.hpp"

namespace iccap {

/// Outcome of one checked condition. `margin` is signed: nonnegative when
/// the condition holds (up to the tolerance stated with each check).
struct ConditionCheck {
  std::string id;
  bool holds = false;
  double margin = 0.0;
};

struct SearchStats {
  std::size_t restarts = 0;
  std::size_t iterations = 0;
  std::size_t trace_length = 0;
};

/// A bound or rate value with its provenance.
struct BoundResult {
  double value = 0.0;
  std::string expression_id;
  std::optional<ProductInput> argmax;
  /// True only when the conditions that make the expression a valid bound
  /// were verified (Gaussian: closed-form sufficient conditions; discrete:
  /// no counterexample found by sampling).
  bool certified = false;
  SearchStats search_stats;
  std::vector<ConditionCheck> conditions;
  std::vector<double> trace;  // best value after each improving step
};

inline bool all_hold(const std::vector<ConditionCheck>& cs) {
  for (const auto& c : cs) {
    if (!c.holds) return false;
  }
  return true;
}

}  // namespace iccap
