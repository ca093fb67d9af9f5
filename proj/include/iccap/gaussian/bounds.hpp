#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iccap/core/report.hpp"
#include "iccap/decode_order.hpp"
#include "iccap/discrete/conditions.hpp"
#include "iccap/discrete/expression.hpp"
#include "iccap/gaussian/channel.hpp"

namespace iccap {

/// Relative tolerance for gain-ratio equalities.
inline constexpr double kRatioTolerance = 1e-9;

namespace detail {

struct RatioFit {
  double alpha = 0.0;
  double mismatch = 0.0;  // largest relative deviation of a_i from α·b_i
};

/// Common ratio a_i / b_i, read off at the largest |b_i|.
inline RatioFit fit_ratio(const std::vector<double>& a, const std::vector<double>& b) {
  RatioFit f;
  if (a.empty()) return f;
  std::size_t pivot = 0;
  for (std::size_t i = 1; i < b.size(); ++i) {
    if (std::abs(b[i]) > std::abs(b[pivot])) pivot = i;
  }
  f.alpha = b[pivot] == 0.0 ? 0.0 : a[pivot] / b[pivot];
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scaled = f.alpha * b[i];
    const double scale = std::max({1.0, std::abs(a[i]), std::abs(scaled)});
    f.mismatch = std::max(f.mismatch, std::abs(a[i] - scaled) / scale);
  }
  return f;
}

}  // namespace detail

/// Detailed outcome of the proportional-gain degradation test.
struct ProportionalCheck {
  bool holds = false;
  double alpha = 0.0;
  double margin = 0.0;  // 1 − |α| when the ratios agree, minus the ratio mismatch otherwise
};

/// Tests whether receiver `a` is a degraded version of receiver `b` given
/// the conditioned users: a_i = α·b_i for every decoded user with |α| <= 1,
/// and every user in neither set is silent at both receivers.
inline ProportionalCheck proportional_degradation(const GaussianIC& ch, std::size_t a, std::size_t b,
                                                  const std::vector<std::size_t>& decoded,
                                                  const std::vector<std::size_t>& conditioned) {
  if (decoded.empty()) throw ArgumentError("check_proportional_degradation: decoded set must be nonempty");
  if (a >= ch.users() || b >= ch.users()) throw ArgumentError("check_proportional_degradation: receiver out of range");
  detail::check_user_sets(ch, decoded, conditioned);

  ProportionalCheck out;
  double outsider = 0.0;
  for (std::size_t u = 0; u < ch.users(); ++u) {
    const bool listed = std::find(decoded.begin(), decoded.end(), u) != decoded.end() ||
                        std::find(conditioned.begin(), conditioned.end(), u) != conditioned.end();
    if (!listed) outsider = std::max({outsider, std::abs(ch.gain(a, u)), std::abs(ch.gain(b, u))});
  }

  std::vector<double> av;
  std::vector<double> bv;
  for (std::size_t u : decoded) {
    av.push_back(ch.gain(a, u));
    bv.push_back(ch.gain(b, u));
  }
  const auto fit = detail::fit_ratio(av, bv);
  out.alpha = fit.alpha;
  const double mismatch = fit.mismatch;
  const bool ratios_equal = mismatch <= kRatioTolerance;
  out.holds = ratios_equal && outsider == 0.0 && std::abs(out.alpha) <= 1.0 + 1e-12;
  if (!ratios_equal) {
    out.margin = -mismatch;
  } else if (outsider != 0.0) {
    out.margin = -outsider;
  } else {
    out.margin = 1.0 - std::abs(out.alpha);
  }
  return out;
}

/// α if the gain ratios over the decoded users share a common value with
/// |α| <= 1 (within relative tolerance 1e-9), otherwise empty.
inline std::optional<double> check_proportional_degradation(const GaussianIC& ch, std::pair<std::size_t, std::size_t> pair,
                                                            const std::vector<std::size_t>& decoded,
                                                            const std::vector<std::size_t>& conditioned) {
  const auto r = proportional_degradation(ch, pair.first, pair.second, decoded, conditioned);
  if (!r.holds) return std::nullopt;
  return r.alpha;
}

/// Closed-form sufficient test of every quantified inequality in `spec`:
/// each single-receiver inequality holds if its LHS receiver is a
/// proportionally degraded version of the RHS receiver given the
/// conditioned inputs. Multi-receiver inequalities have no closed-form test
/// here and are reported as not verified.
inline std::vector<ConditionCheck> verify_gaussian_conditions(const GaussianIC& ch, const ConditionSpec& spec) {
  std::vector<ConditionCheck> out;
  for (const auto& q : expand(spec, ch.users())) {
    for (const auto& rhs : q.rhs) {
      ConditionCheck c;
      c.id = q.id;
      if (q.lhs.size() != 1 || rhs.size() != 1) {
        c.id += "[group: no closed-form test]";
        c.holds = false;
        c.margin = 0.0;
        out.push_back(std::move(c));
        continue;
      }
      c.id += "[Y" + std::to_string(q.lhs[0] + 1) + "<=Y" + std::to_string(rhs[0] + 1) + "]";
      const auto decoded = detail::complement(q.given, ch.users());
      if (decoded.empty()) {
        c.holds = true;
        c.margin = 0.0;
      } else {
        const auto r = proportional_degradation(ch, q.lhs[0], rhs[0], decoded, q.given);
        c.holds = r.holds;
        c.margin = r.margin;
      }
      out.push_back(std::move(c));
    }
  }
  return out;
}

/// Value of an expression with independent full-power Gaussian inputs and
/// degenerate time sharing.
inline double evaluate_gaussian(const GaussianIC& ch, const Expression& expr) {
  expr.validate(ch.users());
  double best = std::numeric_limits<double>::infinity();
  for (const auto& alt : expr.alternatives) {
    double s = 0.0;
    for (const auto& t : alt) s += gaussian_group_cmi(ch, t.decoded, t.given, t.receivers);
    best = std::min(best, s);
  }
  return best;
}

/// Sum rate of successive decoding with the given per-receiver orders: each
/// user's rate is capped by its constraint at every receiver decoding it.
inline double successive_decoding_sum_rate(const GaussianIC& ch, const DecodeOrder& order) {
  return evaluate_gaussian(ch, expressions::successive_decoding(order, ch.users()));
}

/// Evaluates the outer-bound expression of `structure` with full-power
/// Gaussian inputs. Certified only when every condition that makes the
/// expression an outer bound passes its closed-form Gaussian test.
inline BoundResult theorem_bound_gaussian(const GaussianIC& ch, const BoundStructure& structure) {
  BoundResult r;
  const auto expr = expressions::for_structure(ch.users(), structure);
  r.expression_id = expr.id;
  r.value = evaluate_gaussian(ch, expr);
  r.conditions = verify_gaussian_conditions(ch, conditions_for(structure));
  r.certified = all_hold(r.conditions);
  return r;
}

}  // namespace iccap
