#pragma once

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "iccap/core/report.hpp"
#include "iccap/gaussian/bounds.hpp"
#include "iccap/gaussian/channel.hpp"

namespace iccap {

enum class Regime { ProportionalDegraded, ThreeUserSuccessive, TwoUserMixed, RankOneDegraded, None };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::ProportionalDegraded: return "ProportionalDegraded";
    case Regime::ThreeUserSuccessive: return "ThreeUserSuccessive";
    case Regime::TwoUserMixed: return "TwoUserMixed";
    case Regime::RankOneDegraded: return "RankOneDegraded";
    case Regime::None: return "None";
  }
  return "?";
}

struct RegimeReport {
  Regime regime = Regime::None;
  std::vector<ConditionCheck> conditions;
  /// Present only when every listed condition holds.
  std::optional<double> certified_capacity;
  /// Free-form qualifier, e.g. the user relabeling a report refers to.
  std::string note;
};

namespace detail {

inline void require_normalized(const GaussianIC& ch, const char* who) {
  if (!ch.is_normalized()) throw ArgumentError(std::string(who) + ": channel must have unit direct gains (normalize first)");
}

/// a == b within relative tolerance; margin is minus the relative gap.
inline ConditionCheck equality_check(std::string id, double a, double b) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  const double gap = std::abs(a - b) / scale;
  return {std::move(id), gap <= kRatioTolerance, -gap};
}

}  // namespace detail

/// min(ψ(P1 + a12²P2) + ψ(P3 / (a31²P1 + a32²P2 + 1)), ψ(P1 + a12²P2 + a13²P3)).
inline double sum_capacity_three_user(const GaussianIC& ch) {
  if (ch.users() != 3) throw ArgumentError("sum_capacity_three_user: channel must have three users");
  const double first = psi(ch.power(0) + ch.received(0, 1)) +
                       psi(ch.power(2) / (ch.received(2, 0) + ch.received(2, 1) + 1.0));
  const double second = psi(ch.power(0) + ch.received(0, 1) + ch.received(0, 2));
  return std::min(first, second);
}

/// Gain and power conditions under which successive decoding is sum-rate
/// optimal for three users.
inline RegimeReport classify_three_user(const GaussianIC& ch) {
  if (ch.users() != 3) throw ArgumentError("classify_three_user: channel must have three users");
  detail::require_normalized(ch, "classify_three_user");
  const double a12 = ch.gain(0, 1), a13 = ch.gain(0, 2);
  const double a21 = ch.gain(1, 0), a23 = ch.gain(1, 2);
  const double a31 = ch.gain(2, 0), a32 = ch.gain(2, 1);
  const double p1 = ch.power(0);

  RegimeReport r;
  r.regime = Regime::ThreeUserSuccessive;
  auto ineq = [](std::string id, double margin) { return ConditionCheck{std::move(id), margin >= 0.0, margin}; };
  r.conditions.push_back(ineq("|a12|>=1", std::abs(a12) - 1.0));
  r.conditions.push_back(ineq("|a31|<=1", 1.0 - std::abs(a31)));
  r.conditions.push_back(ineq("|a23|>=1", std::abs(a23) - 1.0));
  r.conditions.push_back(detail::equality_check("a31=a32/a12", a31 * a12, a32));
  r.conditions.push_back(detail::equality_check("a12=a13/a23", a12 * a23, a13));
  r.conditions.push_back(ineq("P1+1>=a12^2(a21^2P1+1)", p1 + 1.0 - a12 * a12 * (a21 * a21 * p1 + 1.0)));
  if (all_hold(r.conditions)) r.certified_capacity = sum_capacity_three_user(ch);
  return r;
}

/// Two-user mixed interference: |a12| >= 1 makes Y2 a degraded view of X2
/// relative to Y1 given X1, and |a21| <= 1 makes Y2 degraded relative to Y1
/// for X1 given X2. Both tested through the proportional-gain criterion.
inline RegimeReport mixed_regime_two_user(const GaussianIC& ch) {
  if (ch.users() != 2) throw ArgumentError("mixed_regime_two_user: channel must have two users");
  detail::require_normalized(ch, "mixed_regime_two_user");
  RegimeReport r;
  r.regime = Regime::TwoUserMixed;
  const auto strong = proportional_degradation(ch, 1, 0, {1}, {0});
  const auto weak = proportional_degradation(ch, 1, 0, {0}, {1});
  r.conditions.push_back({"mixed-strong:|a12|>=1", strong.holds, strong.margin});
  r.conditions.push_back({"mixed-weak:|a21|<=1", weak.holds, weak.margin});
  if (all_hold(r.conditions)) {
    const double p1 = ch.power(0);
    const double p2 = ch.power(1);
    r.certified_capacity = std::min(psi(p1 + ch.received(0, 1)), psi(p1) + psi(p2 / (ch.received(1, 0) + 1.0)));
  }
  return r;
}

/// True iff the gain matrix has numerical rank one.
inline bool rank_one_degraded_check(const GaussianIC& ch) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(ch.gain_matrix());
  const auto& s = svd.singularValues();
  if (s.size() < 2) return s.size() == 1 && s(0) > 0.0;
  return s(0) > 0.0 && s(1) < 1e-9 * s(0);
}

/// Channel with users relabeled: user k of the result is user perm[k] here.
inline GaussianIC relabel(const GaussianIC& ch, const std::vector<std::size_t>& perm) {
  const std::size_t k = ch.users();
  std::vector<std::vector<double>> g(k, std::vector<double>(k));
  std::vector<double> p(k);
  for (std::size_t j = 0; j < k; ++j) {
    p[j] = ch.power(perm[j]);
    for (std::size_t i = 0; i < k; ++i) g[j][i] = ch.gain(perm[j], perm[i]);
  }
  return GaussianIC(std::move(g), std::move(p));
}

/// Degraded ordering by proportional gains. For the user order perm, the
/// per-user less-noisy conditions are tested with the proportional-gain
/// criterion; when they hold and the best successive-decoding rate over
/// nested_orders meets the nested-chain bound, that common value is
/// reported as the sum capacity. Every ordering is
/// tried for K <= 6, only the identity beyond.
inline RegimeReport proportional_degraded_regime(const GaussianIC& ch) {
  const std::size_t k = ch.users();
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  RegimeReport best;
  best.regime = Regime::ProportionalDegraded;
  bool have = false;
  const auto orders = nested_orders(k);
  do {
    const auto rel = relabel(ch, perm);
    RegimeReport r;
    r.regime = Regime::ProportionalDegraded;
    ConditionSpec spec;
    spec.kind = ConditionKind::LessNoisyPerUser;
    r.conditions = verify_gaussian_conditions(rel, spec);
    const double outer = evaluate_gaussian(rel, expressions::theorem1(k));
    double inner = 0.0;
    for (const auto& order : orders) inner = std::max(inner, successive_decoding_sum_rate(rel, order));
    r.conditions.push_back({"inner=outer", std::abs(outer - inner) <= 1e-9, -std::abs(outer - inner)});
    std::string order = "order";
    for (std::size_t u : perm) order += " " + std::to_string(u + 1);
    r.note = order;
    if (all_hold(r.conditions)) {
      r.certified_capacity = inner;
      return r;
    }
    if (!have) {
      best = r;
      have = true;
    }
  } while (k <= 6 && std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Every regime report for a channel plus heuristic inner and outer values.
struct Classification {
  GaussianIC normalized;
  std::vector<RegimeReport> reports;
  /// Index into `reports` of the first certified regime.
  std::optional<std::size_t> certified;
  bool rank_one = false;
  /// Best successive-decoding sum rate over nested_orders under every
  /// relabeling (identity only for K > 4); achievable.
  double inner = 0.0;
  /// Smallest cut-structure bound whose closed-form conditions hold, with
  /// full-power Gaussian inputs (not proven optimal for the bound).
  std::optional<double> outer;
};

namespace detail {

inline std::vector<std::vector<std::size_t>> all_permutations(std::size_t k) {
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::vector<std::size_t>> out;
  do {
    out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

inline std::string order_note(const std::vector<std::size_t>& perm) {
  std::string s = "order";
  for (std::size_t u : perm) s += " " + std::to_string(u + 1);
  return s;
}

/// Runs `classify` on every relabeling and keeps the first certified report,
/// or the identity report if none is certified.
template <class F>
RegimeReport best_relabeling(const GaussianIC& ch, F&& classify) {
  std::optional<RegimeReport> first;
  for (const auto& perm : all_permutations(ch.users())) {
    auto r = classify(relabel(ch, perm));
    r.note = order_note(perm);
    if (r.certified_capacity) return r;
    if (!first) first = std::move(r);
  }
  return *first;
}

}  // namespace detail

/// Runs every applicable regime test on the normalized channel. The
/// three-user and two-user tests are tried under every user relabeling.
inline Classification classify_channel(const GaussianIC& ch) {
  Classification c{normalize(ch), {}, std::nullopt, false, 0.0, std::nullopt};
  const auto& n = c.normalized;
  const std::size_t k = n.users();
  if (k == 3) c.reports.push_back(detail::best_relabeling(n, classify_three_user));
  if (k == 2) c.reports.push_back(detail::best_relabeling(n, mixed_regime_two_user));
  c.reports.push_back(proportional_degraded_regime(n));
  c.rank_one = rank_one_degraded_check(n);
  if (c.rank_one) {
    RegimeReport r;
    r.regime = Regime::RankOneDegraded;
    r.conditions.push_back({"rank-one gain matrix", true, 0.0});
    r.note = "degraded ordering not checked in closed form; not certified";
    c.reports.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < c.reports.size(); ++i) {
    if (c.reports[i].certified_capacity) {
      c.certified = i;
      break;
    }
  }
  std::vector<std::vector<std::size_t>> perms;
  if (k <= 4) {
    perms = detail::all_permutations(k);
  } else {
    perms.emplace_back(k);
    std::iota(perms.front().begin(), perms.front().end(), std::size_t{0});
  }
  // nested_orders only lets a receiver decode higher-indexed users, so
  // relabel to reach the other decoding directions.
  const auto orders = nested_orders(k);
  for (const auto& perm : perms) {
    const auto rel = relabel(n, perm);
    for (const auto& order : orders) c.inner = std::max(c.inner, successive_decoding_sum_rate(rel, order));
  }
  for (const auto& perm : perms) {
    // Every strictly increasing cut list ending at K.
    for (std::size_t mask = 0; mask < (std::size_t{1} << (k - 1)); ++mask) {
      Theorem3Structure s{perm, {}};
      for (std::size_t i = 1; i < k; ++i) {
        if (mask >> (i - 1) & 1U) s.cuts.push_back(i);
      }
      s.cuts.push_back(k);
      const auto b = theorem_bound_gaussian(n, s);
      if (b.certified && (!c.outer || b.value < *c.outer)) c.outer = b.value;
    }
  }
  return c;
}

}  // namespace iccap
