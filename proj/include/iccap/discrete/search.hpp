#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "iccap/core/random.hpp"
#include "iccap/core/report.hpp"
#include "iccap/discrete/expression.hpp"
#include "iccap/info/simplex.hpp"

namespace iccap {

struct SearchConfig {
  std::size_t restarts = 64;
  double tol = 1e-9;
  /// Time-sharing alphabet for min-type objectives; defaults to the number
  /// of alternatives. Sum-type objectives always use |Q| = 1.
  std::optional<std::size_t> q_card;
  std::size_t max_sweeps = 500;
  std::uint64_t seed = 0;
};

/// Per-alternative values of `expr` under a single product input (|Q| = 1).
inline std::vector<double> branch_values(const DiscreteIC& ch, const std::vector<std::vector<double>>& per_user,
                                         const Expression& expr) {
  return alternative_values(assemble_joint(ProductInput::single(per_user), ch), expr);
}

namespace detail {

inline constexpr double kInvPhi = 0.6180339887498949;

/// Maximizes f on [lo, hi] by golden-section search, also probing the
/// endpoints. Returns (argmax, value).
inline std::pair<double, double> golden_max(const std::function<double(double)>& f, double lo, double hi,
                                            double x_tol = 1e-11) {
  double best_x = lo;
  double best_v = f(lo);
  if (const double v = f(hi); v > best_v) {
    best_x = hi;
    best_v = v;
  }
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > x_tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  if (fc > best_v) {
    best_x = c;
    best_v = fc;
  }
  if (fd > best_v) {
    best_x = d;
    best_v = fd;
  }
  return {best_x, best_v};
}

/// Search state: time-sharing weights, per-branch laws and the cached
/// per-branch alternative values.
struct SearchState {
  std::vector<double> weights;
  std::vector<std::vector<std::vector<double>>> dists;  // [q][user][symbol]
  std::vector<std::vector<double>> values;              // [q][alternative]

  [[nodiscard]] double objective_with(const std::vector<double>& w) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < values.front().size(); ++a) {
      double s = 0.0;
      for (std::size_t q = 0; q < w.size(); ++q) s += w[q] * values[q][a];
      best = std::min(best, s);
    }
    return best;
  }

  [[nodiscard]] double objective() const { return objective_with(weights); }
};

}  // namespace detail

/// Multi-start coordinate ascent over product inputs. Each restart draws a
/// random point of the simplex product, then repeatedly line-searches mass
/// transfers between pairs of symbols within one block (one user's law in
/// one branch, or the time-sharing weights) until a full sweep improves the
/// objective by less than `cfg.tol`. Heuristic: certified is always false.
inline BoundResult maximize_expression(const DiscreteIC& ch, const Expression& expr, const SearchConfig& cfg = {}) {
  expr.validate(ch.users());
  if (cfg.restarts == 0) throw ArgumentError("maximize_expression: restarts must be at least 1");
  (void)JointDist::checked_size([&] {
    std::vector<Variable> v;
    for (std::size_t c : ch.input_cards()) v.push_back({"x", c});
    for (std::size_t c : ch.output_cards()) v.push_back({"y", c});
    return v;
  }());
  const std::size_t q_card = expr.is_min() ? cfg.q_card.value_or(expr.alternatives.size()) : 1;
  if (q_card == 0) throw ArgumentError("maximize_expression: q_card must be at least 1");
  const std::size_t users = ch.users();
  const Rng base(cfg.seed);

  BoundResult best;
  best.expression_id = expr.id;
  best.value = -std::numeric_limits<double>::infinity();
  best.search_stats.restarts = cfg.restarts;

  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    Rng rng = base.split(r);
    detail::SearchState st;
    st.weights = sample_simplex(q_card, rng);
    for (std::size_t q = 0; q < q_card; ++q) {
      std::vector<std::vector<double>> per_user;
      for (std::size_t u = 0; u < users; ++u) {
        per_user.push_back(r == 0 ? std::vector<double>(ch.input_cards()[u], 1.0 / static_cast<double>(ch.input_cards()[u]))
                                  : sample_simplex(ch.input_cards()[u], rng));
      }
      st.values.push_back(branch_values(ch, per_user, expr));
      st.dists.push_back(std::move(per_user));
    }
    if (r == 0) st.weights.assign(q_card, 1.0 / static_cast<double>(q_card));

    double current = st.objective();
    for (std::size_t sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
      const double sweep_start = current;
      // Time-sharing weights: values are cached, so no MI evaluation needed.
      for (std::size_t a = 0; a < q_card; ++a) {
        for (std::size_t b = a + 1; b < q_card; ++b) {
          auto w = st.weights;
          auto f = [&](double t) {
            w[a] = st.weights[a] + t;
            w[b] = st.weights[b] - t;
            return st.objective_with(w);
          };
          const auto [t, v] = detail::golden_max(f, -st.weights[a], st.weights[b]);
          ++best.search_stats.iterations;
          if (v > current) {
            st.weights[a] += t;
            st.weights[b] -= t;
            st.weights[a] = std::max(st.weights[a], 0.0);
            st.weights[b] = std::max(st.weights[b], 0.0);
            current = st.objective();
          }
        }
      }
      for (std::size_t q = 0; q < q_card; ++q) {
        for (std::size_t u = 0; u < users; ++u) {
          const std::size_t card = ch.input_cards()[u];
          for (std::size_t a = 0; a < card; ++a) {
            for (std::size_t b = a + 1; b < card; ++b) {
              auto trial = st.dists[q];
              auto saved_values = st.values[q];
              auto f = [&](double t) {
                trial[u][a] = std::max(st.dists[q][u][a] + t, 0.0);
                trial[u][b] = std::max(st.dists[q][u][b] - t, 0.0);
                st.values[q] = branch_values(ch, trial, expr);
                return st.objective();
              };
              const auto [t, v] = detail::golden_max(f, -st.dists[q][u][a], st.dists[q][u][b]);
              ++best.search_stats.iterations;
              if (v > current) {
                f(t);
                st.dists[q] = trial;
                current = st.objective();
              } else {
                st.values[q] = saved_values;
              }
            }
          }
        }
      }
      if (current - sweep_start < cfg.tol) break;
    }

    if (current > best.value) {
      best.value = current;
      ProductInput arg;
      arg.q_weights = st.weights;
      arg.branch_dists = st.dists;
      best.argmax = std::move(arg);
      best.trace.push_back(current);
    }
  }
  best.search_stats.trace_length = best.trace.size();
  best.value = std::max(best.value, 0.0);
  best.certified = false;
  return best;
}

}  // namespace iccap
