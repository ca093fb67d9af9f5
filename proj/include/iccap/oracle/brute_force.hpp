#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "iccap/discrete/channel.hpp"
#include "iccap/discrete/expression.hpp"
#include "iccap/discrete/search.hpp"

namespace iccap {

/// Grid cap for brute_force_sum_capacity.
inline constexpr std::size_t kMaxGridPoints = 10'000'000;

struct BruteForceResult {
  double value = 0.0;
  /// Largest change of the objective from the argmax to an adjacent grid
  /// point: a rough estimate of how far the grid maximum can sit below the
  /// true maximum.
  double grid_gap = 0.0;
  ProductInput argmax;
  std::size_t points = 0;
};

namespace detail {

/// Every distribution on `card` symbols whose entries are multiples of 1/m.
inline std::vector<std::vector<double>> simplex_grid(std::size_t card, std::size_t m) {
  std::vector<std::vector<double>> out;
  const double step = 1.0 / static_cast<double>(m);
  if (card == 1) return {{1.0}};
  if (card == 2) {
    for (std::size_t i = 0; i <= m; ++i) out.push_back({static_cast<double>(i) * step, static_cast<double>(m - i) * step});
    return out;
  }
  for (std::size_t i = 0; i <= m; ++i) {
    for (std::size_t j = 0; i + j <= m; ++j) {
      out.push_back({static_cast<double>(i) * step, static_cast<double>(j) * step, static_cast<double>(m - i - j) * step});
    }
  }
  return out;
}

/// Pairs of grid indices one 1/m mass move apart.
inline std::vector<std::pair<std::size_t, std::size_t>> grid_neighbours(const std::vector<std::vector<double>>& grid,
                                                                        std::size_t m) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const double move = 2.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      double l1 = 0.0;
      for (std::size_t s = 0; s < grid[i].size(); ++s) l1 += std::abs(grid[i][s] - grid[j][s]);
      if (std::abs(l1 - move) < 1e-12) out.emplace_back(i, j);
    }
  }
  return out;
}

}  // namespace detail

/// Exhaustive maximization of `expr` over product inputs whose per-user laws
/// lie on the 1/m grid. Sum-type objectives use |Q| = 1; min-type objectives
/// use two time-sharing branches with weights on the same grid. Binary and
/// ternary input alphabets only.
inline BruteForceResult brute_force_sum_capacity(const DiscreteIC& ch, const Expression& expr, std::size_t m = 16) {
  expr.validate(ch.users());
  if (m == 0) throw ArgumentError("brute_force_sum_capacity: grid resolution must be at least 1");
  for (std::size_t c : ch.input_cards()) {
    if (c > 3) throw ArgumentError("brute_force_sum_capacity: only binary and ternary inputs are supported");
  }
  const std::size_t users = ch.users();
  std::vector<std::vector<std::vector<double>>> grids;
  std::vector<std::size_t> sizes;
  for (std::size_t c : ch.input_cards()) {
    grids.push_back(detail::simplex_grid(c, m));
    sizes.push_back(grids.back().size());
  }
  double g = 1.0;
  for (std::size_t s : sizes) g *= static_cast<double>(s);
  const double total = expr.is_min() ? g * (g + 1.0) / 2.0 * static_cast<double>(m + 1) : g;
  if (total > static_cast<double>(kMaxGridPoints)) throw SizeError("brute_force_sum_capacity: grid exceeds 1e7 points");
  const auto n_grid = static_cast<std::size_t>(g);

  auto per_user_at = [&](std::size_t flat) {
    const auto d = detail::unflatten(flat, sizes);
    std::vector<std::vector<double>> pu;
    for (std::size_t u = 0; u < users; ++u) pu.push_back(grids[u][d[u]]);
    return pu;
  };

  // Per-alternative values at every single-branch grid point.
  std::vector<std::vector<double>> values(n_grid);
  std::vector<double> objective(n_grid);
  for (std::size_t p = 0; p < n_grid; ++p) {
    values[p] = branch_values(ch, per_user_at(p), expr);
    objective[p] = *std::min_element(values[p].begin(), values[p].end());
  }

  BruteForceResult r;
  std::size_t best_sum = 0;
  std::array<std::size_t, 3> best_pair{0, 0, 0};
  r.value = -std::numeric_limits<double>::infinity();
  if (!expr.is_min()) {
    for (std::size_t p = 0; p < n_grid; ++p) {
      if (objective[p] > r.value) {
        r.value = objective[p];
        best_sum = p;
      }
    }
    r.argmax = ProductInput::single(per_user_at(best_sum));
    r.points = n_grid;
  } else {
    const std::size_t n_alt = expr.alternatives.size();
    std::size_t b1 = 0, b2 = 0, bw = 0;
    for (std::size_t p1 = 0; p1 < n_grid; ++p1) {
      for (std::size_t p2 = p1; p2 < n_grid; ++p2) {
        for (std::size_t w = 0; w <= m; ++w) {
          const double t = static_cast<double>(w) / static_cast<double>(m);
          double v = std::numeric_limits<double>::infinity();
          for (std::size_t a = 0; a < n_alt; ++a) v = std::min(v, t * values[p1][a] + (1.0 - t) * values[p2][a]);
          if (v > r.value) {
            r.value = v;
            b1 = p1;
            b2 = p2;
            bw = w;
          }
        }
      }
    }
    best_pair = {b1, b2, bw};
    const double t = static_cast<double>(bw) / static_cast<double>(m);
    r.argmax.q_weights = {t, 1.0 - t};
    r.argmax.branch_dists = {per_user_at(b1), per_user_at(b2)};
    r.points = static_cast<std::size_t>(total);
  }

  // Spread of the objective across the grid cells around the argmax.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> nb;
  for (std::size_t u = 0; u < users; ++u) nb.push_back(detail::grid_neighbours(grids[u], m));
  auto neighbours_of = [&](std::size_t p) {
    std::vector<std::size_t> out;
    const auto d = detail::unflatten(p, sizes);
    for (std::size_t u = 0; u < users; ++u) {
      for (const auto& [i, j] : nb[u]) {
        if (d[u] != i && d[u] != j) continue;
        auto d2 = d;
        d2[u] = d[u] == i ? j : i;
        out.push_back(detail::flatten(d2, sizes));
      }
    }
    return out;
  };
  if (!expr.is_min()) {
    for (std::size_t q : neighbours_of(best_sum)) r.grid_gap = std::max(r.grid_gap, std::abs(r.value - objective[q]));
  } else {
    const std::size_t n_alt = expr.alternatives.size();
    auto mixed = [&](std::size_t p1, std::size_t p2, std::size_t w) {
      const double t = static_cast<double>(w) / static_cast<double>(m);
      double v = std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < n_alt; ++a) v = std::min(v, t * values[p1][a] + (1.0 - t) * values[p2][a]);
      return v;
    };
    auto widen = [&](double v) { r.grid_gap = std::max(r.grid_gap, std::abs(r.value - v)); };
    for (std::size_t q : neighbours_of(best_pair[0])) widen(mixed(q, best_pair[1], best_pair[2]));
    for (std::size_t q : neighbours_of(best_pair[1])) widen(mixed(best_pair[0], q, best_pair[2]));
    if (best_pair[2] > 0) widen(mixed(best_pair[0], best_pair[1], best_pair[2] - 1));
    if (best_pair[2] < m) widen(mixed(best_pair[0], best_pair[1], best_pair[2] + 1));
  }
  r.value = std::max(r.value, 0.0);
  return r;
}

}  // namespace iccap
