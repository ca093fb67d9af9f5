#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "iccap/core/errors.hpp"

namespace iccap {

inline constexpr double kRowTolerance = 1e-12;

namespace detail {

inline std::size_t product(const std::vector<std::size_t>& cards) {
  return std::accumulate(cards.begin(), cards.end(), std::size_t{1}, std::multiplies<>{});
}

/// Row-major digits of `flat` for the given cardinalities.
inline std::vector<std::size_t> unflatten(std::size_t flat, const std::vector<std::size_t>& cards) {
  std::vector<std::size_t> d(cards.size());
  for (std::size_t i = cards.size(); i-- > 0;) {
    d[i] = flat % cards[i];
    flat /= cards[i];
  }
  return d;
}

inline std::size_t flatten(const std::vector<std::size_t>& digits, const std::vector<std::size_t>& cards) {
  std::size_t flat = 0;
  for (std::size_t i = 0; i < cards.size(); ++i) flat = flat * cards[i] + digits[i];
  return flat;
}

inline void check_distribution(const std::vector<double>& p, const std::string& what) {
  double total = 0.0;
  for (double x : p) {
    if (!(x >= 0.0)) throw ArgumentError(what + ": negative or NaN probability");
    total += x;
  }
  if (std::abs(total - 1.0) > kRowTolerance) throw ArgumentError(what + ": probabilities do not sum to 1");
}

}  // namespace detail

/// K-user discrete memoryless interference channel. The transition tensor is
/// row-major with the inputs (x_1..x_K) outer and the outputs (y_1..y_K)
/// inner: entry [flat(x) * |Y| + flat(y)] holds P(y | x).
class DiscreteIC {
 public:
  DiscreteIC(std::vector<std::size_t> input_cards, std::vector<std::size_t> output_cards,
             std::vector<double> transition)
      : input_cards_(std::move(input_cards)), output_cards_(std::move(output_cards)),
        transition_(std::move(transition)) {
    if (input_cards_.empty()) throw ArgumentError("DiscreteIC: at least one user required");
    if (input_cards_.size() != output_cards_.size()) {
      throw ArgumentError("DiscreteIC: input_cards and output_cards differ in length");
    }
    for (std::size_t c : input_cards_) {
      if (c == 0) throw ArgumentError("DiscreteIC: zero input alphabet");
    }
    for (std::size_t c : output_cards_) {
      if (c == 0) throw ArgumentError("DiscreteIC: zero output alphabet");
    }
    if (transition_.size() != num_inputs() * num_outputs()) {
      throw ArgumentError("DiscreteIC: transition has " + std::to_string(transition_.size()) + " entries, expected " +
                          std::to_string(num_inputs() * num_outputs()));
    }
    for (std::size_t x = 0; x < num_inputs(); ++x) {
      double total = 0.0;
      for (std::size_t y = 0; y < num_outputs(); ++y) {
        const double p = transition_[x * num_outputs() + y];
        if (!(p >= 0.0)) throw ArgumentError("DiscreteIC: negative or NaN transition probability");
        total += p;
      }
      if (std::abs(total - 1.0) > kRowTolerance) {
        throw ArgumentError("DiscreteIC: transition row " + std::to_string(x) + " does not sum to 1");
      }
    }
  }

  /// Builds the tensor from a per-entry function f(x digits, y digits).
  template <class F>
  static DiscreteIC from_function(std::vector<std::size_t> input_cards, std::vector<std::size_t> output_cards, F&& f) {
    const std::size_t nx = detail::product(input_cards);
    const std::size_t ny = detail::product(output_cards);
    std::vector<double> t(nx * ny);
    for (std::size_t x = 0; x < nx; ++x) {
      const auto xd = detail::unflatten(x, input_cards);
      for (std::size_t y = 0; y < ny; ++y) t[x * ny + y] = f(xd, detail::unflatten(y, output_cards));
    }
    return DiscreteIC(std::move(input_cards), std::move(output_cards), std::move(t));
  }

  [[nodiscard]] std::size_t users() const { return input_cards_.size(); }
  [[nodiscard]] const std::vector<std::size_t>& input_cards() const { return input_cards_; }
  [[nodiscard]] const std::vector<std::size_t>& output_cards() const { return output_cards_; }
  [[nodiscard]] const std::vector<double>& transition() const { return transition_; }
  [[nodiscard]] std::size_t num_inputs() const { return detail::product(input_cards_); }
  [[nodiscard]] std::size_t num_outputs() const { return detail::product(output_cards_); }

  [[nodiscard]] double prob(std::size_t x_flat, std::size_t y_flat) const {
    return transition_[x_flat * num_outputs() + y_flat];
  }

  friend bool operator==(const DiscreteIC&, const DiscreteIC&) = default;

 private:
  std::vector<std::size_t> input_cards_;
  std::vector<std::size_t> output_cards_;
  std::vector<double> transition_;
};

/// Time-sharing weights P_Q plus, for each branch q, independent per-user
/// input laws P_{X_i|Q=q}.
struct ProductInput {
  std::vector<double> q_weights{1.0};
  std::vector<std::vector<std::vector<double>>> branch_dists;  // [q][user][symbol]

  [[nodiscard]] std::size_t q_card() const { return q_weights.size(); }

  void validate() const {
    detail::check_distribution(q_weights, "ProductInput q_weights");
    if (branch_dists.size() != q_weights.size()) {
      throw ArgumentError("ProductInput: branch count differs from q_weights length");
    }
    for (const auto& branch : branch_dists) {
      if (branch.size() != branch_dists.front().size()) throw ArgumentError("ProductInput: ragged branches");
      for (const auto& p : branch) detail::check_distribution(p, "ProductInput user distribution");
    }
  }

  void validate_against(const DiscreteIC& ch) const {
    validate();
    for (const auto& branch : branch_dists) {
      if (branch.size() != ch.users()) throw ArgumentError("ProductInput: user count does not match channel");
      for (std::size_t i = 0; i < branch.size(); ++i) {
        if (branch[i].size() != ch.input_cards()[i]) {
          throw ArgumentError("ProductInput: alphabet of user " + std::to_string(i + 1) + " does not match channel");
        }
      }
    }
  }

  /// Same per-user laws in every branch, |Q| = 1.
  static ProductInput single(std::vector<std::vector<double>> per_user) {
    ProductInput in;
    in.branch_dists = {std::move(per_user)};
    return in;
  }

  static ProductInput uniform(const DiscreteIC& ch) {
    std::vector<std::vector<double>> per_user;
    for (std::size_t c : ch.input_cards()) per_user.emplace_back(c, 1.0 / static_cast<double>(c));
    return single(std::move(per_user));
  }
};

/// Variable names used in assembled joints.
inline std::string x_name(std::size_t user) { return "X" + std::to_string(user + 1); }
inline std::string y_name(std::size_t receiver) { return "Y" + std::to_string(receiver + 1); }
inline const std::string kTimeSharing = "Q";

}  // namespace iccap
