#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "iccap/core/errors.hpp"

namespace iccap {

/// ψ(x) = ½·log₂(1 + x), the Gaussian point-to-point capacity in bits.
inline double psi(double x) {
  if (!(x >= 0.0)) throw DomainError("psi: argument must be nonnegative");
  return 0.5 * std::log1p(x) / std::numbers::ln2;
}

/// Real Gaussian interference channel Y = A·X + Z with unit-variance noise
/// at every receiver. gain(j, i) is the gain from transmitter i into
/// receiver j (0-based).
class GaussianIC {
 public:
  GaussianIC(std::vector<std::vector<double>> gains, std::vector<double> powers) : powers_(std::move(powers)) {
    const std::size_t k = powers_.size();
    if (k < 2) throw ArgumentError("GaussianIC: at least two users required");
    if (gains.size() != k) throw ArgumentError("GaussianIC: gain matrix must be K x K");
    gains_.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t j = 0; j < k; ++j) {
      if (gains[j].size() != k) throw ArgumentError("GaussianIC: gain matrix must be K x K");
      for (std::size_t i = 0; i < k; ++i) {
        if (!std::isfinite(gains[j][i])) throw ArgumentError("GaussianIC: gains must be finite");
        gains_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = gains[j][i];
      }
    }
    for (double p : powers_) {
      if (!(p >= 0.0) || !std::isfinite(p)) throw ArgumentError("GaussianIC: powers must be finite and nonnegative");
    }
  }

  [[nodiscard]] std::size_t users() const { return powers_.size(); }
  [[nodiscard]] double gain(std::size_t j, std::size_t i) const {
    return gains_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
  }
  [[nodiscard]] double power(std::size_t i) const { return powers_[i]; }
  [[nodiscard]] const std::vector<double>& powers() const { return powers_; }
  [[nodiscard]] const Eigen::MatrixXd& gain_matrix() const { return gains_; }

  [[nodiscard]] std::vector<std::vector<double>> gains() const {
    std::vector<std::vector<double>> g(users(), std::vector<double>(users()));
    for (std::size_t j = 0; j < users(); ++j) {
      for (std::size_t i = 0; i < users(); ++i) g[j][i] = gain(j, i);
    }
    return g;
  }

  /// Received power a_ji² P_i of transmitter i at receiver j.
  [[nodiscard]] double received(std::size_t j, std::size_t i) const {
    const double a = gain(j, i);
    return a * a * powers_[i];
  }

  [[nodiscard]] bool is_normalized(double tol = 1e-12) const {
    for (std::size_t i = 0; i < users(); ++i) {
      if (std::abs(gain(i, i) - 1.0) > tol) return false;
    }
    return true;
  }

  friend bool operator==(const GaussianIC& a, const GaussianIC& b) {
    return a.powers_ == b.powers_ && a.gains_ == b.gains_;
  }

 private:
  Eigen::MatrixXd gains_;
  std::vector<double> powers_;
};

/// Rescales each transmitter so the direct gains become 1: X_i' = a_ii X_i,
/// P_i' = a_ii² P_i, a'_ji = a_ji / a_ii. Every received power a_ji² P_i,
/// and hence every mutual information, is unchanged.
inline GaussianIC normalize(const GaussianIC& ch) {
  auto g = ch.gains();
  auto p = ch.powers();
  for (std::size_t i = 0; i < ch.users(); ++i) {
    const double d = ch.gain(i, i);
    if (d == 0.0) throw DegenerateChannelError("normalize: direct gain of user " + std::to_string(i + 1) + " is zero");
    for (std::size_t j = 0; j < ch.users(); ++j) g[j][i] = (i == j) ? 1.0 : g[j][i] / d;
    p[i] *= d * d;
  }
  return GaussianIC(std::move(g), std::move(p));
}

namespace detail {

inline void check_user_sets(const GaussianIC& ch, const std::vector<std::size_t>& s, const std::vector<std::size_t>& t) {
  std::vector<int> mark(ch.users(), 0);
  for (std::size_t u : s) {
    if (u >= ch.users()) throw ArgumentError("gaussian_cmi: user index out of range");
    if (mark[u]++) throw ArgumentError("gaussian_cmi: duplicate user");
  }
  for (std::size_t u : t) {
    if (u >= ch.users()) throw ArgumentError("gaussian_cmi: user index out of range");
    if (mark[u]++) throw ArgumentError("gaussian_cmi: decoded and known sets overlap");
  }
}

}  // namespace detail

/// I(X_S; Y_j | X_T) for independent full-power Gaussian inputs:
/// ψ(Σ_{i∈S} a_ji² P_i / (1 + Σ_{i∉S∪T} a_ji² P_i)).
inline double gaussian_cmi(const GaussianIC& ch, const std::vector<std::size_t>& decoded,
                           const std::vector<std::size_t>& known, std::size_t receiver) {
  detail::check_user_sets(ch, decoded, known);
  if (receiver >= ch.users()) throw ArgumentError("gaussian_cmi: receiver index out of range");
  std::vector<bool> in_s(ch.users(), false);
  std::vector<bool> in_t(ch.users(), false);
  for (std::size_t u : decoded) in_s[u] = true;
  for (std::size_t u : known) in_t[u] = true;
  double signal = 0.0;
  double noise = 1.0;
  for (std::size_t i = 0; i < ch.users(); ++i) {
    if (in_s[i]) {
      signal += ch.received(receiver, i);
    } else if (!in_t[i]) {
      noise += ch.received(receiver, i);
    }
  }
  return psi(signal / noise);
}

/// I(X_S; (Y_r)_{r∈R} | X_T) for independent full-power Gaussian inputs and
/// independent unit noises: ½log₂ det(I + H_{S∪N} P H_{S∪N}ᵀ) − ½log₂ det(I + H_N P H_Nᵀ),
/// N being the users outside S ∪ T.
inline double gaussian_group_cmi(const GaussianIC& ch, const std::vector<std::size_t>& decoded,
                                 const std::vector<std::size_t>& known, const std::vector<std::size_t>& receivers) {
  detail::check_user_sets(ch, decoded, known);
  if (receivers.empty()) throw ArgumentError("gaussian_group_cmi: no receivers");
  if (receivers.size() == 1) return gaussian_cmi(ch, decoded, known, receivers.front());
  std::vector<bool> in_s(ch.users(), false);
  std::vector<bool> in_t(ch.users(), false);
  for (std::size_t u : decoded) in_s[u] = true;
  for (std::size_t u : known) in_t[u] = true;
  const auto r = static_cast<Eigen::Index>(receivers.size());
  Eigen::MatrixXd with_signal = Eigen::MatrixXd::Identity(r, r);
  Eigen::MatrixXd noise_only = Eigen::MatrixXd::Identity(r, r);
  for (std::size_t i = 0; i < ch.users(); ++i) {
    if (in_t[i]) continue;
    Eigen::VectorXd h(r);
    for (Eigen::Index k = 0; k < r; ++k) {
      if (receivers[static_cast<std::size_t>(k)] >= ch.users()) throw ArgumentError("gaussian_group_cmi: receiver out of range");
      h(k) = ch.gain(receivers[static_cast<std::size_t>(k)], i);
    }
    const Eigen::MatrixXd contrib = ch.power(i) * h * h.transpose();
    with_signal += contrib;
    if (!in_s[i]) noise_only += contrib;
  }
  const double v = 0.5 * (std::log2(with_signal.determinant()) - std::log2(noise_only.determinant()));
  return v < 0.0 ? 0.0 : v;
}

}  // namespace iccap
