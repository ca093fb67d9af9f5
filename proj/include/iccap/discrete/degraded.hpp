#pragma once

#include <cstddef>
#include <vector>

#include "iccap/core/errors.hpp"
#include "iccap/discrete/channel.hpp"

namespace iccap {

/// Row-stochastic garbling matrix: probs[in * out_card + out] = P(out | in).
struct Kernel {
  std::size_t in_card = 1;
  std::size_t out_card = 1;
  std::vector<double> probs{1.0};

  [[nodiscard]] double operator()(std::size_t in, std::size_t out) const { return probs[in * out_card + out]; }

  void validate() const {
    if (in_card == 0 || out_card == 0 || probs.size() != in_card * out_card) {
      throw ArgumentError("Kernel: dimensions do not match probability table");
    }
    for (std::size_t i = 0; i < in_card; ++i) {
      detail::check_distribution({probs.begin() + static_cast<std::ptrdiff_t>(i * out_card),
                                  probs.begin() + static_cast<std::ptrdiff_t>((i + 1) * out_card)},
                                 "Kernel row");
    }
  }

  static Kernel identity(std::size_t n) {
    Kernel k{n, n, std::vector<double>(n * n, 0.0)};
    for (std::size_t i = 0; i < n; ++i) k.probs[i * n + i] = 1.0;
    return k;
  }

  static Kernel bsc(double flip) {
    if (flip < 0.0 || flip > 1.0) throw DomainError("Kernel::bsc: crossover must lie in [0, 1]");
    return {2, 2, {1.0 - flip, flip, flip, 1.0 - flip}};
  }

  /// Output independent of input, uniform.
  static Kernel randomizing(std::size_t in, std::size_t out) {
    return {in, out, std::vector<double>(in * out, 1.0 / static_cast<double>(out))};
  }
};

/// Single-output channel P(y | x_1..x_K) feeding the first receiver.
struct FrontEnd {
  std::vector<std::size_t> input_cards;
  std::size_t output_card = 1;
  std::vector<double> probs;  // [flat(x) * output_card + y]

  /// y = x_user, all other inputs ignored.
  static FrontEnd copy_user(std::vector<std::size_t> input_cards, std::size_t user) {
    FrontEnd f{std::move(input_cards), 0, {}};
    f.output_card = f.input_cards.at(user);
    const std::size_t nx = detail::product(f.input_cards);
    f.probs.assign(nx * f.output_card, 0.0);
    for (std::size_t x = 0; x < nx; ++x) f.probs[x * f.output_card + detail::unflatten(x, f.input_cards)[user]] = 1.0;
    return f;
  }

  /// y = x_1 XOR ... XOR x_K over binary inputs.
  static FrontEnd binary_xor(std::size_t users) {
    FrontEnd f{std::vector<std::size_t>(users, 2), 2, {}};
    const std::size_t nx = detail::product(f.input_cards);
    f.probs.assign(nx * 2, 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
      std::size_t parity = 0;
      for (std::size_t d : detail::unflatten(x, f.input_cards)) parity ^= d;
      f.probs[x * 2 + parity] = 1.0;
    }
    return f;
  }
};

/// Physically degraded interference channel X -> Y_1 -> Y_2 -> ... -> Y_K:
/// P(y | x) = P_front(y_1 | x) · Π_i kernels[i](y_{i+1} | y_i).
inline DiscreteIC build_degraded_chain(const std::vector<Kernel>& kernels, const FrontEnd& front) {
  const std::size_t users = front.input_cards.size();
  if (users == 0) throw ArgumentError("build_degraded_chain: front end has no inputs");
  if (kernels.size() + 1 != users) {
    throw ArgumentError("build_degraded_chain: need exactly one kernel per receiver after the first");
  }
  if (front.probs.size() != detail::product(front.input_cards) * front.output_card) {
    throw ArgumentError("build_degraded_chain: front-end table has wrong size");
  }
  std::vector<std::size_t> out_cards{front.output_card};
  for (const auto& k : kernels) {
    k.validate();
    if (k.in_card != out_cards.back()) throw ArgumentError("build_degraded_chain: kernel dimensions do not chain");
    out_cards.push_back(k.out_card);
  }
  return DiscreteIC::from_function(front.input_cards, out_cards, [&](const auto& xd, const auto& yd) {
    double p = front.probs[detail::flatten(xd, front.input_cards) * front.output_card + yd[0]];
    for (std::size_t i = 0; i < kernels.size() && p != 0.0; ++i) p *= kernels[i](yd[i], yd[i + 1]);
    return p;
  });
}

}  // namespace iccap
