#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "iccap/core/random.hpp"
#include "iccap/discrete/channel.hpp"
#include "iccap/discrete/expression.hpp"
#include "iccap/info/assemble.hpp"
#include "iccap/info/joint_dist.hpp"

namespace iccap {

/// Block code of length n: per user a list of codewords, each message
/// uniform over the list (repeated codewords allowed).
struct RandomCode {
  std::size_t n = 1;
  std::vector<std::vector<std::vector<std::size_t>>> codebooks;  // [user][codeword][time]

  void validate_against(const DiscreteIC& ch) const {
    if (n == 0) throw ArgumentError("RandomCode: blocklength must be at least 1");
    if (codebooks.size() != ch.users()) throw ArgumentError("RandomCode: need one codebook per user");
    for (std::size_t u = 0; u < ch.users(); ++u) {
      if (codebooks[u].empty()) throw ArgumentError("RandomCode: empty codebook for user " + std::to_string(u + 1));
      for (const auto& w : codebooks[u]) {
        if (w.size() != n) throw ArgumentError("RandomCode: codeword length differs from n");
        for (std::size_t s : w) {
          if (s >= ch.input_cards()[u]) throw ArgumentError("RandomCode: symbol outside the input alphabet");
        }
      }
    }
  }

  /// Codewords drawn i.i.d. uniform over each input alphabet.
  static RandomCode random(const DiscreteIC& ch, std::size_t n, std::size_t codewords, Rng& rng) {
    RandomCode c;
    c.n = n;
    c.codebooks.resize(ch.users());
    for (std::size_t u = 0; u < ch.users(); ++u) {
      for (std::size_t m = 0; m < codewords; ++m) {
        std::vector<std::size_t> w(n);
        for (auto& s : w) s = rng.index(ch.input_cards()[u]);
        c.codebooks[u].push_back(std::move(w));
      }
    }
    return c;
  }
};

namespace detail {

inline std::string block_name(const std::string& base) { return base + "^n"; }

inline std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

inline VarSet block_set(const std::vector<std::size_t>& users) {
  std::vector<std::string> names;
  for (std::size_t u : users) names.push_back(block_name(x_name(u)));
  return VarSet(names);
}

}  // namespace detail

/// n-letter joint over (X_1^n, ..., X_K^n, Y_r^n for r in receivers) induced
/// by the code and the memoryless channel.
inline JointDist code_joint(const DiscreteIC& ch, const RandomCode& code, const std::vector<std::size_t>& receivers,
                            std::size_t max_entries = kDefaultMaxEntries) {
  code.validate_against(ch);
  const std::size_t k = ch.users();
  const std::size_t n = code.n;
  std::vector<Variable> vars;
  std::vector<std::size_t> block_cards;
  for (std::size_t u = 0; u < k; ++u) {
    block_cards.push_back(detail::ipow(ch.input_cards()[u], n));
    vars.push_back({detail::block_name(x_name(u)), block_cards.back()});
  }
  std::vector<std::size_t> sel_cards;
  for (std::size_t r : receivers) {
    if (r >= k) throw ArgumentError("code_joint: receiver out of range");
    sel_cards.push_back(ch.output_cards()[r]);
    vars.push_back({detail::block_name(y_name(r)), detail::ipow(ch.output_cards()[r], n)});
  }
  const std::size_t total = JointDist::checked_size(vars, max_entries);

  const auto trans = receiver_marginal(ch, receivers);
  const std::size_t ny = detail::product(sel_cards);   // one time step, all selected receivers
  const std::size_t ny_block = detail::ipow(ny, n);    // all time steps

  // Output block index: receivers outer, time inner within each receiver.
  std::vector<std::size_t> out_cards;
  for (std::size_t c : sel_cards) out_cards.push_back(detail::ipow(c, n));

  std::vector<std::size_t> sizes;
  for (const auto& b : code.codebooks) sizes.push_back(b.size());
  const std::size_t n_msgs = detail::product(sizes);
  std::vector<double> probs(total, 0.0);
  std::vector<std::size_t> x_t(k);
  std::vector<std::size_t> block_digits(k);
  std::vector<std::size_t> out_digits(receivers.size());
  for (std::size_t m = 0; m < n_msgs; ++m) {
    const auto md = detail::unflatten(m, sizes);
    double pm = 1.0;
    for (std::size_t u = 0; u < k; ++u) {
      pm /= static_cast<double>(sizes[u]);
      block_digits[u] = detail::flatten(code.codebooks[u][md[u]], std::vector<std::size_t>(n, ch.input_cards()[u]));
    }
    const std::size_t xb = detail::flatten(block_digits, block_cards);
    for (std::size_t yseq = 0; yseq < ny_block; ++yseq) {
      const auto per_time = detail::unflatten(yseq, std::vector<std::size_t>(n, ny));
      double p = pm;
      std::fill(out_digits.begin(), out_digits.end(), 0);
      for (std::size_t t = 0; t < n && p > 0.0; ++t) {
        for (std::size_t u = 0; u < k; ++u) x_t[u] = code.codebooks[u][md[u]][t];
        p *= trans[detail::flatten(x_t, ch.input_cards()) * ny + per_time[t]];
        const auto yd = detail::unflatten(per_time[t], sel_cards);
        for (std::size_t r = 0; r < receivers.size(); ++r) out_digits[r] = out_digits[r] * sel_cards[r] + yd[r];
      }
      if (p == 0.0) continue;
      probs[xb * ny_block + detail::flatten(out_digits, out_cards)] += p;
    }
  }
  return JointDist(std::move(vars), std::move(probs), max_entries);
}

/// I(X_Ω1^n; Y_a^n | X_Ω2^n) − I(X_Ω1^n; Y_b^n | X_Ω2^n) under the code.
/// When the single-letter condition for (Ω1, Ω2, a, b) holds, this is <= 0.
inline double nletter_inequality_check(const DiscreteIC& ch, const RandomCode& code, const std::vector<std::size_t>& omega1,
                                       const std::vector<std::size_t>& omega2, std::size_t a, std::size_t b,
                                       std::size_t max_entries = kDefaultMaxEntries) {
  if (a >= ch.users() || b >= ch.users()) throw ArgumentError("nletter_inequality_check: receiver out of range");
  if (a == b) return 0.0;
  const auto joint = code_joint(ch, code, {a, b}, max_entries);
  const VarSet src = detail::block_set(omega1);
  const VarSet given = detail::block_set(omega2);
  const double lhs = conditional_mi(joint, src, VarSet{detail::block_name(y_name(a))}, given);
  const double rhs = conditional_mi(joint, src, VarSet{detail::block_name(y_name(b))}, given);
  return lhs - rhs;
}

}  // namespace iccap
