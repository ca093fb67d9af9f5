#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "iccap/discrete/channel.hpp"
#include "iccap/info/joint_dist.hpp"

namespace iccap {

/// Input-side law for assembling a channel joint: leading auxiliary
/// variables (Q, U, D, ...) jointly distributed with `joint_users`, times
/// independent marginals for every other user.
struct InputLaw {
  std::vector<Variable> aux;
  std::vector<std::size_t> joint_users;
  std::vector<double> joint;  // row-major over aux..., then joint_users in listed order
  std::vector<std::vector<double>> independent;  // indexed by user; ignored for joint users
};

/// Transition marginalized onto `receivers`: result[x_flat * |Y_sel| + y_sel_flat].
inline std::vector<double> receiver_marginal(const DiscreteIC& ch, const std::vector<std::size_t>& receivers) {
  std::vector<std::size_t> sel_cards;
  for (std::size_t r : receivers) sel_cards.push_back(ch.output_cards()[r]);
  const std::size_t ny_sel = detail::product(sel_cards);
  const std::size_t nx = ch.num_inputs();
  const std::size_t ny = ch.num_outputs();
  std::vector<double> out(nx * ny_sel, 0.0);
  std::vector<std::size_t> sel_digits(receivers.size());
  for (std::size_t y = 0; y < ny; ++y) {
    const auto yd = detail::unflatten(y, ch.output_cards());
    for (std::size_t k = 0; k < receivers.size(); ++k) sel_digits[k] = yd[receivers[k]];
    const std::size_t ys = detail::flatten(sel_digits, sel_cards);
    for (std::size_t x = 0; x < nx; ++x) out[x * ny_sel + ys] += ch.prob(x, y);
  }
  return out;
}

/// Joint over (aux..., X_1..X_K, Y_r for r in receivers) with
/// P = law(aux, x) · P(y_receivers | x). All receivers when `receivers` is empty.
inline JointDist assemble(const DiscreteIC& ch, const InputLaw& law, std::vector<std::size_t> receivers = {},
                          std::size_t max_entries = kDefaultMaxEntries) {
  const std::size_t k = ch.users();
  if (receivers.empty()) {
    for (std::size_t r = 0; r < k; ++r) receivers.push_back(r);
  }
  for (std::size_t r : receivers) {
    if (r >= k) throw ArgumentError("assemble: receiver index out of range");
  }
  std::vector<bool> in_joint(k, false);
  for (std::size_t u : law.joint_users) {
    if (u >= k || in_joint[u]) throw ArgumentError("assemble: bad joint user list");
    in_joint[u] = true;
  }
  std::vector<std::size_t> joint_cards;
  for (const auto& v : law.aux) joint_cards.push_back(v.card);
  for (std::size_t u : law.joint_users) joint_cards.push_back(ch.input_cards()[u]);
  if (law.joint.size() != detail::product(joint_cards)) throw ArgumentError("assemble: joint law has wrong size");
  for (std::size_t u = 0; u < k; ++u) {
    if (in_joint[u]) continue;
    if (u >= law.independent.size() || law.independent[u].size() != ch.input_cards()[u]) {
      throw ArgumentError("assemble: independent marginal of user " + std::to_string(u + 1) + " has wrong size");
    }
  }

  std::vector<Variable> vars = law.aux;
  for (std::size_t u = 0; u < k; ++u) vars.push_back({x_name(u), ch.input_cards()[u]});
  std::vector<std::size_t> sel_cards;
  for (std::size_t r : receivers) {
    vars.push_back({y_name(r), ch.output_cards()[r]});
    sel_cards.push_back(ch.output_cards()[r]);
  }
  const std::size_t total = JointDist::checked_size(vars, max_entries);

  const auto trans = receiver_marginal(ch, receivers);
  const std::size_t ny = detail::product(sel_cards);
  const std::size_t nx = ch.num_inputs();
  std::size_t n_aux = 1;
  for (const auto& v : law.aux) n_aux *= v.card;

  std::vector<double> probs(total, 0.0);
  std::vector<std::size_t> jd(joint_cards.size());
  for (std::size_t a = 0; a < n_aux; ++a) {
    const auto ad = detail::unflatten(a, std::vector<std::size_t>(joint_cards.begin(), joint_cards.begin() + law.aux.size()));
    std::copy(ad.begin(), ad.end(), jd.begin());
    for (std::size_t x = 0; x < nx; ++x) {
      const auto xd = detail::unflatten(x, ch.input_cards());
      double px = 1.0;
      for (std::size_t u = 0; u < k; ++u) {
        if (!in_joint[u]) px *= law.independent[u][xd[u]];
      }
      for (std::size_t j = 0; j < law.joint_users.size(); ++j) jd[law.aux.size() + j] = xd[law.joint_users[j]];
      px *= law.joint[detail::flatten(jd, joint_cards)];
      if (px == 0.0) continue;
      double* row = probs.data() + (a * nx + x) * ny;
      const double* t = trans.data() + x * ny;
      for (std::size_t y = 0; y < ny; ++y) row[y] = px * t[y];
    }
  }
  return JointDist(std::move(vars), std::move(probs), max_entries);
}

/// Single-letter joint over (Q, X_1..X_K, Y_1..Y_K):
/// P(q, x, y) = P(q) · Π P(x_i | q) · P(y | x). Q is always present (|Q| may be 1).
inline JointDist assemble_joint(const ProductInput& in, const DiscreteIC& ch,
                                std::size_t max_entries = kDefaultMaxEntries) {
  in.validate_against(ch);
  InputLaw law;
  law.aux = {{kTimeSharing, in.q_card()}};
  for (std::size_t u = 0; u < ch.users(); ++u) law.joint_users.push_back(u);
  const std::size_t nx = ch.num_inputs();
  law.joint.assign(in.q_card() * nx, 0.0);
  for (std::size_t q = 0; q < in.q_card(); ++q) {
    for (std::size_t x = 0; x < nx; ++x) {
      const auto xd = detail::unflatten(x, ch.input_cards());
      double p = in.q_weights[q];
      for (std::size_t u = 0; u < ch.users(); ++u) p *= in.branch_dists[q][u][xd[u]];
      law.joint[q * nx + x] = p;
    }
  }
  return assemble(ch, law, {}, max_entries);
}

}  // namespace iccap
