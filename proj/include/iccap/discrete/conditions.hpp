#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "iccap/core/random.hpp"
#include "iccap/discrete/expression.hpp"
#include "iccap/info/assemble.hpp"
#include "iccap/info/simplex.hpp"

namespace iccap {

/// Violations smaller than this are floating-point noise.
inline constexpr double kViolationSlack = 1e-9;

enum class ConditionKind {
  LessNoisyPerUser,    // I(U;Y_i|X_i..X_K) <= I(U;Y_{i-1}|X_i..X_K)
  ChainLessNoisy,      // I(U;Y_i|X_{i+1}..X_K) <= min_{j<i} I(U;Y_j|X_{i+1}..X_K)
  SetLessNoisy,        // I(U,X_Ω1;Y_a|X_Ω2) <= I(U,X_Ω1;Y_b|X_Ω2)
  Theorem3Conditions,  // permutation/cut conditions of the grouped bound
  Theorem4Conditions,  // receiver-group conditions
  ManyToOne,           // I(U;Y_K|X_K) <= I(U;Y_1..Y_{K-1}|X_K)
  TwoUserMixed,        // mixed-regime pair for K = 2
};

inline const char* to_string(ConditionKind k) {
  switch (k) {
    case ConditionKind::LessNoisyPerUser: return "less-noisy-per-user";
    case ConditionKind::ChainLessNoisy: return "chain-less-noisy";
    case ConditionKind::SetLessNoisy: return "set-less-noisy";
    case ConditionKind::Theorem3Conditions: return "theorem3";
    case ConditionKind::Theorem4Conditions: return "theorem4";
    case ConditionKind::ManyToOne: return "many-to-one";
    case ConditionKind::TwoUserMixed: return "two-user-mixed";
  }
  return "?";
}

/// A universally quantified less-noisy condition on a channel. All indices
/// are 0-based.
struct ConditionSpec {
  ConditionKind kind = ConditionKind::LessNoisyPerUser;
  std::size_t receiver_a = 0;  // SetLessNoisy: the receiver claimed weaker
  std::size_t receiver_b = 1;  // SetLessNoisy: the receiver claimed stronger
  std::vector<std::size_t> omega1;
  std::vector<std::size_t> omega2;
  Theorem3Structure theorem3;
  Theorem4Structure theorem4;
  /// Alphabet of U; defaults to the product of the alphabets U is jointly
  /// distributed with.
  std::optional<std::size_t> u_card;
};

/// One quantified inequality:
///   I(U?, X_decoded; Y_lhs | X_given) <= min_k I(U?, X_decoded; Y_rhs[k] | X_given)
/// for all PDFs P_{U?, X_dependent} · Π_{independent} P_{X_i}.
struct QuantifiedInequality {
  std::string id;
  bool has_u = false;
  std::vector<std::size_t> dependent;
  std::vector<std::size_t> independent;
  std::vector<std::size_t> decoded;
  std::vector<std::size_t> given;
  std::vector<std::size_t> lhs;
  std::vector<std::vector<std::size_t>> rhs;
};

namespace detail {

inline std::vector<std::size_t> complement(const std::vector<std::size_t>& set, std::size_t users) {
  std::vector<std::size_t> out;
  for (std::size_t u = 0; u < users; ++u) {
    if (std::find(set.begin(), set.end(), u) == set.end()) out.push_back(u);
  }
  return out;
}

inline std::vector<std::size_t> iota_range(std::size_t first, std::size_t last) {
  std::vector<std::size_t> out;
  for (std::size_t u = first; u < last; ++u) out.push_back(u);
  return out;
}

inline std::vector<std::size_t> slice(const std::vector<std::size_t>& v, std::size_t first, std::size_t last) {
  return {v.begin() + static_cast<std::ptrdiff_t>(first), v.begin() + static_cast<std::ptrdiff_t>(last)};
}

inline std::vector<std::size_t> sorted(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  return v;
}

inline QuantifiedInequality with_u(std::string id, std::vector<std::size_t> given, std::size_t users,
                                   std::vector<std::size_t> lhs, std::vector<std::vector<std::size_t>> rhs,
                                   std::vector<std::size_t> decoded = {}) {
  QuantifiedInequality q;
  q.id = std::move(id);
  q.has_u = true;
  q.dependent = complement(given, users);
  q.independent = sorted(given);
  q.decoded = std::move(decoded);
  q.given = std::move(given);
  q.lhs = std::move(lhs);
  q.rhs = std::move(rhs);
  return q;
}

inline void check_users(const std::vector<std::size_t>& v, std::size_t users, const char* what) {
  std::vector<bool> seen(users, false);
  for (std::size_t u : v) {
    if (u >= users) throw ArgumentError(std::string("ConditionSpec: ") + what + " index out of range");
    if (seen[u]) throw ArgumentError(std::string("ConditionSpec: ") + what + " has duplicates");
    seen[u] = true;
  }
}

}  // namespace detail

/// Expands a spec into its list of quantified inequalities.
inline std::vector<QuantifiedInequality> expand(const ConditionSpec& spec, std::size_t users) {
  using detail::iota_range;
  using detail::slice;
  std::vector<QuantifiedInequality> out;
  switch (spec.kind) {
    case ConditionKind::LessNoisyPerUser:
      for (std::size_t i = 1; i < users; ++i) {
        out.push_back(detail::with_u("per-user[i=" + std::to_string(i + 1) + "]", iota_range(i, users), users, {i}, {{i - 1}}));
      }
      break;
    case ConditionKind::ChainLessNoisy:
      // i = 1 is vacuous (empty min).
      for (std::size_t i = 1; i < users; ++i) {
        std::vector<std::vector<std::size_t>> rhs;
        for (std::size_t j = 0; j < i; ++j) rhs.push_back({j});
        out.push_back(detail::with_u("chain[i=" + std::to_string(i + 1) + "]", iota_range(i + 1, users), users, {i}, rhs));
      }
      break;
    case ConditionKind::SetLessNoisy: {
      detail::check_users(spec.omega1, users, "omega1");
      detail::check_users(spec.omega2, users, "omega2");
      if (spec.receiver_a >= users || spec.receiver_b >= users) {
        throw ArgumentError("ConditionSpec: receiver index out of range");
      }
      for (std::size_t u : spec.omega1) {
        if (std::find(spec.omega2.begin(), spec.omega2.end(), u) != spec.omega2.end()) {
          throw ArgumentError("ConditionSpec: omega1 and omega2 overlap");
        }
      }
      auto q = detail::with_u("set[a=" + std::to_string(spec.receiver_a + 1) + ",b=" + std::to_string(spec.receiver_b + 1) + "]",
                              spec.omega2, users, {spec.receiver_a}, {{spec.receiver_b}}, spec.omega1);
      if (detail::sorted(spec.omega1) == detail::complement(spec.omega2, users)) {
        // U drops out and every input is independent.
        q.has_u = false;
        q.dependent.clear();
        q.independent = iota_range(0, users);
      }
      out.push_back(std::move(q));
      break;
    }
    case ConditionKind::Theorem3Conditions: {
      const auto& s = spec.theorem3;
      validate(s, users);
      const auto& perm = s.perm;
      const std::size_t i1 = s.cuts.front();
      for (std::size_t w = 1; w < i1; ++w) {
        QuantifiedInequality q;
        q.id = "first-group[w=" + std::to_string(w) + "]";
        q.dependent = slice(perm, 0, w);
        q.decoded = slice(perm, 0, w);
        q.given = slice(perm, w, users);
        q.independent = detail::sorted(q.given);
        q.lhs = {perm[w - 1]};
        q.rhs = {{perm[w]}};
        out.push_back(std::move(q));
      }
      for (std::size_t th = 0; th + 1 < s.cuts.size(); ++th) {
        const std::size_t it = s.cuts[th];
        for (std::size_t w = 1; it + w < s.cuts[th + 1]; ++w) {
          out.push_back(detail::with_u("in-group[theta=" + std::to_string(th + 1) + ",w=" + std::to_string(w) + "]",
                                       slice(perm, it + w, users), users, {perm[it + w - 1]}, {{perm[it + w]}},
                                       slice(perm, it, it + w)));
        }
      }
      for (std::size_t th = 1; th < s.cuts.size(); ++th) {
        out.push_back(detail::with_u("across-groups[theta=" + std::to_string(th + 1) + "]", slice(perm, s.cuts[th - 1], users), users,
                                     {perm[s.cuts[th] - 1]}, {{perm[s.cuts[th - 1] - 1]}}));
      }
      break;
    }
    case ConditionKind::Theorem4Conditions: {
      const auto& g = spec.theorem4.groups;
      validate(spec.theorem4, users);
      for (std::size_t i = 1; i < g.size(); ++i) {
        std::vector<std::size_t> given;
        for (std::size_t h = i; h < g.size(); ++h) given.insert(given.end(), g[h].begin(), g[h].end());
        out.push_back(detail::with_u("receiver-group[i=" + std::to_string(i + 1) + "]", given, users, g[i], {g[i - 1]}));
      }
      break;
    }
    case ConditionKind::ManyToOne: {
      if (users < 2) throw ArgumentError("ConditionSpec: many-to-one needs at least two users");
      out.push_back(detail::with_u("many-to-one", {users - 1}, users, {users - 1}, {iota_range(0, users - 1)}));
      break;
    }
    case ConditionKind::TwoUserMixed: {
      if (users != 2) throw ArgumentError("ConditionSpec: two-user mixed conditions need K = 2");
      QuantifiedInequality strong;
      strong.id = "mixed-strong";
      strong.independent = {0, 1};
      strong.decoded = {1};
      strong.given = {0};
      strong.lhs = {1};
      strong.rhs = {{0}};
      out.push_back(std::move(strong));
      out.push_back(detail::with_u("mixed-weak", {1}, users, {1}, {{0}}));
      break;
    }
  }
  return out;
}

/// A sampled PDF violating one quantified inequality.
struct Counterexample {
  std::string inequality_id;
  double margin = 0.0;  // LHS − min RHS, > slack
  std::size_t sample_index = 0;
  InputLaw law;
};

namespace detail {

inline std::size_t default_u_card(const DiscreteIC& ch, const std::vector<std::size_t>& dependent) {
  std::size_t c = 1;
  for (std::size_t u : dependent) c *= ch.input_cards()[u];
  return c;
}

/// Random PDF of the factorization `q` quantifies over. Odd samples are
/// biased toward the faces of the simplex, where extremal MI values live.
inline InputLaw sample_law(const DiscreteIC& ch, const QuantifiedInequality& q, std::optional<std::size_t> u_card,
                           Rng& rng, bool sharp) {
  InputLaw law;
  std::size_t joint_size = 1;
  if (q.has_u) {
    const std::size_t uc = u_card.value_or(default_u_card(ch, q.dependent));
    law.aux.push_back({"U", uc});
    joint_size *= uc;
  }
  law.joint_users = q.dependent;
  for (std::size_t u : q.dependent) joint_size *= ch.input_cards()[u];
  law.joint = sharp ? sample_simplex_sharp(joint_size, rng) : sample_simplex(joint_size, rng);
  law.independent.resize(ch.users());
  for (std::size_t u : q.independent) {
    law.independent[u] = sharp ? sample_simplex_sharp(ch.input_cards()[u], rng) : sample_simplex(ch.input_cards()[u], rng);
  }
  return law;
}

inline std::vector<std::size_t> receivers_of(const QuantifiedInequality& q) {
  std::vector<std::size_t> r = q.lhs;
  for (const auto& v : q.rhs) r.insert(r.end(), v.begin(), v.end());
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

}  // namespace detail

/// LHS − min RHS of `q` on a joint that carries U (when used), the inputs
/// and the receivers `q` mentions.
inline double inequality_margin(const JointDist& joint, const QuantifiedInequality& q, const VarSet& extra_given = {}) {
  VarSet source = detail::x_set(q.decoded);
  if (q.has_u) source = VarSet{"U"} + source;
  const VarSet given = detail::x_set(q.given) + extra_given;
  const double lhs = conditional_mi(joint, source, detail::y_set(q.lhs), given);
  double rhs = std::numeric_limits<double>::infinity();
  for (const auto& r : q.rhs) rhs = std::min(rhs, conditional_mi(joint, source, detail::y_set(r), given));
  return lhs - rhs;
}

/// Draws `samples` PDFs per quantified inequality and returns the first one
/// whose LHS exceeds the RHS by more than the slack. Absence is evidence,
/// not proof. Sample s, inequality k uses stream rng.split(s * count + k).
inline std::optional<Counterexample> falsify_condition(const DiscreteIC& ch, const ConditionSpec& spec,
                                                       std::size_t samples, const Rng& rng) {
  if (samples == 0) throw ArgumentError("falsify_condition: samples must be at least 1");
  if (spec.u_card && *spec.u_card == 0) throw ArgumentError("falsify_condition: u_card must be at least 1");
  const auto ineqs = expand(spec, ch.users());
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t k = 0; k < ineqs.size(); ++k) {
      Rng sub = rng.split(s * ineqs.size() + k);
      auto law = detail::sample_law(ch, ineqs[k], spec.u_card, sub, s % 2 == 1);
      const auto joint = assemble(ch, law, detail::receivers_of(ineqs[k]));
      const double margin = inequality_margin(joint, ineqs[k]);
      if (margin > kViolationSlack) return Counterexample{ineqs[k].id, margin, s, std::move(law)};
    }
  }
  return std::nullopt;
}

/// Condition family that makes a bound structure valid.
inline ConditionSpec conditions_for(const BoundStructure& s) {
  ConditionSpec spec;
  if (std::holds_alternative<Theorem1Structure>(s)) {
    spec.kind = ConditionKind::LessNoisyPerUser;
  } else if (const auto* t3 = std::get_if<Theorem3Structure>(&s)) {
    spec.kind = ConditionKind::Theorem3Conditions;
    spec.theorem3 = *t3;
  } else {
    spec.kind = ConditionKind::Theorem4Conditions;
    spec.theorem4 = std::get<Theorem4Structure>(s);
  }
  return spec;
}

}  // namespace iccap
