#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "iccap/core/random.hpp"
#include "iccap/discrete/conditions.hpp"

namespace iccap {

/// Which conditioned inequality to check.
enum class PreservationForm {
  Inputs,       // I(X_dec; Y_a | X_cond, D) <= I(X_dec; Y_b | X_cond, D)
  InputSubset,  // same with X_Ω (Ω ⊆ dec) moved into the conditioning
  Auxiliary,    // I(U; Y_a | X_cond, D) <= I(U; Y_b | X_cond, D)
};

inline const char* to_string(PreservationForm f) {
  switch (f) {
    case PreservationForm::Inputs: return "inputs";
    case PreservationForm::InputSubset: return "input-subset";
    case PreservationForm::Auxiliary: return "auxiliary";
  }
  return "?";
}

/// Receiver a is claimed weaker than receiver b for the decoded users given
/// the conditioned ones. decoded and conditioned partition the users.
struct PreservationSpec {
  PreservationForm form = PreservationForm::Inputs;
  std::size_t receiver_a = 1;
  std::size_t receiver_b = 0;
  std::vector<std::size_t> decoded;
  std::vector<std::size_t> conditioned;
  std::vector<std::size_t> omega;  // InputSubset only
  std::size_t d_card = 2;
  std::size_t u_card = 4;  // Auxiliary only
};

namespace detail {

inline QuantifiedInequality preservation_inequality(const PreservationSpec& spec, std::size_t users) {
  if (spec.receiver_a >= users || spec.receiver_b >= users) throw ArgumentError("PreservationSpec: receiver out of range");
  if (spec.decoded.empty()) throw ArgumentError("PreservationSpec: decoded set must be nonempty");
  if (spec.d_card == 0 || spec.u_card == 0) throw ArgumentError("PreservationSpec: alphabets must be nonempty");
  std::vector<std::size_t> all = spec.decoded;
  all.insert(all.end(), spec.conditioned.begin(), spec.conditioned.end());
  check_users(all, users, "decoded/conditioned");
  if (all.size() != users) throw ArgumentError("PreservationSpec: decoded and conditioned must cover every user");
  QuantifiedInequality q;
  q.id = std::string("preserve[") + to_string(spec.form) + "]";
  q.lhs = {spec.receiver_a};
  q.rhs = {{spec.receiver_b}};
  q.given = spec.conditioned;
  switch (spec.form) {
    case PreservationForm::Inputs:
      if (!spec.omega.empty()) throw ArgumentError("PreservationSpec: omega only applies to the input-subset form");
      q.decoded = spec.decoded;
      break;
    case PreservationForm::InputSubset:
      for (std::size_t u : spec.omega) {
        if (std::find(spec.decoded.begin(), spec.decoded.end(), u) == spec.decoded.end()) {
          throw ArgumentError("PreservationSpec: omega must be a subset of the decoded users");
        }
      }
      for (std::size_t u : spec.decoded) {
        if (std::find(spec.omega.begin(), spec.omega.end(), u) == spec.omega.end()) q.decoded.push_back(u);
      }
      q.given.insert(q.given.end(), spec.omega.begin(), spec.omega.end());
      break;
    case PreservationForm::Auxiliary:
      if (!spec.omega.empty()) throw ArgumentError("PreservationSpec: omega only applies to the input-subset form");
      q.has_u = true;
      break;
  }
  q.dependent = iota_range(0, users);
  return q;
}

}  // namespace detail

/// Samples joint PDFs of (D, U?, X_1..X_K) with no constraint beyond
/// D, U → X → Y and returns the first sample whose conditioned inequality
/// is violated by more than the slack. Sample s uses stream rng.split(s).
inline std::optional<Counterexample> conditioning_preservation_check(const DiscreteIC& ch, const PreservationSpec& spec,
                                                                     std::size_t samples, const Rng& rng) {
  if (samples == 0) throw ArgumentError("conditioning_preservation_check: samples must be at least 1");
  const auto q = detail::preservation_inequality(spec, ch.users());
  std::size_t joint_size = spec.d_card;
  if (q.has_u) joint_size *= spec.u_card;
  for (std::size_t c : ch.input_cards()) joint_size *= c;
  for (std::size_t s = 0; s < samples; ++s) {
    Rng sub = rng.split(s);
    InputLaw law;
    law.aux.push_back({"D", spec.d_card});
    if (q.has_u) law.aux.push_back({"U", spec.u_card});
    law.joint_users = q.dependent;
    law.joint = s % 2 == 1 ? sample_simplex_sharp(joint_size, sub) : sample_simplex(joint_size, sub);
    law.independent.resize(ch.users());
    const auto joint = assemble(ch, law, detail::receivers_of(q));
    const double margin = inequality_margin(joint, q, VarSet{"D"});
    if (margin > kViolationSlack) return Counterexample{q.id, margin, s, std::move(law)};
  }
  return std::nullopt;
}

}  // namespace iccap
