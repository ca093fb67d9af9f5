#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "iccap/core/errors.hpp"
#include "iccap/decode_order.hpp"
#include "iccap/discrete/channel.hpp"
#include "iccap/info/assemble.hpp"
#include "iccap/info/joint_dist.hpp"

namespace iccap {

/// I(X_decoded; Y_receivers | X_given, Q), 0-based indices.
struct MiTerm {
  std::vector<std::size_t> decoded;
  std::vector<std::size_t> receivers;
  std::vector<std::size_t> given;
};

/// min over alternatives of (sum of terms). A single alternative is a
/// sum-type objective.
struct Expression {
  std::string id;
  std::vector<std::vector<MiTerm>> alternatives;

  [[nodiscard]] bool is_min() const { return alternatives.size() > 1; }

  void validate(std::size_t users) const {
    if (alternatives.empty()) throw ArgumentError("Expression '" + id + "': no alternatives");
    for (const auto& alt : alternatives) {
      for (const auto& t : alt) {
        std::vector<bool> used(users, false);
        for (std::size_t u : t.decoded) {
          if (u >= users) throw ArgumentError("Expression '" + id + "': user index out of range");
          if (used[u]) throw ArgumentError("Expression '" + id + "': decoded and given sets overlap");
          used[u] = true;
        }
        for (std::size_t u : t.given) {
          if (u >= users) throw ArgumentError("Expression '" + id + "': user index out of range");
          if (used[u]) throw ArgumentError("Expression '" + id + "': decoded and given sets overlap");
          used[u] = true;
        }
        if (t.receivers.empty()) throw ArgumentError("Expression '" + id + "': term without receivers");
        for (std::size_t r : t.receivers) {
          if (r >= users) throw ArgumentError("Expression '" + id + "': receiver index out of range");
        }
      }
    }
  }
};

// Bound structures -----------------------------------------------------------

/// Per-user nested chain: Σ_i I(X_i; Y_i | X_{i+1..K}).
struct Theorem1Structure {};

/// Permutation of users (0-based) plus strictly increasing cut points
/// 1 <= i_1 < ... < i_mu = K (prefix lengths).
struct Theorem3Structure {
  std::vector<std::size_t> perm;
  std::vector<std::size_t> cuts;
};

/// Partition of the receivers into groups (0-based).
struct Theorem4Structure {
  std::vector<std::vector<std::size_t>> groups;
};

using BoundStructure = std::variant<Theorem1Structure, Theorem3Structure, Theorem4Structure>;

inline void validate_permutation(const std::vector<std::size_t>& perm, std::size_t users) {
  if (perm.size() != users) throw ArgumentError("permutation must list every user exactly once");
  std::vector<bool> seen(users, false);
  for (std::size_t u : perm) {
    if (u >= users || seen[u]) throw ArgumentError("permutation must list every user exactly once");
    seen[u] = true;
  }
}

inline void validate(const Theorem3Structure& s, std::size_t users) {
  validate_permutation(s.perm, users);
  if (s.cuts.empty()) throw ArgumentError("cut list must be nonempty");
  if (s.cuts.front() < 1) throw ArgumentError("cut points must start at 1 or later");
  for (std::size_t i = 1; i < s.cuts.size(); ++i) {
    if (s.cuts[i] <= s.cuts[i - 1]) throw ArgumentError("cut points must be strictly increasing");
  }
  if (s.cuts.back() != users) throw ArgumentError("last cut point must equal the number of users");
}

inline void validate(const Theorem4Structure& s, std::size_t users) {
  if (s.groups.empty()) throw ArgumentError("grouping must have at least one group");
  std::vector<bool> seen(users, false);
  for (const auto& g : s.groups) {
    if (g.empty()) throw ArgumentError("groups must be nonempty");
    for (std::size_t r : g) {
      if (r >= users) throw ArgumentError("group member out of range");
      if (seen[r]) throw ArgumentError("groups must be pairwise disjoint");
      seen[r] = true;
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw ArgumentError("groups must cover every receiver");
  }
}

/// The groups of a Theorem-3 structure: group θ holds perm[i_{θ-1}..i_θ-1]
/// and is measured at receiver perm[i_θ - 1].
struct CutGroup {
  std::vector<std::size_t> users;
  std::size_t receiver;
};

inline std::vector<CutGroup> cut_groups(const Theorem3Structure& s) {
  std::vector<CutGroup> out;
  std::size_t start = 0;
  for (std::size_t cut : s.cuts) {
    CutGroup g;
    g.users.assign(s.perm.begin() + static_cast<std::ptrdiff_t>(start), s.perm.begin() + static_cast<std::ptrdiff_t>(cut));
    g.receiver = s.perm[cut - 1];
    out.push_back(std::move(g));
    start = cut;
  }
  return out;
}

inline Theorem3Structure as_theorem3(const Theorem1Structure&, std::size_t users) {
  Theorem3Structure s;
  for (std::size_t u = 0; u < users; ++u) {
    s.perm.push_back(u);
    s.cuts.push_back(u + 1);
  }
  return s;
}

namespace expressions {

inline Expression theorem3(std::size_t users, const Theorem3Structure& s) {
  validate(s, users);
  Expression e{"cut", {{}}};
  const auto groups = cut_groups(s);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    MiTerm t{groups[g].users, {groups[g].receiver}, {}};
    for (std::size_t h = g + 1; h < groups.size(); ++h) {
      t.given.insert(t.given.end(), groups[h].users.begin(), groups[h].users.end());
    }
    e.alternatives[0].push_back(std::move(t));
  }
  return e;
}

inline Expression theorem1(std::size_t users) {
  auto e = theorem3(users, as_theorem3(Theorem1Structure{}, users));
  e.id = "nested";
  return e;
}

/// Σ_g I(X_G(g); Y_G(g) | X_G(g+1..)), where X_G holds the users whose
/// receivers are in group g.
inline Expression theorem4(std::size_t users, const Theorem4Structure& s) {
  validate(s, users);
  Expression e{"grouped", {{}}};
  for (std::size_t g = 0; g < s.groups.size(); ++g) {
    MiTerm t{s.groups[g], s.groups[g], {}};
    for (std::size_t h = g + 1; h < s.groups.size(); ++h) {
      t.given.insert(t.given.end(), s.groups[h].begin(), s.groups[h].end());
    }
    e.alternatives[0].push_back(std::move(t));
  }
  return e;
}

inline Expression for_structure(std::size_t users, const BoundStructure& s) {
  return std::visit(
      [&](const auto& v) -> Expression {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Theorem1Structure>) {
          return theorem1(users);
        } else if constexpr (std::is_same_v<T, Theorem3Structure>) {
          return theorem3(users, v);
        } else {
          return theorem4(users, v);
        }
      },
      s);
}

/// Treating interference as noise: Σ_i I(X_i; Y_i).
inline Expression tin(std::size_t users) {
  Expression e{"tin", {{}}};
  for (std::size_t u = 0; u < users; ++u) e.alternatives[0].push_back({{u}, {u}, {}});
  return e;
}

/// Successive decoding sum rate: each user's rate is capped by its decoding
/// constraint at every receiver that decodes it, so the sum rate is the min
/// over every choice of one constraint per user.
inline Expression successive_decoding(const DecodeOrder& order, std::size_t users) {
  const auto by_user = decode_constraints(order, users);
  Expression e{"sd", {}};
  std::vector<std::size_t> pick(users, 0);
  while (true) {
    std::vector<MiTerm> alt;
    for (std::size_t u = 0; u < users; ++u) {
      const auto& c = by_user[u][pick[u]];
      alt.push_back({{u}, {c.receiver}, c.known});
    }
    e.alternatives.push_back(std::move(alt));
    std::size_t u = users;
    while (u-- > 0) {
      if (++pick[u] < by_user[u].size()) break;
      pick[u] = 0;
    }
    if (u == static_cast<std::size_t>(-1)) break;
  }
  return e;
}

/// Two-user mixed regime objective: min(I(X1,X2;Y1), I(X1;Y1|X2) + I(X2;Y2)).
inline Expression mixed_two_user() {
  return {"mixed2", {{{{0, 1}, {0}, {}}}, {{{0}, {0}, {1}}, {{1}, {1}, {}}}}};
}

/// Three-user objective min(I(X1,X2;Y1|X3) + I(X3;Y3), I(X1,X2,X3;Y1)).
inline Expression three_user_capacity() {
  return {"cap3", {{{{0, 1}, {0}, {2}}, {{2}, {2}, {}}}, {{{0, 1, 2}, {0}, {}}}}};
}

}  // namespace expressions

namespace detail {

inline VarSet x_set(const std::vector<std::size_t>& users) {
  std::vector<std::string> n;
  for (std::size_t u : users) n.push_back(x_name(u));
  return VarSet(std::move(n));
}

inline VarSet y_set(const std::vector<std::size_t>& receivers) {
  std::vector<std::string> n;
  for (std::size_t r : receivers) n.push_back(y_name(r));
  return VarSet(std::move(n));
}

}  // namespace detail

/// Per-alternative values of `expr` on an assembled (Q, X, Y) joint.
inline std::vector<double> alternative_values(const JointDist& joint, const Expression& expr) {
  std::vector<double> out;
  out.reserve(expr.alternatives.size());
  const VarSet q{kTimeSharing};
  for (const auto& alt : expr.alternatives) {
    double s = 0.0;
    for (const auto& t : alt) {
      s += conditional_mi(joint, detail::x_set(t.decoded), detail::y_set(t.receivers), detail::x_set(t.given) + q);
    }
    out.push_back(s);
  }
  return out;
}

inline double evaluate_expression(const DiscreteIC& ch, const ProductInput& input, const Expression& expr) {
  expr.validate(ch.users());
  const auto joint = assemble_joint(input, ch);
  const auto v = alternative_values(joint, expr);
  return *std::min_element(v.begin(), v.end());
}

}  // namespace iccap
