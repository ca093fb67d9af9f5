#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "iccap/core/errors.hpp"

namespace iccap {

/// Per-receiver successive decoding lists (0-based users). Receiver j decodes
/// `lists[j]` front to back; each list ends with j itself.
struct DecodeOrder {
  std::vector<std::vector<std::size_t>> lists;

  void validate(std::size_t users) const {
    if (lists.size() != users) throw ArgumentError("DecodeOrder: need one list per receiver");
    for (std::size_t j = 0; j < users; ++j) {
      const auto& l = lists[j];
      if (l.empty() || l.back() != j) {
        throw ArgumentError("DecodeOrder: list of receiver " + std::to_string(j + 1) + " must end with its own user");
      }
      std::vector<bool> seen(users, false);
      for (std::size_t u : l) {
        if (u >= users) throw ArgumentError("DecodeOrder: user index out of range");
        if (seen[u]) throw ArgumentError("DecodeOrder: duplicate user in list of receiver " + std::to_string(j + 1));
        seen[u] = true;
      }
    }
  }

  /// Receiver j decodes users K-1, K-2, ..., j in that order.
  static DecodeOrder canonical(std::size_t users) {
    DecodeOrder o;
    for (std::size_t j = 0; j < users; ++j) {
      std::vector<std::size_t> l;
      for (std::size_t u = users; u-- > j;) l.push_back(u);
      o.lists.push_back(std::move(l));
    }
    return o;
  }

  /// Treating interference as noise: every receiver decodes only its own user.
  static DecodeOrder tin(std::size_t users) {
    DecodeOrder o;
    for (std::size_t j = 0; j < users; ++j) o.lists.push_back({j});
    return o;
  }
};

/// Orders in which receiver j first decodes some subset of the users above
/// it (highest index first) and then its own. Every subset is listed for
/// K <= 4; larger K gets only the canonical order and TIN.
inline std::vector<DecodeOrder> nested_orders(std::size_t users) {
  if (users > 4) return {DecodeOrder::canonical(users), DecodeOrder::tin(users)};
  std::vector<std::pair<std::size_t, std::size_t>> slots;  // (receiver, interferer)
  for (std::size_t j = 0; j < users; ++j) {
    for (std::size_t u = users; u-- > j + 1;) slots.emplace_back(j, u);
  }
  std::vector<DecodeOrder> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << slots.size()); ++mask) {
    DecodeOrder o;
    o.lists.resize(users);
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (mask >> s & 1U) o.lists[slots[s].first].push_back(slots[s].second);
    }
    for (std::size_t j = 0; j < users; ++j) o.lists[j].push_back(j);
    out.push_back(std::move(o));
  }
  return out;
}

/// One rate constraint R_user <= I(X_user; Y_receiver | X_known).
struct DecodeConstraint {
  std::size_t user;
  std::size_t receiver;
  std::vector<std::size_t> known;
};

/// All constraints generated by an order, grouped by user.
inline std::vector<std::vector<DecodeConstraint>> decode_constraints(const DecodeOrder& order, std::size_t users) {
  order.validate(users);
  std::vector<std::vector<DecodeConstraint>> by_user(users);
  for (std::size_t j = 0; j < users; ++j) {
    std::vector<std::size_t> known;
    for (std::size_t u : order.lists[j]) {
      by_user[u].push_back({u, j, known});
      known.push_back(u);
    }
  }
  return by_user;
}

}  // namespace iccap
