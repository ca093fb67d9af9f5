#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "iccap/core/errors.hpp"

namespace iccap {

/// Largest dense tensor any JointDist may hold unless the caller raises it.
inline constexpr std::size_t kDefaultMaxEntries = std::size_t{1} << 20;

/// Tolerance on total probability mass.
inline constexpr double kMassTolerance = 1e-12;

/// Negative mutual information down to this value is floating-point noise.
inline constexpr double kMiClampTolerance = 1e-10;

struct Variable {
  std::string name;
  std::size_t card = 1;
};

/// Set of variable labels; names are distinct.
class VarSet {
 public:
  VarSet() = default;
  VarSet(std::initializer_list<std::string> names) : VarSet(std::vector<std::string>(names)) {}
  explicit VarSet(std::vector<std::string> names) : names_(std::move(names)) {
    auto sorted = names_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ArgumentError("VarSet: duplicate variable name");
    }
  }

  [[nodiscard]] const std::vector<std::string>& names() const { return names_; }
  [[nodiscard]] bool empty() const { return names_.empty(); }
  [[nodiscard]] std::size_t size() const { return names_.size(); }
  [[nodiscard]] bool contains(const std::string& n) const {
    return std::find(names_.begin(), names_.end(), n) != names_.end();
  }

  [[nodiscard]] bool disjoint(const VarSet& other) const {
    return std::none_of(names_.begin(), names_.end(), [&](const auto& n) { return other.contains(n); });
  }

  /// Union; throws if the sets overlap.
  friend VarSet operator+(const VarSet& a, const VarSet& b) {
    auto names = a.names_;
    names.insert(names.end(), b.names_.begin(), b.names_.end());
    return VarSet(std::move(names));
  }

 private:
  std::vector<std::string> names_;
};

/// Dense probability tensor over named finite variables. Row-major: the last
/// variable varies fastest.
class JointDist {
 public:
  JointDist(std::vector<Variable> vars, std::vector<double> probs, std::size_t max_entries = kDefaultMaxEntries)
      : vars_(std::move(vars)), probs_(std::move(probs)) {
    const std::size_t n = checked_size(vars_, max_entries);
    if (probs_.size() != n) {
      throw ArgumentError("JointDist: tensor has " + std::to_string(probs_.size()) + " entries, expected " +
                          std::to_string(n));
    }
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      for (std::size_t j = i + 1; j < vars_.size(); ++j) {
        if (vars_[i].name == vars_[j].name) throw ArgumentError("JointDist: duplicate variable " + vars_[i].name);
      }
    }
    double total = 0.0;
    for (double p : probs_) {
      if (!(p >= 0.0)) throw ArgumentError("JointDist: negative or NaN probability");
      total += p;
    }
    if (std::abs(total - 1.0) > kMassTolerance) {
      std::ostringstream os;
      os << "JointDist: probabilities sum to " << std::setprecision(17) << total;
      throw ArgumentError(os.str());
    }
  }

  /// Product of cardinalities, or SizeError beyond `max_entries`.
  static std::size_t checked_size(const std::vector<Variable>& vars, std::size_t max_entries = kDefaultMaxEntries) {
    std::size_t n = 1;
    for (const auto& v : vars) {
      if (v.card == 0) throw ArgumentError("JointDist: variable " + v.name + " has cardinality 0");
      if (n > max_entries / v.card) {
        throw SizeError("JointDist: tensor exceeds " + std::to_string(max_entries) + " entries");
      }
      n *= v.card;
    }
    return n;
  }

  [[nodiscard]] const std::vector<Variable>& variables() const { return vars_; }
  [[nodiscard]] std::span<const double> probs() const { return probs_; }
  [[nodiscard]] std::size_t size() const { return probs_.size(); }

  [[nodiscard]] bool has(const std::string& name) const {
    return std::any_of(vars_.begin(), vars_.end(), [&](const auto& v) { return v.name == name; });
  }

  [[nodiscard]] std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i].name == name) return i;
    }
    throw ResolutionError("JointDist: unknown variable '" + name + "'");
  }

  [[nodiscard]] std::vector<std::size_t> resolve(const VarSet& set) const {
    std::vector<std::size_t> idx;
    idx.reserve(set.size());
    for (const auto& n : set.names()) idx.push_back(index_of(n));
    return idx;
  }

  /// Marginal over the variables at `keep`, laid out row-major in that order.
  [[nodiscard]] std::vector<double> marginal(std::span<const std::size_t> keep) const {
    std::size_t out_size = 1;
    std::vector<std::size_t> out_stride(vars_.size(), 0);
    for (auto it = keep.rbegin(); it != keep.rend(); ++it) {
      out_stride[*it] = out_size;
      out_size *= vars_[*it].card;
    }
    std::vector<double> out(out_size, 0.0);
    if (keep.empty()) {
      out[0] = std::accumulate(probs_.begin(), probs_.end(), 0.0);
      return out;
    }
    // Odometer over the full index; `offset` tracks the marginal position.
    std::vector<std::size_t> digit(vars_.size(), 0);
    std::size_t offset = 0;
    for (double p : probs_) {
      out[offset] += p;
      for (std::size_t v = vars_.size(); v-- > 0;) {
        if (++digit[v] < vars_[v].card) {
          offset += out_stride[v];
          break;
        }
        offset -= out_stride[v] * (vars_[v].card - 1);
        digit[v] = 0;
      }
    }
    return out;
  }

  [[nodiscard]] std::vector<double> marginal(const VarSet& set) const {
    const auto idx = resolve(set);
    return marginal(idx);
  }

  /// Labeled CSV: one column per variable, then `p`.
  void dump_csv(std::ostream& os) const {
    for (const auto& v : vars_) os << v.name << ',';
    os << "p\n";
    std::vector<std::size_t> digit(vars_.size(), 0);
    os << std::setprecision(17);
    for (double p : probs_) {
      for (std::size_t d : digit) os << d << ',';
      os << p << '\n';
      for (std::size_t v = vars_.size(); v-- > 0;) {
        if (++digit[v] < vars_[v].card) break;
        digit[v] = 0;
      }
    }
  }

 private:
  std::vector<Variable> vars_;
  std::vector<double> probs_;
};

/// Shannon entropy of a probability vector in bits, with 0·log0 = 0.
inline double entropy_bits(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log2(x);
  }
  return h;
}

/// Entropy of the marginal on `vars`, in bits.
inline double entropy(const JointDist& d, const VarSet& vars) {
  if (vars.empty()) return 0.0;
  return entropy_bits(d.marginal(vars));
}

/// I(A;B|C) in bits. Values in [-1e-10, 0) are clamped to 0; anything more
/// negative raises NumericalError.
inline double conditional_mi(const JointDist& d, const VarSet& a, const VarSet& b, const VarSet& c = {}) {
  if (!a.disjoint(b) || !a.disjoint(c) || !b.disjoint(c)) {
    throw ArgumentError("conditional_mi: variable sets must be pairwise disjoint");
  }
  // Resolve everything first so unknown names fail even for trivial terms.
  (void)d.resolve(a);
  (void)d.resolve(b);
  (void)d.resolve(c);
  if (a.empty() || b.empty()) return 0.0;
  const double mi = entropy(d, a + c) + entropy(d, b + c) - entropy(d, a + b + c) - entropy(d, c);
  if (mi >= 0.0) return mi;
  if (mi >= -kMiClampTolerance) return 0.0;
  std::ostringstream os;
  os << "conditional_mi: negative mutual information " << std::setprecision(17) << mi;
  throw NumericalError(os.str());
}

inline double mutual_information(const JointDist& d, const VarSet& a, const VarSet& b) {
  return conditional_mi(d, a, b, {});
}

}  // namespace iccap
