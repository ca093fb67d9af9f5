#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "iccap/core/errors.hpp"
#include "iccap/core/report.hpp"
#include "iccap/discrete/channel.hpp"
#include "iccap/discrete/conditions.hpp"
#include "iccap/gaussian/channel.hpp"

namespace iccap {

using Json = nlohmann::json;

/// Malformed channel spec; the message names the offending field.
struct ParseError : Error {
  using Error::Error;
};

/// Rows of a loaded transition off by more than this are renormalized with a warning.
inline constexpr double kRenormalizeWarn = 1e-12;
/// Rows off by more than this are rejected.
inline constexpr double kRenormalizeReject = 1e-9;

using Channel = std::variant<GaussianIC, DiscreteIC>;

struct LoadedSpec {
  Channel channel;
  std::vector<std::string> warnings;
};

namespace detail {

inline const Json& field(const Json& obj, const std::string& name, const std::string& ctx) {
  if (!obj.is_object()) throw ParseError(ctx + ": expected an object");
  const auto it = obj.find(name);
  if (it == obj.end()) throw ParseError(ctx + ": missing field '" + name + "'");
  return *it;
}

inline double number_at(const Json& v, const std::string& ctx) {
  if (!v.is_number()) throw ParseError("field '" + ctx + "': expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError("field '" + ctx + "': not finite");
  return d;
}

inline std::size_t count_at(const Json& v, const std::string& ctx) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw ParseError("field '" + ctx + "': expected a nonnegative integer");
  }
  return v.get<std::size_t>();
}

inline std::vector<double> numbers_at(const Json& v, const std::string& ctx) {
  if (!v.is_array()) throw ParseError("field '" + ctx + "': expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number_at(v[i], ctx + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::vector<std::size_t> counts_at(const Json& v, const std::string& ctx) {
  if (!v.is_array()) throw ParseError("field '" + ctx + "': expected an array");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(count_at(v[i], ctx + "[" + std::to_string(i) + "]"));
  return out;
}

inline LoadedSpec gaussian_from_json(const Json& j) {
  const auto& g = field(j, "gains", "spec");
  if (!g.is_array()) throw ParseError("field 'gains': expected an array of rows");
  std::vector<std::vector<double>> gains;
  for (std::size_t r = 0; r < g.size(); ++r) gains.push_back(numbers_at(g[r], "gains[" + std::to_string(r) + "]"));
  auto powers = numbers_at(field(j, "powers", "spec"), "powers");
  if (gains.size() != powers.size()) {
    throw ParseError("field 'gains': " + std::to_string(gains.size()) + " rows but " + std::to_string(powers.size()) +
                     " powers");
  }
  for (std::size_t r = 0; r < gains.size(); ++r) {
    if (gains[r].size() != powers.size()) {
      throw ParseError("field 'gains[" + std::to_string(r) + "]': expected " + std::to_string(powers.size()) + " entries");
    }
  }
  try {
    return {GaussianIC(std::move(gains), std::move(powers)), {}};
  } catch (const ArgumentError& e) {
    throw ParseError(std::string("gaussian spec: ") + e.what());
  }
}

inline LoadedSpec discrete_from_json(const Json& j) {
  auto in = counts_at(field(j, "input_cards", "spec"), "input_cards");
  auto out = counts_at(field(j, "output_cards", "spec"), "output_cards");
  auto t = numbers_at(field(j, "transition", "spec"), "transition");
  if (in.size() != out.size()) throw ParseError("field 'output_cards': length differs from input_cards");
  for (std::size_t c : in) {
    if (c == 0) throw ParseError("field 'input_cards': zero alphabet");
  }
  for (std::size_t c : out) {
    if (c == 0) throw ParseError("field 'output_cards': zero alphabet");
  }
  const std::size_t nx = detail::product(in);
  const std::size_t ny = detail::product(out);
  if (t.size() != nx * ny) {
    throw ParseError("field 'transition': " + std::to_string(t.size()) + " entries, expected " + std::to_string(nx * ny));
  }
  std::vector<std::string> warnings;
  for (std::size_t x = 0; x < nx; ++x) {
    double total = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      const double p = t[x * ny + y];
      if (p < 0.0) throw ParseError("field 'transition[" + std::to_string(x * ny + y) + "]': negative probability");
      total += p;
    }
    const double err = std::abs(total - 1.0);
    if (err > kRenormalizeReject) {
      throw ParseError("field 'transition': row " + std::to_string(x) + " sums to " + std::to_string(total));
    }
    if (err > kRenormalizeWarn) {
      warnings.push_back("transition row " + std::to_string(x) + " renormalized (sum off by " + std::to_string(err) + ")");
      for (std::size_t y = 0; y < ny; ++y) t[x * ny + y] /= total;
    }
  }
  try {
    return {DiscreteIC(std::move(in), std::move(out), std::move(t)), std::move(warnings)};
  } catch (const ArgumentError& e) {
    throw ParseError(std::string("discrete spec: ") + e.what());
  }
}

}  // namespace detail

/// Parses a channel spec:
///   {"kind": "gaussian", "gains": [[...], ...], "powers": [...]}
///   {"kind": "discrete", "input_cards": [...], "output_cards": [...], "transition": [...]}
inline LoadedSpec parse_channel_spec(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  const auto& kind = detail::field(j, "kind", "spec");
  if (!kind.is_string()) throw ParseError("field 'kind': expected a string");
  const auto k = kind.get<std::string>();
  if (k == "gaussian") return detail::gaussian_from_json(j);
  if (k == "discrete") return detail::discrete_from_json(j);
  throw ParseError("field 'kind': unknown channel kind '" + k + "'");
}

inline LoadedSpec load_channel_spec(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open spec file '" + path.string() + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    return parse_channel_spec(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

inline Json to_json(const GaussianIC& ch) {
  return Json{{"kind", "gaussian"}, {"gains", ch.gains()}, {"powers", ch.powers()}};
}

inline Json to_json(const DiscreteIC& ch) {
  return Json{{"kind", "discrete"},
              {"input_cards", ch.input_cards()},
              {"output_cards", ch.output_cards()},
              {"transition", ch.transition()}};
}

inline Json to_json(const Channel& ch) {
  return std::visit([](const auto& c) { return to_json(c); }, ch);
}

inline Json to_json(const ConditionCheck& c) { return Json{{"id", c.id}, {"holds", c.holds}, {"margin", c.margin + 0.0}}; }

inline Json to_json(const std::vector<ConditionCheck>& cs) {
  Json a = Json::array();
  for (const auto& c : cs) a.push_back(to_json(c));
  return a;
}

inline Json to_json(const ProductInput& in) {
  return Json{{"q_weights", in.q_weights}, {"branch_dists", in.branch_dists}};
}

inline Json to_json(const BoundResult& r) {
  Json j{{"value", r.value},
         {"expression", r.expression_id},
         {"certified", r.certified},
         {"conditions", to_json(r.conditions)},
         {"search", {{"restarts", r.search_stats.restarts},
                     {"iterations", r.search_stats.iterations},
                     {"trace_length", r.search_stats.trace_length}}}};
  j["argmax"] = r.argmax ? to_json(*r.argmax) : Json(nullptr);
  return j;
}

/// Counterexample with the sampled tensors needed to replay it.
inline Json to_json(const Counterexample& c) {
  Json aux = Json::array();
  for (const auto& v : c.law.aux) aux.push_back({{"name", v.name}, {"card", v.card}});
  Json indep = Json::object();
  for (std::size_t u = 0; u < c.law.independent.size(); ++u) {
    if (!c.law.independent[u].empty()) indep[x_name(u)] = c.law.independent[u];
  }
  Json joint_users = Json::array();
  for (std::size_t u : c.law.joint_users) joint_users.push_back(x_name(u));
  return Json{{"inequality", c.inequality_id},
              {"margin", c.margin + 0.0},
              {"sample_index", c.sample_index},
              {"aux", aux},
              {"joint_users", joint_users},
              {"joint", c.law.joint},
              {"independent", indep}};
}

}  // namespace iccap
