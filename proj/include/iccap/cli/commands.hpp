#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "iccap/cli/verify.hpp"
#include "iccap/core/parallel.hpp"
#include "iccap/discrete/conditions.hpp"
#include "iccap/discrete/search.hpp"
#include "iccap/gaussian/bounds.hpp"
#include "iccap/gaussian/regimes.hpp"
#include "iccap/io/serialize.hpp"

namespace iccap::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNoRegime = 2;
inline constexpr int kExitViolation = 3;

/// Bad flags or flag values.
struct UsageError : ArgumentError {
  using ArgumentError::ArgumentError;
};

struct RunConfig {
  std::uint64_t seed = 0;
  std::optional<std::size_t> samples;
  std::size_t restarts = 64;
  std::optional<std::size_t> q_card;
  double tol = 1e-9;
  std::optional<std::string> json_path;
  std::optional<std::string> csv_path;

  void validate() const {
    if (samples && *samples == 0) throw UsageError("--samples must be at least 1");
    if (restarts == 0) throw UsageError("--restarts must be at least 1");
    if (q_card && *q_card == 0) throw UsageError("--q-card must be at least 1");
    if (!(tol > 0.0)) throw UsageError("--tol must be positive");
  }

  [[nodiscard]] SearchConfig search() const {
    SearchConfig s;
    s.restarts = restarts;
    s.tol = tol;
    s.q_card = q_card;
    s.seed = seed;
    return s;
  }
};

namespace detail {

inline std::string format(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  va_list copy;
  va_copy(copy, args);
  const int n = std::vsnprintf(nullptr, 0, fmt, copy);
  va_end(copy);
  std::string s(static_cast<std::size_t>(n), '\0');
  std::vsnprintf(s.data(), s.size() + 1, fmt, args);
  va_end(args);
  return s;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw Error("failed writing '" + path + "'");
}

inline void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

inline LoadedSpec load(const std::string& path, std::ostream& out) {
  auto spec = load_channel_spec(path);
  for (const auto& w : spec.warnings) out << "warning: " << w << "\n";
  return spec;
}

inline void print_conditions(std::ostream& out, const std::vector<ConditionCheck>& cs) {
  // +0.0 folds a signed zero.
  for (const auto& c : cs) out << format("  [%s] %s margin %+.6e\n", c.holds ? "pass" : "FAIL", c.id.c_str(), c.margin + 0.0);
}

/// "2,1,3" -> {1, 0, 2}.
inline std::vector<std::size_t> parse_users(const std::string& text, const char* flag) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &used);
    } catch (const std::exception&) {
      throw UsageError(std::string(flag) + ": '" + item + "' is not a positive integer");
    }
    if (used != item.size() || v == 0 || item.front() == '-') {
      throw UsageError(std::string(flag) + ": '" + item + "' is not a positive integer");
    }
    out.push_back(v - 1);
  }
  if (out.empty()) throw UsageError(std::string(flag) + ": empty list");
  return out;
}

struct BoundFlags {
  int theorem = 1;
  std::string perm;
  std::string cuts;
  std::string groups;
};

inline BoundStructure parse_structure(const BoundFlags& f, std::size_t users) {
  try {
    switch (f.theorem) {
      case 1:
        if (!f.perm.empty() || !f.cuts.empty() || !f.groups.empty()) {
          throw UsageError("--theorem 1 takes no --perm, --cuts or --groups");
        }
        return Theorem1Structure{};
      case 3: {
        if (!f.groups.empty()) throw UsageError("--groups applies to --theorem 4 only");
        if (f.cuts.empty()) throw UsageError("--theorem 3 needs --cuts");
        Theorem3Structure s;
        if (f.perm.empty()) {
          for (std::size_t u = 0; u < users; ++u) s.perm.push_back(u);
        } else {
          s.perm = parse_users(f.perm, "--perm");
        }
        // Cuts are prefix lengths, so keep them 1-based.
        for (std::size_t c : parse_users(f.cuts, "--cuts")) s.cuts.push_back(c + 1);
        validate(s, users);
        return s;
      }
      case 4: {
        if (!f.perm.empty() || !f.cuts.empty()) throw UsageError("--theorem 4 takes --groups only");
        if (f.groups.empty()) throw UsageError("--theorem 4 needs --groups");
        Theorem4Structure s;
        std::stringstream ss(f.groups);
        std::string part;
        while (std::getline(ss, part, '|')) s.groups.push_back(parse_users(part, "--groups"));
        validate(s, users);
        return s;
      }
      default: throw UsageError("--theorem must be 1, 3 or 4");
    }
  } catch (const UsageError&) {
    throw;
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
}

inline std::string argmax_summary(const ProductInput& in) {
  std::string s;
  for (std::size_t q = 0; q < in.q_card(); ++q) {
    s += format("  q=%zu weight %.4f:", q + 1, in.q_weights[q]);
    for (std::size_t u = 0; u < in.branch_dists[q].size(); ++u) {
      s += format(" P_X%zu=(", u + 1);
      for (std::size_t x = 0; x < in.branch_dists[q][u].size(); ++x) {
        s += format(x ? ", %.4f" : "%.4f", in.branch_dists[q][u][x]);
      }
      s += ")";
    }
    s += "\n";
  }
  return s;
}

inline Json to_json(const RegimeReport& r) {
  Json j{{"regime", to_string(r.regime)}, {"conditions", iccap::to_json(r.conditions)}};
  j["certified_capacity"] = r.certified_capacity ? Json(*r.certified_capacity) : Json(nullptr);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

}  // namespace detail

/// Regime classification of a Gaussian spec. Exit 0 when some regime is
/// certified, 2 otherwise.
inline int cmd_classify(const std::string& spec_path, const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const auto spec = detail::load(spec_path, out);
  const auto* g = std::get_if<GaussianIC>(&spec.channel);
  if (!g) throw ArgumentError("classify: spec must be a Gaussian channel");
  const auto c = classify_channel(*g);
  for (const auto& r : c.reports) {
    if (r.certified_capacity) {
      out << detail::format("%s: certified, C_sum = %.6f bits\n", to_string(r.regime), *r.certified_capacity);
    } else {
      out << to_string(r.regime) << ": not certified\n";
    }
    if (!r.note.empty()) out << "  note: " << r.note << "\n";
    detail::print_conditions(out, r.conditions);
  }
  if (!c.certified) out << "None: no regime certified\n";
  out << detail::format("heuristic: inner (successive decoding) = %.6f bits, outer (cut bound, Gaussian inputs) = ",
                        c.inner);
  out << (c.outer ? detail::format("%.6f bits\n", *c.outer) : std::string("n/a\n"));
  if (cfg.json_path) {
    Json reports = Json::array();
    for (const auto& r : c.reports) reports.push_back(detail::to_json(r));
    Json j{{"channel", iccap::to_json(c.normalized)},
           {"reports", reports},
           {"regime", c.certified ? to_string(c.reports[*c.certified].regime) : "None"},
           {"inner", c.inner}};
    j["capacity"] = c.certified ? Json(*c.reports[*c.certified].certified_capacity) : Json(nullptr);
    j["outer"] = c.outer ? Json(*c.outer) : Json(nullptr);
    detail::write_json(*cfg.json_path, j);
  }
  return c.certified ? kExitOk : kExitNoRegime;
}

/// Outer-bound expression of one theorem structure. Gaussian specs use
/// full-power Gaussian inputs and closed-form condition checks; discrete
/// specs are maximized numerically and their conditions falsified by
/// sampling.
inline int cmd_bound(const std::string& spec_path, const detail::BoundFlags& flags, const RunConfig& cfg,
                     std::ostream& out) {
  cfg.validate();
  const auto spec = detail::load(spec_path, out);
  const std::size_t users = std::visit([](const auto& ch) { return ch.users(); }, spec.channel);
  const auto structure = detail::parse_structure(flags, users);
  Json j;
  if (const auto* g = std::get_if<GaussianIC>(&spec.channel)) {
    const auto r = theorem_bound_gaussian(normalize(*g), structure);
    out << detail::format("bound %s = %.9f bits (Gaussian inputs at full power)\n", r.expression_id.c_str(), r.value);
    out << "certified: " << (r.certified ? "yes" : "no") << " (closed-form conditions)\n";
    detail::print_conditions(out, r.conditions);
    j = iccap::to_json(r);
  } else {
    const auto& ch = std::get<DiscreteIC>(spec.channel);
    auto r = maximize_expression(ch, expressions::for_structure(users, structure), cfg.search());
    const std::size_t samples = cfg.samples.value_or(10000);
    const auto cex = falsify_condition(ch, conditions_for(structure), samples, Rng(cfg.seed).split(0xb0));
    r.certified = !cex;
    out << detail::format("bound %s = %.9f bits (max over inputs, %zu restarts)\n", r.expression_id.c_str(), r.value,
                          cfg.restarts);
    if (cex) {
      out << detail::format("certified: no (counterexample for %s, margin %+.6e, sample %zu)\n",
                            cex->inequality_id.c_str(), cex->margin, cex->sample_index);
    } else {
      out << "certified: yes (no counterexample in " << samples << " samples)\n";
    }
    if (r.argmax) out << "argmax:\n" << detail::argmax_summary(*r.argmax);
    j = iccap::to_json(r);
    j["samples"] = samples;
    j["counterexample"] = cex ? iccap::to_json(*cex) : Json(nullptr);
  }
  if (cfg.json_path) {
    j["seed"] = cfg.seed;
    detail::write_json(*cfg.json_path, j);
  }
  return kExitOk;
}

/// Self-checks generated from the seed. Exit 0 iff every check passes.
inline int cmd_verify(verify::Options opts, const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  opts.seed = cfg.seed;
  opts.samples = cfg.samples;
  opts.restarts = cfg.restarts;
  opts.tol = cfg.tol;
  const auto results = verify::run(opts);
  std::size_t failed = 0;
  for (const auto& r : results) {
    failed += r.pass ? 0 : 1;
    out << detail::format("%s %s value %.3e threshold %.1e | %s", r.pass ? "PASS" : "FAIL", r.id.c_str(), r.value,
                          r.threshold, r.instance.c_str());
    if (!r.detail.empty()) out << " | " << r.detail;
    out << "\n";
  }
  out << "summary: " << results.size() - failed << " passed, " << failed << " failed (seed " << cfg.seed << ")\n";
  if (cfg.json_path) {
    Json checks = Json::array();
    for (const auto& r : results) checks.push_back(verify::to_json(r));
    detail::write_json(*cfg.json_path, Json{{"seed", cfg.seed},
                                            {"suite", opts.suite},
                                            {"checks", checks},
                                            {"passed", results.size() - failed},
                                            {"failed", failed}});
  }
  return failed == 0 ? kExitOk : kExitViolation;
}

/// One swept parameter: a_ji (gain from i into j) or P_i, 1-based.
struct SweepParam {
  std::string name;
  bool is_power = false;
  std::size_t j = 0;
  std::size_t i = 0;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t steps = 1;

  [[nodiscard]] double at(std::size_t s) const {
    if (steps == 1) return lo;
    return lo + (hi - lo) * static_cast<double>(s) / static_cast<double>(steps - 1);
  }
};

/// "a21:0:2:41" or "P1:0.5:4:8". steps counts grid points, both ends included.
inline SweepParam parse_sweep_param(const std::string& text, std::size_t users) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string p;
  while (std::getline(ss, p, ':')) parts.push_back(p);
  if (parts.size() != 4) throw UsageError("--param '" + text + "': expected name:min:max:steps");
  SweepParam sp;
  sp.name = parts[0];
  auto digit = [&](char c) -> std::size_t {
    if (c < '1' || c > '9' || static_cast<std::size_t>(c - '0') > users) {
      throw UsageError("--param '" + text + "': unknown parameter '" + sp.name + "'");
    }
    return static_cast<std::size_t>(c - '0') - 1;
  };
  if (sp.name.size() == 3 && sp.name[0] == 'a') {
    sp.j = digit(sp.name[1]);
    sp.i = digit(sp.name[2]);
  } else if (sp.name.size() == 2 && sp.name[0] == 'P') {
    sp.is_power = true;
    sp.i = digit(sp.name[1]);
  } else {
    throw UsageError("--param '" + text + "': unknown parameter '" + sp.name + "'");
  }
  try {
    std::size_t used = 0;
    sp.lo = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("min");
    sp.hi = std::stod(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("max");
    if (parts[3].empty() || parts[3].front() == '-') throw std::invalid_argument("steps");
    const unsigned long steps = std::stoul(parts[3], &used);
    if (used != parts[3].size()) throw std::invalid_argument("steps");
    sp.steps = steps;
  } catch (const std::exception&) {
    throw UsageError("--param '" + text + "': malformed number");
  }
  if (sp.steps == 0) throw UsageError("--param '" + text + "': steps must be at least 1");
  if (!std::isfinite(sp.lo) || !std::isfinite(sp.hi)) throw UsageError("--param '" + text + "': bounds must be finite");
  if (sp.is_power && std::min(sp.lo, sp.hi) < 0.0) throw UsageError("--param '" + text + "': powers must be nonnegative");
  return sp;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

inline std::string csv_number(double v) { return format("%.10g", v + 0.0); }

/// Margin columns for a K-user normalized channel: the identity-labelled
/// regime conditions followed by the per-user less-noisy conditions.
inline std::vector<ConditionCheck> sweep_margins(const GaussianIC& n) {
  std::vector<ConditionCheck> out;
  if (n.users() == 3) {
    const auto r = classify_three_user(n);
    out.insert(out.end(), r.conditions.begin(), r.conditions.end());
  } else if (n.users() == 2) {
    const auto r = mixed_regime_two_user(n);
    out.insert(out.end(), r.conditions.begin(), r.conditions.end());
  }
  ConditionSpec per_user;
  per_user.kind = ConditionKind::LessNoisyPerUser;
  const auto pu = verify_gaussian_conditions(n, per_user);
  out.insert(out.end(), pu.begin(), pu.end());
  return out;
}

}  // namespace detail

/// Grid of Gaussian channels around the spec; one CSV row per point with
/// the regime, every condition margin, the certified capacity (blank if
/// none) and the heuristic inner/outer values.
inline int cmd_sweep(const std::string& spec_path, const std::vector<std::string>& params, const RunConfig& cfg,
                     std::ostream& out) {
  cfg.validate();
  if (params.empty()) throw UsageError("sweep: at least one --param is required");
  std::ostringstream warnings;
  const auto spec = detail::load(spec_path, warnings);
  const auto* base = std::get_if<GaussianIC>(&spec.channel);
  if (!base) throw ArgumentError("sweep: spec must be a Gaussian channel");
  const std::size_t k = base->users();
  std::vector<SweepParam> sweep;
  std::vector<std::size_t> dims;
  for (const auto& p : params) {
    sweep.push_back(parse_sweep_param(p, k));
    dims.push_back(sweep.back().steps);
  }
  double total = 1.0;
  for (std::size_t d : dims) total *= static_cast<double>(d);
  if (total > 1e7) throw UsageError("sweep: more than 1e7 grid points");
  const auto n_points = static_cast<std::size_t>(total);

  auto channel_at = [&](std::size_t point, std::vector<double>& values) {
    auto gains = base->gains();
    auto powers = base->powers();
    const auto digits = iccap::detail::unflatten(point, dims);
    values.clear();
    for (std::size_t s = 0; s < sweep.size(); ++s) {
      const double v = sweep[s].at(digits[s]);
      values.push_back(v);
      if (sweep[s].is_power) {
        powers[sweep[s].i] = v;
      } else {
        gains[sweep[s].j][sweep[s].i] = v;
      }
    }
    return GaussianIC(std::move(gains), std::move(powers));
  };

  // Condition ids depend on K only.
  std::vector<std::vector<double>> eye(k, std::vector<double>(k, 0.0));
  for (std::size_t u = 0; u < k; ++u) eye[u][u] = 1.0;
  const auto header_margins = detail::sweep_margins(GaussianIC(eye, std::vector<double>(k, 1.0)));
  std::string header;
  for (const auto& s : sweep) header += detail::csv_field(s.name) + ",";
  header += "regime";
  for (const auto& c : header_margins) header += "," + detail::csv_field("margin:" + c.id);
  header += ",capacity,inner_sd,outer\n";

  const auto rows = parallel_map(n_points, [&](std::size_t point) {
    std::vector<double> values;
    const auto ch = channel_at(point, values);
    std::string row;
    for (double v : values) row += detail::csv_number(v) + ",";
    try {
      const auto c = classify_channel(ch);
      row += c.certified ? to_string(c.reports[*c.certified].regime) : "None";
      for (const auto& m : detail::sweep_margins(c.normalized)) row += "," + detail::csv_number(m.margin);
      row += ",";
      if (c.certified) row += detail::csv_number(*c.reports[*c.certified].certified_capacity);
      row += "," + detail::csv_number(c.inner) + ",";
      if (c.outer) row += detail::csv_number(*c.outer);
    } catch (const DegenerateChannelError&) {
      // A zero direct gain leaves no normalized channel to classify.
      row += "Degenerate";
      row += std::string(header_margins.size() + 3, ',');
    }
    return row + "\n";
  });

  std::string csv = header;
  for (const auto& r : rows) csv += r;
  if (cfg.csv_path) {
    detail::write_text(*cfg.csv_path, csv);
    out << warnings.str() << "wrote " << n_points << " rows to " << *cfg.csv_path << "\n";
  } else {
    out << csv;
  }
  return kExitOk;
}

/// Full command line: parses flags, dispatches, maps errors to exit codes.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sum-capacity bounds and regime checks for K-user interference channels"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::size_t q_card = 0;
  std::string json_path;
  std::string csv_path;
  std::string spec_path;
  auto common = [&](CLI::App* sub, bool needs_spec) {
    if (needs_spec) sub->add_option("--spec", spec_path, "channel spec (JSON)")->required();
    sub->add_option("--seed", seed, "root seed");
    sub->add_option("--samples", samples, "falsification / verification sample count");
    sub->add_option("--restarts", cfg.restarts, "optimizer restarts");
    sub->add_option("--q-card", q_card, "time-sharing alphabet for min-type objectives");
    sub->add_option("--tol", cfg.tol, "optimizer tolerance");
    sub->add_option("--json", json_path, "write a JSON report");
    sub->add_option("--csv", csv_path, "write CSV output");
  };
  auto* classify = app.add_subcommand("classify", "certify a capacity regime of a Gaussian channel");
  common(classify, true);
  auto* bound = app.add_subcommand("bound", "evaluate one outer-bound structure");
  common(bound, true);
  detail::BoundFlags bflags;
  bound->add_option("--theorem", bflags.theorem, "1 (nested chain), 3 (cut groups) or 4 (receiver groups)");
  bound->add_option("--perm", bflags.perm, "user permutation, 1-based, e.g. 2,1,3");
  bound->add_option("--cuts", bflags.cuts, "increasing prefix lengths ending at K, e.g. 2,3");
  bound->add_option("--groups", bflags.groups, "receiver groups, 1-based, e.g. \"1,2|3\"");
  auto* verify_cmd = app.add_subcommand("verify", "run the numerical self-checks");
  common(verify_cmd, false);
  verify::Options vopts;
  verify_cmd->add_option("--suite", vopts.suite, "all, ck, lemma3, conditioning, lemma5, falsify, oracle or regime");
  verify_cmd->add_option("--n", vopts.n, "largest blocklength for the ck suite");
  verify_cmd->add_flag("--adversarial", vopts.adversarial, "add a reversed-direction check that must fail");
  auto* sweep = app.add_subcommand("sweep", "regime map over a parameter grid, CSV");
  common(sweep, true);
  std::vector<std::string> params;
  sweep->add_option("--param", params, "name:min:max:steps with name aJI or Pi (1-based), repeatable");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInputError;
  }
  auto given = [](CLI::App* sub, const char* flag) { return sub->count(flag) > 0; };
  CLI::App* active = app.get_subcommands().front();
  if (given(active, "--samples")) cfg.samples = samples;
  if (given(active, "--q-card")) cfg.q_card = q_card;
  if (given(active, "--json")) cfg.json_path = json_path;
  if (given(active, "--csv")) cfg.csv_path = csv_path;
  cfg.seed = seed;
  try {
    if (active == classify) return cmd_classify(spec_path, cfg, out);
    if (active == bound) return cmd_bound(spec_path, bflags, cfg, out);
    if (active == verify_cmd) return cmd_verify(vopts, cfg, out);
    return cmd_sweep(spec_path, params, cfg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitInputError;
}

}  // namespace iccap::cli
