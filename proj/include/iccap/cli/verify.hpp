#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "iccap/core/parallel.hpp"
#include "iccap/core/random.hpp"
#include "iccap/discrete/conditions.hpp"
#include "iccap/discrete/degraded.hpp"
#include "iccap/discrete/many_to_one.hpp"
#include "iccap/discrete/search.hpp"
#include "iccap/gaussian/regimes.hpp"
#include "iccap/info/csiszar_korner.hpp"
#include "iccap/io/serialize.hpp"
#include "iccap/oracle/brute_force.hpp"
#include "iccap/oracle/conditioning.hpp"
#include "iccap/oracle/gaussian_equivalence.hpp"
#include "iccap/oracle/nletter.hpp"

namespace iccap::verify {

/// One verification check and its outcome.
struct CheckResult {
  std::string id;
  std::string instance;
  double value = 0.0;      // worst residual or margin seen
  double threshold = 0.0;  // pass iff value <= threshold (or the check says otherwise)
  bool pass = false;
  std::string detail;
  std::optional<Json> counterexample;
};

inline Json to_json(const CheckResult& c) {
  Json j{{"id", c.id}, {"instance", c.instance}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}};
  if (!c.detail.empty()) j["detail"] = c.detail;
  if (c.counterexample) j["counterexample"] = *c.counterexample;
  return j;
}

using Check = std::function<CheckResult()>;

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"ck", "lemma3", "conditioning", "lemma5", "falsify", "oracle", "regime"};
  return names;
}

struct Options {
  std::string suite = "all";
  std::size_t n = 4;                   // ck: largest blocklength
  bool adversarial = false;            // add the reversed-direction run, expected to fail
  std::optional<std::size_t> samples;  // overrides every per-check count
  std::size_t restarts = 64;
  double tol = 1e-9;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::size_t count(const Options& o, std::size_t fallback) { return o.samples.value_or(fallback); }

/// Binary two-user chain X -> Y1 -> Y2: random front end, BSC garbling.
inline DiscreteIC random_chain(Rng& rng, double min_flip = 0.05) {
  FrontEnd front{{2, 2}, 2, {}};
  for (std::size_t x = 0; x < 4; ++x) {
    const double p = rng.uniform();
    front.probs.push_back(p);
    front.probs.push_back(1.0 - p);
  }
  return build_degraded_chain({Kernel::bsc(rng.uniform(min_flip, 0.45))}, front);
}

inline std::string users_text(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t u : v) s += (s.empty() ? "" : " ") + std::to_string(u + 1);
  return "{" + s + "}";
}

inline std::vector<Check> ck_checks(const Options& o, const Rng& base) {
  std::vector<Check> out;
  for (std::size_t n = 1; n <= o.n; ++n) {
    out.push_back([n, o, base] {
      const std::size_t joints = count(o, 100);
      Rng rng = base.split(0xc0 + n);
      double worst = 0.0;
      for (std::size_t j = 0; j < joints; ++j) {
        // Ternary outputs only while the tensor stays small.
        const std::size_t max_card = n <= 4 ? 3 : 2;
        std::vector<Variable> vars{{kSideVariable, 1 + rng.index(3)}};
        for (std::size_t t = 1; t <= n; ++t) vars.push_back({ya_name(t), 2 + rng.index(max_card - 1)});
        for (std::size_t t = 1; t <= n; ++t) vars.push_back({yb_name(t), 2 + rng.index(max_card - 1)});
        const std::size_t size = JointDist::checked_size(vars);
        auto p = j % 2 == 1 ? sample_simplex_sharp(size, rng) : sample_simplex(size, rng);
        const JointDist d(std::move(vars), std::move(p));
        worst = std::max(worst, std::abs(csiszar_korner_residual(d, n)));
      }
      CheckResult r{"ck[n=" + std::to_string(n) + "]", std::to_string(joints) + " random joints, alphabets <= 3", worst,
                    1e-10, false, "", std::nullopt};
      r.pass = worst < 1e-10;
      return r;
    });
  }
  return out;
}

inline std::vector<Check> lemma3_checks(const Options& o, const Rng& base) {
  return {[o, base] {
    const std::size_t systems = count(o, 1000);
    Rng rng = base.split(0x13);
    double worst = 0.0;
    std::size_t rejected = 0;
    for (std::size_t s = 0; s < systems; ++s) {
      const std::size_t mu1 = 1 + rng.index(3);
      const std::size_t mu2 = rng.index(3);
      double alpha = rng.uniform(-1.0, 1.0);
      if (s % 100 == 0) alpha = 1.0;
      if (s % 100 == 1) alpha = 0.0;
      if (s % 100 == 2) alpha = -1.0;
      const auto sys = GaussianSystem::random_proportional(mu1, mu2, alpha, rng);
      const auto fitted = proportional_alpha(sys);
      if (!fitted) {
        ++rejected;
        continue;
      }
      worst = std::max(worst, degradation_equivalence_check(sys, *fitted));
    }
    CheckResult r{"lemma3[degraded reconstruction]", std::to_string(systems) + " random proportional Gaussian systems",
                  worst, 1e-12, false, "", std::nullopt};
    r.pass = worst <= 1e-12 && rejected == 0;
    if (rejected) r.detail = std::to_string(rejected) + " systems failed the proportional-gain test";
    return r;
  }};
}

/// Conditioning runs on a fresh chain. `reversed` swaps the receivers so the
/// claimed inequality goes against the degradation.
inline CheckResult conditioning_run(const Options& o, const Rng& base, std::uint64_t tag, PreservationSpec spec,
                                    bool reversed) {
  Rng chain_rng = base.split(tag);
  const auto ch = random_chain(chain_rng, reversed ? 0.2 : 0.05);
  if (reversed) std::swap(spec.receiver_a, spec.receiver_b);
  const std::size_t samples = count(o, 10000);
  const auto cex = conditioning_preservation_check(ch, spec, samples, base.split(tag + 1));
  std::string id = std::string(reversed ? "adversarial" : "conditioning") + "[" + to_string(spec.form) +
                   ",dec=" + users_text(spec.decoded) + ",cond=" + users_text(spec.conditioned);
  if (!spec.omega.empty()) id += ",omega=" + users_text(spec.omega);
  id += "]";
  CheckResult r{id, "binary degraded chain, |D|=" + std::to_string(spec.d_card) + ", " + std::to_string(samples) + " samples",
                cex ? cex->margin : 0.0, kViolationSlack, !cex, "", std::nullopt};
  if (cex) {
    r.detail = "counterexample at sample " + std::to_string(cex->sample_index);
    r.counterexample = iccap::to_json(*cex);
  } else {
    r.detail = "no counterexample in " + std::to_string(samples) + " samples";
  }
  return r;
}

inline std::vector<PreservationSpec> preservation_specs() {
  std::vector<PreservationSpec> out;
  auto add = [&](PreservationForm f, std::vector<std::size_t> dec, std::vector<std::size_t> cond,
                 std::vector<std::size_t> omega) {
    PreservationSpec s;
    s.form = f;
    s.decoded = std::move(dec);
    s.conditioned = std::move(cond);
    s.omega = std::move(omega);
    out.push_back(std::move(s));
  };
  add(PreservationForm::Inputs, {0, 1}, {}, {});
  add(PreservationForm::Inputs, {1}, {0}, {});
  add(PreservationForm::InputSubset, {0, 1}, {}, {0});
  add(PreservationForm::InputSubset, {0, 1}, {}, {1});
  add(PreservationForm::Auxiliary, {0, 1}, {}, {});
  add(PreservationForm::Auxiliary, {1}, {0}, {});
  return out;
}

inline std::vector<Check> conditioning_checks(const Options& o, const Rng& base) {
  std::vector<Check> out;
  const auto specs = preservation_specs();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    out.push_back([o, base, i, spec = specs[i]] { return conditioning_run(o, base, 0x100 + 2 * i, spec, false); });
  }
  return out;
}

inline Check adversarial_check(const Options& o, const Rng& base) {
  return [o, base] { return conditioning_run(o, base, 0xad, preservation_specs().front(), true); };
}

inline std::vector<Check> lemma5_checks(const Options& o, const Rng& base) {
  struct Sets {
    std::vector<std::size_t> omega1;
    std::vector<std::size_t> omega2;
  };
  const std::vector<Sets> sets{{{1}, {}}, {{0, 1}, {}}, {{1}, {0}}, {{0}, {1}}};
  std::vector<Check> out;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    out.push_back([o, base, i, s = sets[i]] {
      const std::size_t codes = count(o, 100);
      Rng rng = base.split(0x500 + i);
      const auto ch = random_chain(rng);
      double worst = -1.0;
      for (std::size_t c = 0; c < codes; ++c) {
        Rng code_rng = rng.split(c);
        const auto code = RandomCode::random(ch, 2, 1 + code_rng.index(4), code_rng);
        worst = std::max(worst, nletter_inequality_check(ch, code, s.omega1, s.omega2, 1, 0));
      }
      CheckResult r{"lemma5[n=2,omega1=" + users_text(s.omega1) + ",omega2=" + users_text(s.omega2) + ",Y2 vs Y1]",
                    std::to_string(codes) + " random codes on a binary degraded chain", worst, 1e-9, false, "", std::nullopt};
      r.pass = worst <= 1e-9;
      return r;
    });
  }
  return out;
}

inline std::vector<Check> falsify_checks(const Options& o, const Rng& base) {
  std::vector<ConditionSpec> specs(3);
  specs[0].kind = ConditionKind::ChainLessNoisy;
  specs[1].kind = ConditionKind::LessNoisyPerUser;
  specs[2].kind = ConditionKind::SetLessNoisy;
  specs[2].receiver_a = 1;
  specs[2].receiver_b = 0;
  specs[2].omega1 = {1};
  std::vector<Check> out;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    out.push_back([o, base, i, spec = specs[i]] {
      Rng rng = base.split(0xfa0 + i);
      const auto ch = random_chain(rng);
      const std::size_t samples = count(o, 10000);
      const auto cex = falsify_condition(ch, spec, samples, rng.split(1));
      CheckResult r{std::string("falsify[") + to_string(spec.kind) + "]",
                    "binary degraded chain, " + std::to_string(samples) + " samples", cex ? cex->margin : 0.0,
                    kViolationSlack, !cex, "", std::nullopt};
      if (cex) {
        r.detail = "counterexample for " + cex->inequality_id;
        r.counterexample = iccap::to_json(*cex);
      } else {
        r.detail = "no counterexample in " + std::to_string(samples) + " samples";
      }
      return r;
    });
  }
  return out;
}

inline std::vector<Check> oracle_checks(const Options& o, const Rng& base) {
  std::vector<Check> out;
  const std::size_t chains = o.samples ? std::min<std::size_t>(*o.samples, 20) : 20;
  for (std::size_t i = 0; i < chains; ++i) {
    out.push_back([o, base, i] {
      Rng rng = base.split(0x0a0 + i);
      const auto ch = random_chain(rng);
      const auto expr = expressions::theorem1(2);
      SearchConfig cfg;
      cfg.restarts = o.restarts;
      cfg.tol = o.tol;
      cfg.seed = rng();
      const double searched = maximize_expression(ch, expr, cfg).value;
      const double grid = brute_force_sum_capacity(ch, expr, 16).value;
      CheckResult r{"oracle[chain " + std::to_string(i + 1) + "]", "search vs 1/16 grid on a binary degraded chain",
                    std::abs(searched - grid), 0.02, false, "", std::nullopt};
      r.pass = std::abs(searched - grid) <= 0.02 && searched >= grid - 1e-9;
      char buf[128];
      std::snprintf(buf, sizeof buf, "search %.9f, grid %.9f", searched, grid);
      r.detail = buf;
      return r;
    });
  }
  out.push_back([o, base] {
    const auto ch = DiscreteIC::from_function({2, 2}, {2, 2}, [](const auto& x, const auto& y) {
      return (y[0] == x[0] ? 0.9 : 0.1) * (y[1] == x[1] ? 1.0 : 0.0);
    });
    SearchConfig cfg;
    cfg.restarts = o.restarts;
    cfg.tol = o.tol;
    cfg.seed = base.split(0x2101)();
    const auto res = many_to_one_tin_capacity(ch, cfg, count(o, 10000));
    const double grid = brute_force_sum_capacity(ch, expressions::tin(2), 16).value;
    const double expected = 2.0 + 0.1 * std::log2(0.1) + 0.9 * std::log2(0.9);
    const double err = std::max(std::abs(res.value - expected), std::abs(res.value - grid));
    CheckResult r{"oracle[many-to-one one-sided]", "clean Y2, BSC(0.1) on the private link", err, 1e-6, false, "",
                  std::nullopt};
    r.pass = err <= 1e-6 && res.certified;
    char buf[128];
    std::snprintf(buf, sizeof buf, "value %.9f, certified %s", res.value, res.certified ? "yes" : "no");
    r.detail = buf;
    return r;
  });
  return out;
}

/// Closed-form power predicate of the three-user regime against the direct
/// Gaussian comparison I(X2;Y2|X3) >= I(X2;Y1|X3) it summarizes.
inline std::vector<Check> regime_checks(const Options& o, const Rng& base) {
  return {[o, base] {
    const std::size_t draws = count(o, 10000);
    Rng rng = base.split(0x67);
    std::size_t disagree = 0;
    std::size_t boundary = 0;
    for (std::size_t s = 0; s < draws; ++s) {
      const double a12 = rng.uniform(-2.0, 2.0);
      const double a21 = rng.uniform(-2.0, 2.0);
      const double a23 = rng.uniform(-2.0, 2.0);
      const double a31 = rng.uniform(-2.0, 2.0);
      const std::vector<double> p{rng.uniform(0.01, 10.0), rng.uniform(0.01, 10.0), rng.uniform(0.0, 10.0)};
      const GaussianIC ch({{1.0, a12, a12 * a23}, {a21, 1.0, a23}, {a31, a31 * a12, 1.0}}, p);
      const auto report = classify_three_user(ch);
      const auto it = std::find_if(report.conditions.begin(), report.conditions.end(),
                                   [](const ConditionCheck& c) { return c.id.rfind("P1+1>=", 0) == 0; });
      const double predicate = it->margin;
      const double direct = gaussian_cmi(ch, {1}, {2}, 1) - gaussian_cmi(ch, {1}, {2}, 0);
      if (std::abs(predicate) <= 1e-9 || std::abs(direct) <= 1e-9) {
        ++boundary;
        continue;
      }
      if ((predicate >= 0.0) != (direct >= 0.0)) ++disagree;
    }
    CheckResult r{"regime[power predicate vs Gaussian evaluation]", std::to_string(draws) + " random three-user draws",
                  static_cast<double>(disagree), 0.0, disagree == 0, std::to_string(boundary) + " draws on the boundary",
                  std::nullopt};
    return r;
  }};
}

}  // namespace detail

/// Builds the checks of the selected suite in a fixed order.
inline std::vector<Check> build_checks(const Options& o) {
  const Rng base(o.seed);
  const auto& names = suite_names();
  if (o.suite != "all" && std::find(names.begin(), names.end(), o.suite) == names.end()) {
    throw ArgumentError("verify: unknown suite '" + o.suite + "'");
  }
  if (o.n == 0 || o.n > 9) throw ArgumentError("verify: --n must lie in 1..9");
  std::vector<Check> out;
  auto want = [&](const char* s) { return o.suite == "all" || o.suite == s; };
  auto append = [&](std::vector<Check> v) { out.insert(out.end(), v.begin(), v.end()); };
  if (want("ck")) append(detail::ck_checks(o, base));
  if (want("lemma3")) append(detail::lemma3_checks(o, base));
  if (want("conditioning")) append(detail::conditioning_checks(o, base));
  if (want("lemma5")) append(detail::lemma5_checks(o, base));
  if (want("falsify")) append(detail::falsify_checks(o, base));
  if (want("oracle")) append(detail::oracle_checks(o, base));
  if (want("regime")) append(detail::regime_checks(o, base));
  if (o.adversarial) out.push_back(detail::adversarial_check(o, base));
  return out;
}

/// Runs the checks on the worker pool; results keep the build order.
inline std::vector<CheckResult> run(const Options& o) {
  const auto checks = build_checks(o);
  return parallel_map(checks.size(), [&](std::size_t i) { return checks[i](); });
}

}  // namespace iccap::verify
