// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>

#include "iccap/cli/commands.hpp"
#include "iccap/cli/verify.hpp"
#include "iccap/gaussian/bounds.hpp"
#include "iccap/gaussian/regimes.hpp"

using namespace iccap;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string spec(const std::string& name) { return std::string(ICCAP_SPEC_DIR) + "/" + name; }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

verify::Options options(const std::string& suite, bool adversarial = false) {
  verify::Options o;
  o.suite = suite;
  o.seed = 2024;
  o.adversarial = adversarial;
  return o;
}

std::vector<verify::CheckResult> run_checks(const std::vector<verify::Check>& checks) {
  std::vector<verify::CheckResult> out;
  for (const auto& check : checks) out.push_back(check());
  return out;
}

std::vector<verify::CheckResult> run_suite(const std::string& suite, bool adversarial = false) {
  return run_checks(verify::build_checks(options(suite, adversarial)));
}

/// Oracle suite: the degraded-chain checks, or only the many-to-one check.
std::vector<verify::CheckResult> run_oracle(bool chains) {
  const auto o = options("oracle");
  auto checks = verify::detail::oracle_checks(o, Rng(o.seed));
  if (chains) {
    checks.pop_back();
  } else {
    checks.erase(checks.begin(), checks.end() - 1);
  }
  return run_checks(checks);
}

Outcome all_pass(const std::vector<verify::CheckResult>& rs, std::size_t expected) {
  double worst = 0.0;
  std::size_t passed = 0;
  for (const auto& r : rs) {
    passed += r.pass ? 1 : 0;
    worst = std::max(worst, r.value);
    if (!r.pass) std::printf("    failed: %s (%s)\n", r.id.c_str(), r.detail.c_str());
  }
  return {passed == rs.size() && rs.size() == expected,
          std::to_string(passed) + "/" + std::to_string(rs.size()) + " checks, worst " + fmt("%.3e", worst)};
}

std::string run_cli(std::vector<std::string> args, int* code = nullptr) {
  args.insert(args.begin(), "ic_capacity");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int c = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code) *code = c;
  return out.str() + err.str();
}

Outcome three_user_capacity() {
  int code = -1;
  const auto text = run_cli({"classify", "--spec", spec("three_user.json")}, &code);
  const bool printed = text.find("ThreeUserSuccessive: certified, C_sum = 1.000000 bits") != std::string::npos;
  const GaussianIC ch({{1, 1, 1}, {0.5, 1, 1}, {0.5, 0.5, 1}}, {1, 1, 1});
  const auto report = classify_three_user(ch);
  const double sd = successive_decoding_sum_rate(ch, DecodeOrder::canonical(3));
  const bool ok = code == 0 && printed && report.certified_capacity && std::abs(sd - *report.certified_capacity) <= 1e-9;
  return {ok, "C_sum " + fmt("%.9f", report.certified_capacity.value_or(NAN)) + ", canonical SD " + fmt("%.9f", sd)};
}

Outcome inner_outer_match() {
  const GaussianIC ch({{1, 1, 1}, {0.5, 1, 1}, {0.5, 0.5, 1}}, {1, 1, 1});
  const auto cut = theorem_bound_gaussian(ch, Theorem3Structure{{1, 0, 2}, {2, 3}});
  const auto whole = theorem_bound_gaussian(ch, Theorem3Structure{{2, 1, 0}, {3}});
  const double sd = successive_decoding_sum_rate(ch, DecodeOrder::canonical(3));
  const bool ok = std::abs(cut.value - 0.5 * std::log2(5.0)) <= 1e-9 && std::abs(whole.value - 1.0) <= 1e-9 &&
                  cut.certified && whole.certified && std::abs(std::min(cut.value, whole.value) - sd) <= 1e-9;
  return {ok, "cut bound " + fmt("%.9f", cut.value) + ", single-group bound " + fmt("%.9f", whole.value) +
                  ", achievable " + fmt("%.9f", sd)};
}

Outcome two_user_mixed() {
  int code = -1;
  const auto text = run_cli({"classify", "--spec", spec("two_user_mixed.json")}, &code);
  const auto r = mixed_regime_two_user(GaussianIC({{1, 1}, {0.5, 1}}, {1, 1}));
  const double expected = std::min(psi(2.0), psi(1.0) + psi(0.8));
  const bool ok = code == 0 && text.find("TwoUserMixed: certified, C_sum = 0.792481 bits") != std::string::npos &&
                  r.certified_capacity && std::abs(*r.certified_capacity - expected) <= 1e-9;
  return {ok, "C_sum " + fmt("%.9f", r.certified_capacity.value_or(NAN))};
}

Outcome conditioning() {
  const auto rs = run_suite("conditioning", true);
  std::vector<verify::CheckResult> regular;
  bool adversarial_caught = false;
  for (const auto& r : rs) {
    if (r.id.rfind("adversarial", 0) == 0) {
      adversarial_caught = !r.pass && r.counterexample.has_value();
    } else {
      regular.push_back(r);
    }
  }
  auto o = all_pass(regular, 6);
  o.pass = o.pass && adversarial_caught;
  o.detail += adversarial_caught ? ", reversed run falsified" : ", reversed run NOT falsified";
  return o;
}

Outcome determinism() {
  const std::vector<std::string> sweep{"sweep", "--spec", spec("three_user.json"), "--param", "a21:0:2:41",
                                       "--param", "P1:0.5:2:4", "--seed", "7"};
  const std::vector<std::string> ver{"verify", "--seed", "7", "--samples", "300"};
  ::setenv("IC_CAPACITY_THREADS", "1", 1);
  const auto s1 = run_cli(sweep), v1 = run_cli(ver);
  ::setenv("IC_CAPACITY_THREADS", "3", 1);
  const auto s2 = run_cli(sweep), v2 = run_cli(ver);
  ::unsetenv("IC_CAPACITY_THREADS");
  const auto s3 = run_cli(sweep), v3 = run_cli(ver);
  const bool ok = s1 == s2 && s2 == s3 && v1 == v2 && v2 == v3 && !s1.empty() && !v1.empty();
  return {ok, "sweep " + std::to_string(s1.size()) + " bytes, verify " + std::to_string(v1.size()) +
                  " bytes, 3 runs each at 1/3/default threads"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* what;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "three-user certified capacity", 1.0, three_user_capacity},
      {2, "inner and outer bounds meet", 1.0, inner_outer_match},
      {3, "two-user mixed regime", 1.0, two_user_mixed},
      {4, "Csiszar-Korner identity suite", 30.0, [] { return all_pass(run_suite("ck"), 4); }},
      {5, "degraded reconstruction of proportional Gaussian systems", 5.0,
       [] { return all_pass(run_suite("lemma3"), 1); }},
      {6, "conditioning preserves less-noisy ordering", 60.0, conditioning},
      {7, "n-letter inequality on random codes", 60.0, [] { return all_pass(run_suite("lemma5"), 4); }},
      {8, "search vs brute force on degraded chains", 300.0,
       [] { return all_pass(run_oracle(true), 20); }},
      {9, "many-to-one capacity under treating interference as noise", 60.0,
       [] { return all_pass(run_oracle(false), 1); }},
      {10, "power predicate agrees with Gaussian evaluation", 5.0,
       [] { return all_pass(run_suite("regime"), 1); }},
      {11, "sweep and verify are byte-identical across runs", 600.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.limit_s;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("criterion %2d %s: %s | %s | %.2f s (limit %.0f s)%s\n", c.id, pass ? "PASS" : "FAIL", c.what,
                o.detail.c_str(), secs, c.limit_s, in_time ? "" : " TOO SLOW");
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
