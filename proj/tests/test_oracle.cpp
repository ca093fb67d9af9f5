#include <gtest/gtest.h>

#include <cmath>

#include "iccap/core/random.hpp"
#include "iccap/discrete/degraded.hpp"
#include "iccap/discrete/search.hpp"
#include "iccap/oracle/brute_force.hpp"
#include "iccap/oracle/conditioning.hpp"
#include "iccap/oracle/gaussian_equivalence.hpp"
#include "iccap/oracle/nletter.hpp"

using namespace iccap;

namespace {

DiscreteIC bsc_chain(double flip, Rng& rng) {
  FrontEnd front{{2, 2}, 2, {}};
  for (int x = 0; x < 4; ++x) {
    const double p = rng.uniform();
    front.probs.push_back(p);
    front.probs.push_back(1.0 - p);
  }
  return build_degraded_chain({Kernel::bsc(flip)}, front);
}

DiscreteIC swap_receivers(const DiscreteIC& ch) {
  return DiscreteIC::from_function(ch.input_cards(), {ch.output_cards()[1], ch.output_cards()[0]},
                                   [&](const auto& x, const auto& y) {
                                     return ch.prob(detail::flatten(x, ch.input_cards()),
                                                    detail::flatten({y[1], y[0]}, ch.output_cards()));
                                   });
}

}  // namespace

TEST(BruteForce, CleanChannelIsExact) {
  const auto ch = DiscreteIC::from_function({2, 2}, {2, 2}, [](const auto& x, const auto& y) {
    return (y[0] == x[0] && y[1] == x[1]) ? 1.0 : 0.0;
  });
  const auto r = brute_force_sum_capacity(ch, expressions::tin(2), 4);
  EXPECT_NEAR(r.value, 2.0, 1e-12);
  EXPECT_EQ(r.points, 25u);
  EXPECT_NEAR(evaluate_expression(ch, r.argmax, expressions::tin(2)), r.value, 1e-12);
}

TEST(BruteForce, RejectsUnsupportedInputs) {
  const auto wide = DiscreteIC::from_function({4, 2}, {2, 2}, [](const auto&, const auto&) { return 0.25; });
  EXPECT_THROW(brute_force_sum_capacity(wide, expressions::tin(2)), ArgumentError);
  const auto ch = DiscreteIC::from_function({2, 2}, {2, 2}, [](const auto&, const auto&) { return 0.25; });
  EXPECT_THROW(brute_force_sum_capacity(ch, expressions::tin(2), 0), ArgumentError);
  EXPECT_THROW(brute_force_sum_capacity(ch, expressions::mixed_two_user(), 64), SizeError);
}

TEST(BruteForce, SearchAgreesOnDegradedChains) {
  Rng rng(1);
  for (int t = 0; t < 4; ++t) {
    const auto ch = bsc_chain(rng.uniform(0.05, 0.45), rng);
    SearchConfig cfg;
    cfg.restarts = 16;
    cfg.seed = static_cast<std::uint64_t>(t);
    const double searched = maximize_expression(ch, expressions::theorem1(2), cfg).value;
    const auto grid = brute_force_sum_capacity(ch, expressions::theorem1(2), 16);
    EXPECT_GE(searched, grid.value - 1e-9);
    EXPECT_LE(searched - grid.value, 0.02);
    EXPECT_GE(grid.grid_gap, 0.0);
  }
}

TEST(BruteForce, MinTypeObjectiveUsesTimeSharing) {
  Rng rng(2);
  const auto ch = bsc_chain(0.2, rng);
  const auto grid = brute_force_sum_capacity(ch, expressions::mixed_two_user(), 4);
  ASSERT_EQ(grid.argmax.q_card(), 2u);
  EXPECT_NEAR(evaluate_expression(ch, grid.argmax, expressions::mixed_two_user()), grid.value, 1e-12);
}

TEST(NLetter, CodeJointIsConsistent) {
  Rng rng(3);
  const auto ch = bsc_chain(0.1, rng);
  const auto code = RandomCode::random(ch, 2, 3, rng);
  const auto joint = code_joint(ch, code, {0, 1});
  // Blocklength 1 with every symbol as a codeword is the single-letter joint.
  RandomCode full;
  full.n = 1;
  full.codebooks = {{{0}, {1}}, {{0}, {1}}};
  const auto single = code_joint(ch, full, {0});
  const auto uniform = assemble_joint(ProductInput::uniform(ch), ch);
  EXPECT_NEAR(conditional_mi(single, {"X1^n"}, {"Y1^n"}, {"X2^n"}), conditional_mi(uniform, {"X1"}, {"Y1"}, {"X2"}), 1e-12);
  EXPECT_GT(joint.size(), 0u);
}

TEST(NLetter, ValidatesCodes) {
  Rng rng(4);
  const auto ch = bsc_chain(0.1, rng);
  RandomCode bad;
  bad.n = 2;
  bad.codebooks = {{{0, 1}}, {{0, 2}}};
  EXPECT_THROW(code_joint(ch, bad, {0}), ArgumentError);
  bad.codebooks = {{{0, 1}}, {}};
  EXPECT_THROW(code_joint(ch, bad, {0}), ArgumentError);
}

TEST(NLetter, DegradedReceiverNeverLearnsMore) {
  Rng rng(5);
  const auto ch = bsc_chain(0.1, rng);
  for (int t = 0; t < 20; ++t) {
    const auto code = RandomCode::random(ch, 2, 1 + rng.index(4), rng);
    EXPECT_LE(nletter_inequality_check(ch, code, {0, 1}, {}, 1, 0), 1e-9);
    EXPECT_LE(nletter_inequality_check(ch, code, {1}, {0}, 1, 0), 1e-9);
    EXPECT_EQ(nletter_inequality_check(ch, code, {1}, {0}, 1, 1), 0.0);
  }
}

TEST(NLetter, ReversedDirectionIsPositive) {
  Rng rng(6);
  const auto ch = bsc_chain(0.2, rng);
  double worst = -1.0;
  for (int t = 0; t < 20; ++t) {
    const auto code = RandomCode::random(ch, 2, 4, rng);
    worst = std::max(worst, nletter_inequality_check(ch, code, {0, 1}, {}, 0, 1));
  }
  EXPECT_GT(worst, 1e-3);
}

TEST(GaussianEquivalence, ReconstructionMatchesForProportionalSystems) {
  Rng rng(7);
  for (int t = 0; t < 500; ++t) {
    const auto sys = GaussianSystem::random_proportional(1 + rng.index(3), rng.index(3), rng.uniform(-1, 1), rng);
    const auto alpha = proportional_alpha(sys);
    ASSERT_TRUE(alpha.has_value());
    EXPECT_LE(degradation_equivalence_check(sys, *alpha), 1e-12);
  }
}

TEST(GaussianEquivalence, FlippedCorrectionBreaksTheMatch) {
  GaussianSystem sys{{0.5, 3.0}, {1.0, 1.0}, 1};
  EXPECT_LE(detail::equivalence_mismatch(sys, 0.5, 1.0), 1e-15);
  EXPECT_NEAR(detail::equivalence_mismatch(sys, 0.5, -1.0), 5.0, 1e-12);
}

TEST(GaussianEquivalence, RejectsNonDegradedSystems) {
  GaussianSystem strong{{2.0, 0.0}, {1.0, 0.0}, 1};
  EXPECT_FALSE(proportional_alpha(strong).has_value());
  EXPECT_THROW(degradation_equivalence_check(strong, 2.0), DomainError);
  GaussianSystem bent{{0.5, 0.6}, {1.0, 1.0}, 2};
  EXPECT_FALSE(proportional_alpha(bent).has_value());
  GaussianSystem bad{{0.5}, {1.0, 1.0}, 1};
  EXPECT_THROW(bad.validate(), ArgumentError);
}

TEST(Conditioning, DegradedChainPreservesOrdering) {
  Rng rng(8);
  const auto ch = bsc_chain(0.1, rng);
  for (auto form : {PreservationForm::Inputs, PreservationForm::InputSubset, PreservationForm::Auxiliary}) {
    PreservationSpec s;
    s.form = form;
    s.decoded = {0, 1};
    if (form == PreservationForm::InputSubset) s.omega = {0};
    EXPECT_FALSE(conditioning_preservation_check(ch, s, 1000, Rng(9)).has_value()) << to_string(form);
  }
}

TEST(Conditioning, ReversedReceiversAreCaught) {
  Rng rng(10);
  const auto ch = swap_receivers(bsc_chain(0.25, rng));
  PreservationSpec s;
  s.decoded = {0, 1};
  const auto cex = conditioning_preservation_check(ch, s, 1000, Rng(11));
  ASSERT_TRUE(cex.has_value());
  EXPECT_GT(cex->margin, kViolationSlack);
}

TEST(Conditioning, SpecValidation) {
  Rng rng(12);
  const auto ch = bsc_chain(0.1, rng);
  PreservationSpec s;
  s.decoded = {0};
  EXPECT_THROW(conditioning_preservation_check(ch, s, 10, Rng(1)), ArgumentError);
  s.decoded = {0, 1};
  s.omega = {0};
  EXPECT_THROW(conditioning_preservation_check(ch, s, 10, Rng(1)), ArgumentError);
  s.form = PreservationForm::InputSubset;
  s.decoded = {1};
  s.conditioned = {0};
  EXPECT_THROW(conditioning_preservation_check(ch, s, 10, Rng(1)), ArgumentError);
  s.omega = {};
  EXPECT_THROW(conditioning_preservation_check(ch, s, 0, Rng(1)), ArgumentError);
}
