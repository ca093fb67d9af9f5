#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "iccap/core/parallel.hpp"
#include "iccap/core/random.hpp"
#include "iccap/info/csiszar_korner.hpp"
#include "iccap/info/joint_dist.hpp"
#include "iccap/info/simplex.hpp"

using namespace iccap;

namespace {

// I(A;B|C) straight from the KL form Σ p(abc) log p(abc)p(c) / (p(ac)p(bc)),
// for a joint laid out as [a][b][c].
double kl_cmi(const std::vector<double>& p, std::size_t na, std::size_t nb, std::size_t nc) {
  std::vector<double> pac(na * nc, 0.0), pbc(nb * nc, 0.0), pc(nc, 0.0);
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t b = 0; b < nb; ++b) {
      for (std::size_t c = 0; c < nc; ++c) {
        const double v = p[(a * nb + b) * nc + c];
        pac[a * nc + c] += v;
        pbc[b * nc + c] += v;
        pc[c] += v;
      }
    }
  }
  double mi = 0.0;
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t b = 0; b < nb; ++b) {
      for (std::size_t c = 0; c < nc; ++c) {
        const double v = p[(a * nb + b) * nc + c];
        if (v > 0.0) mi += v * std::log2(v * pc[c] / (pac[a * nc + c] * pbc[b * nc + c]));
      }
    }
  }
  return mi;
}

JointDist random_joint(std::vector<Variable> vars, Rng& rng, bool sharp = false) {
  const std::size_t n = JointDist::checked_size(vars);
  return JointDist(std::move(vars), sharp ? sample_simplex_sharp(n, rng) : sample_simplex(n, rng));
}

}  // namespace

TEST(JointDist, RejectsBadTensors) {
  EXPECT_THROW(JointDist({{"A", 2}}, {0.5, 0.4}), ArgumentError);
  EXPECT_THROW(JointDist({{"A", 2}}, {1.5, -0.5}), ArgumentError);
  EXPECT_THROW(JointDist({{"A", 2}}, {1.0}), ArgumentError);
  EXPECT_THROW(JointDist({{"A", 2}, {"A", 2}}, {0.25, 0.25, 0.25, 0.25}), ArgumentError);
  EXPECT_THROW(JointDist::checked_size({{"A", 1024}, {"B", 1024}, {"C", 2}}), SizeError);
  EXPECT_THROW(JointDist::checked_size({{"A", 0}}), ArgumentError);
}

TEST(JointDist, UnknownAndOverlappingNames) {
  const JointDist d({{"A", 2}, {"B", 2}}, {0.25, 0.25, 0.25, 0.25});
  EXPECT_THROW(conditional_mi(d, {"A"}, {"Z"}), ResolutionError);
  EXPECT_THROW(conditional_mi(d, {"A"}, {"A"}), ArgumentError);
  EXPECT_THROW(conditional_mi(d, {"A"}, {"B"}, {"B"}), ArgumentError);
}

TEST(JointDist, EntropyOfUniformAndPointMass) {
  const JointDist u({{"A", 8}}, std::vector<double>(8, 0.125));
  EXPECT_NEAR(entropy(u, {"A"}), 3.0, 1e-15);
  const JointDist pt({{"A", 3}}, {0.0, 1.0, 0.0});
  EXPECT_EQ(entropy(pt, {"A"}), 0.0);
}

TEST(JointDist, MarginalKeepsRequestedOrder) {
  Rng rng(3);
  const auto d = random_joint({{"A", 2}, {"B", 3}}, rng);
  const auto ba = d.marginal(VarSet{"B", "A"});
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 3; ++b) EXPECT_DOUBLE_EQ(ba[b * 2 + a], d.probs()[a * 3 + b]);
  }
}

TEST(MutualInformation, MatchesKlOracle) {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const std::size_t na = 1 + rng.index(4), nb = 1 + rng.index(4), nc = 1 + rng.index(3);
    const auto d = random_joint({{"A", na}, {"B", nb}, {"C", nc}}, rng, t % 2 == 1);
    const std::vector<double> p(d.probs().begin(), d.probs().end());
    EXPECT_NEAR(conditional_mi(d, {"A"}, {"B"}, {"C"}), std::max(0.0, kl_cmi(p, na, nb, nc)), 1e-12);
    EXPECT_NEAR(conditional_mi(d, {"A"}, {"B"}), kl_cmi(d.marginal(VarSet{"A", "B"}), na, nb, 1), 1e-12);
  }
}

TEST(MutualInformation, ChainRule) {
  Rng rng(12);
  for (int t = 0; t < 100; ++t) {
    const auto d = random_joint({{"A", 3}, {"B", 2}, {"C", 3}, {"D", 2}}, rng, t % 2 == 0);
    const double joint = conditional_mi(d, {"A"}, {"B", "C"}, {"D"});
    const double split = conditional_mi(d, {"A"}, {"C"}, {"D"}) + conditional_mi(d, {"A"}, {"B"}, {"C", "D"});
    EXPECT_NEAR(joint, split, 1e-12);
  }
}

TEST(MutualInformation, NonnegativeAndSymmetric) {
  Rng rng(13);
  for (int t = 0; t < 200; ++t) {
    const auto d = random_joint({{"A", 2}, {"B", 3}, {"C", 2}}, rng, t % 2 == 0);
    const double ab = conditional_mi(d, {"A"}, {"B"}, {"C"});
    EXPECT_GE(ab, 0.0);
    EXPECT_NEAR(ab, conditional_mi(d, {"B"}, {"A"}, {"C"}), 1e-12);
  }
}

TEST(MutualInformation, DataProcessing) {
  // A -> B -> C with random kernels.
  Rng rng(14);
  for (int t = 0; t < 100; ++t) {
    const auto pa = sample_simplex(3, rng);
    std::vector<std::vector<double>> k1, k2;
    for (int a = 0; a < 3; ++a) k1.push_back(sample_simplex(3, rng));
    for (int b = 0; b < 3; ++b) k2.push_back(sample_simplex(2, rng));
    std::vector<double> p;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        for (int c = 0; c < 2; ++c) p.push_back(pa[a] * k1[a][b] * k2[b][c]);
      }
    }
    const JointDist d({{"A", 3}, {"B", 3}, {"C", 2}}, p);
    EXPECT_LE(mutual_information(d, {"A"}, {"C"}), mutual_information(d, {"A"}, {"B"}) + 1e-12);
    EXPECT_NEAR(conditional_mi(d, {"A"}, {"C"}, {"B"}), 0.0, 1e-12);
  }
}

TEST(MutualInformation, IndependentIsZero) {
  Rng rng(15);
  const auto pa = sample_simplex(4, rng);
  const auto pb = sample_simplex(3, rng);
  std::vector<double> p;
  for (double a : pa) {
    for (double b : pb) p.push_back(a * b);
  }
  const JointDist d({{"A", 4}, {"B", 3}}, p);
  EXPECT_EQ(mutual_information(d, {"A"}, {"B"}), 0.0);
  EXPECT_EQ(mutual_information(d, {}, {"B"}), 0.0);
}

TEST(CsiszarKorner, ResidualVanishes) {
  Rng rng(21);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (int t = 0; t < 30; ++t) {
      std::vector<Variable> vars{{kSideVariable, 1 + rng.index(3)}};
      for (std::size_t i = 1; i <= n; ++i) vars.push_back({ya_name(i), 2 + rng.index(2)});
      for (std::size_t i = 1; i <= n; ++i) vars.push_back({yb_name(i), 2 + rng.index(2)});
      const auto d = random_joint(vars, rng, t % 2 == 1);
      EXPECT_LT(std::abs(csiszar_korner_residual(d, n)), 1e-10) << "n=" << n;
    }
  }
}

TEST(CsiszarKorner, WorksWithoutSideVariable) {
  Rng rng(22);
  const auto d = random_joint({{ya_name(1), 2}, {ya_name(2), 3}, {yb_name(1), 2}, {yb_name(2), 2}}, rng);
  EXPECT_LT(std::abs(csiszar_korner_residual(d, 2)), 1e-10);
}

TEST(CsiszarKorner, MissingSequenceVariable) {
  const JointDist d({{ya_name(1), 2}}, {0.5, 0.5});
  EXPECT_THROW(csiszar_korner_residual(d, 1), ResolutionError);
  EXPECT_THROW(csiszar_korner_residual(d, 0), ArgumentError);
}

TEST(Simplex, DrawsAreDistributions) {
  Rng rng(31);
  for (std::size_t dim = 1; dim < 10; ++dim) {
    for (const auto& p : {sample_simplex(dim, rng), sample_simplex_sharp(dim, rng)}) {
      ASSERT_EQ(p.size(), dim);
      EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
      for (double x : p) EXPECT_GE(x, 0.0);
    }
  }
  EXPECT_THROW(sample_simplex(0, rng), ArgumentError);
}

TEST(Rng, SplitStreamsAreReproducible) {
  const Rng root(42);
  Rng a = root.split(7), b = root.split(7), c = root.split(8);
  const auto x = a(), y = b(), z = c();
  EXPECT_EQ(x, y);
  EXPECT_NE(x, z);
  Rng r(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(r.index(5), 5u);
  }
}

TEST(Parallel, KeepsIndexOrderAndRethrows) {
  const auto v = parallel_map(100, [](std::size_t i) { return i * i; }, 4);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(v[i], i * i);
  EXPECT_THROW(parallel_map(
                   10,
                   [](std::size_t i) -> int {
                     if (i == 7) throw std::runtime_error("boom");
                     return 0;
                   },
                   3),
               std::runtime_error);
  EXPECT_TRUE(parallel_map(0, [](std::size_t) { return 1; }, 4).empty());
}
