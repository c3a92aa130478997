#include <gtest/gtest.h>

#include <map>

#include "oracles.hpp"
#include "fixtures.hpp"
#include "zeroleak/codec.hpp"
#include "zeroleak/sweep.hpp"

using namespace zeroleak;

namespace {

TEST(Families, ShapesAndStructure) {
  RandomSource rng(8);
  for (int i = 0; i < 100; ++i) {
    const auto det = RandomInstance(Family::kDeterministic, rng);
    EXPECT_TRUE(det.x_is_function_of_y());
    EXPECT_LE(det.x_size(), 4u);
    EXPECT_LE(det.y_size(), 10u);
    for (double p : det.marginal_x()) EXPECT_GT(p, 0.0);

    const auto inv = RandomInstance(Family::kInvertible, rng);
    EXPECT_EQ(RankAndNullity(inv.x_given_y().matrix()).nullity, 0u);

    const auto small = RandomInstance(Family::kSmallY, rng);
    EXPECT_LE(small.y_size(), small.x_size());
    EXPECT_LE(small.y_size(), 8u);

    // Common-information pairs: all dependence is carried by the block label,
    // so I(X;Y) equals the entropy of the support graph's component.
    const auto ci = RandomInstance(Family::kCommonInformation, rng);
    const auto t = fixtures::ToTable(ci.matrix());
    const std::size_t nx = t.size(), ny = t[0].size();
    std::vector<std::size_t> parent(nx + ny);
    for (std::size_t k = 0; k < parent.size(); ++k) parent[k] = k;
    auto find = [&](std::size_t k) {
      while (parent[k] != k) k = parent[k] = parent[parent[k]];
      return k;
    };
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y)
        if (t[x][y] > 0) parent[find(x)] = find(nx + y);
    std::map<std::size_t, double> block;
    for (std::size_t x = 0; x < nx; ++x) block[find(x)] += oracle::RowSums(t)[x];
    std::vector<double> pv;
    for (const auto& [k, p] : block) pv.push_back(p);
    EXPECT_GE(pv.size(), 2u);
    EXPECT_NEAR(oracle::MI(t), oracle::H(pv), 1e-10);
  }
}

TEST(Families, NamesRoundTrip) {
  for (Family f : {Family::kDeterministic, Family::kCommonInformation, Family::kInvertible, Family::kSmallY})
    EXPECT_EQ(ParseFamily(FamilyName(f)), f);
  EXPECT_FALSE(ParseFamily("nope").has_value());
}

TEST(CheckInstance, AllFamiliesPass) {
  RandomSource rng(2024);
  for (Family f : {Family::kDeterministic, Family::kCommonInformation, Family::kInvertible, Family::kSmallY}) {
    for (int i = 0; i < 60; ++i) {
      const auto d = RandomInstance(f, rng);
      const auto r = CheckInstance(d, f);
      for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << FamilyName(f) << " " << c.name << ": " << c.detail;
    }
  }
}

TEST(CheckInstance, WrongFamilyLabelIsCaught) {
  // A noisy invertible kernel labelled as a deterministic map fails the
  // nullity identity and the membership expectation.
  const auto d = fixtures::BinarySymmetric();
  const auto r = CheckInstance(d, Family::kDeterministic);
  EXPECT_FALSE(r.passed());
}

TEST(CheckInstance, WorkedExamplePasses) {
  const auto r = CheckInstance(fixtures::WorkedExample(), Family::kDeterministic);
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(r.member);
  EXPECT_LE(r.achieved_entropy, 1.9591 + 1e-3);
}

}  // namespace
