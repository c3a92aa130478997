#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "zeroleak/bounds_report.hpp"
#include "zeroleak/codec.hpp"
#include "zeroleak/mechanism.hpp"
#include "zeroleak/sweep.hpp"

using namespace zeroleak;

namespace {

const BoundEntry& Get(const std::vector<BoundEntry>& list, const std::string& name) {
  const BoundEntry* b = FindBound(list, name);
  EXPECT_NE(b, nullptr) << name;
  static const BoundEntry kMissing{};
  return b ? *b : kMissing;
}

TEST(UpperBounds, WorkedExampleWithStatedEntropy) {
  const auto d = fixtures::WorkedExample();
  const auto mb = EntropyBounds(d, 1.9591);
  const auto up = UpperBounds(d, mb, 1.9591);
  EXPECT_NEAR(Get(up, "two_part_mechanism").bits, 3.9591, 1e-12);
  EXPECT_TRUE(Get(up, "two_part_mechanism").surrogate);
  EXPECT_DOUBLE_EQ(Get(up, "deterministic_private_prior").bits, 4.0);
  EXPECT_TRUE(Get(up, "deterministic_private_prior").applicable);
  EXPECT_NEAR(Get(up, "two_part_nullity").bits, std::log2(5.0) + 2.0, 1e-12);
  EXPECT_FALSE(Get(up, "direct_pad").applicable);
  const double sum_cond = oracle::H({1.0 / 6, 2.0 / 6, 3.0 / 6}) + 1.5;
  EXPECT_NEAR(Get(up, "functional_representation").bits, 1.0 + std::min(sum_cond, 3.0) + 1.0, 1e-12);
}

TEST(Report, WorkedExampleImprovementOverPrior) {
  const auto d = fixtures::WorkedExample();
  const auto s = SolveG0(d);
  const auto mb = EntropyBounds(d, s.mech.entropy());
  const auto r = AssembleReport(d, mb, s.mech.entropy(), 2);
  EXPECT_TRUE(r.deterministic_improvement);
  ASSERT_TRUE(r.mechanism_plus_one && r.prior_mechanism_ceiling);
  EXPECT_LE(*r.mechanism_plus_one, 2.9591 + 1e-3);
  EXPECT_DOUBLE_EQ(*r.prior_mechanism_ceiling, 3.0);
  EXPECT_LT(*r.mechanism_plus_one, *r.prior_mechanism_ceiling);
  EXPECT_FALSE(r.non_existence);
  EXPECT_TRUE(CheckConsistency(r).empty());
}

TEST(Report, SmallYImproves) {
  const auto d = JointDistribution::FromRows({{0.125, 0.0625, 0.0625},
                                              {0.0625, 0.125, 0.0625},
                                              {0.0625, 0.0625, 0.125},
                                              {0.125, 0.0625, 0.0625}});
  const auto r = AssembleReport(d, std::nullopt, std::nullopt, 4);
  EXPECT_DOUBLE_EQ(Get(r.upper, "direct_pad").bits, 2.0);
  EXPECT_TRUE(Get(r.upper, "direct_pad").applicable);
  EXPECT_TRUE(r.small_y_improvement);
  EXPECT_LE(Get(r.upper, "direct_pad").bits, Get(r.upper, "functional_representation").bits);
  EXPECT_TRUE(CheckConsistency(r).empty());
}

TEST(UpperBounds, SinglePrivateSymbolDropsPad) {
  const auto d = fixtures::FromTable({{0.5, 0.25, 0.25}});
  const auto s = SolveG0(d);
  const auto up = UpperBounds(d, EntropyBounds(d, s.mech.entropy()), s.mech.entropy());
  EXPECT_NEAR(Get(up, "two_part_mechanism").bits, s.mech.entropy() + 1.0, 1e-12);
}

TEST(LowerBounds, WorkedExampleKeySizeTwo) {
  const auto low = LowerBounds(fixtures::WorkedExample(), 2, std::nullopt);
  EXPECT_DOUBLE_EQ(Get(low, "max_conditional_entropy").bits, 1.5);
  EXPECT_DOUBLE_EQ(Get(low, "log_private_alphabet").bits, 1.0);
  EXPECT_TRUE(Get(low, "log_private_alphabet").applicable);
  EXPECT_FALSE(Get(low, "lp_conditional_converse").applicable);
}

TEST(LowerBounds, NonExistenceWhenKeyTooSmall) {
  const auto d = fixtures::WorkedExample();
  EXPECT_TRUE(CodeCannotExist(d, 1));
  EXPECT_FALSE(CodeCannotExist(d, 2));
  EXPECT_FALSE(CodeCannotExist(fixtures::BinarySymmetric(), 1));
  EXPECT_TRUE(AssembleReport(d, std::nullopt, std::nullopt, 1).non_existence);
}

TEST(LowerBounds, IndependentPair) {
  const std::vector<double> py{0.1, 0.2, 0.3, 0.4};
  const auto d = fixtures::Independent({0.5, 0.5}, py);
  const auto mb = EntropyBounds(d, SolveG0(d).mech.entropy());
  const auto low = LowerBounds(d, 2, mb.k_lower);
  EXPECT_NEAR(Get(low, "max_conditional_entropy").bits, oracle::H(py), 1e-12);
  EXPECT_NEAR(Get(low, "lp_conditional_converse").bits, oracle::H(py), 1e-9);
}

TEST(Consistency, DetectsCrossedBounds) {
  BoundsReport r;
  r.upper.push_back({"u", 1.0, true, kRequiresNothing, 0});
  r.lower.push_back({"l", 2.0, true, kRequiresNothing, 0});
  EXPECT_FALSE(CheckConsistency(r).empty());
  r.lower[0].applicable = false;
  EXPECT_TRUE(CheckConsistency(r).empty());
}

TEST(ReportProperty, LowerNeverExceedsUpper) {
  RandomSource rng(31);
  for (int i = 0; i < 200; ++i) {
    const Family f = static_cast<Family>(i % 4);
    const auto d = RandomInstance(f, rng);
    const auto mem = MembershipInPhat(d);
    std::optional<MechanismBounds> mb;
    std::optional<double> hu;
    if (mem.member()) {
      const auto s = SolveG0(d);
      mb = EntropyBounds(d, s.mech.entropy(), {}, mem);
      hu = s.mech.entropy();
    }
    const auto r = AssembleReport(d, mb, hu, d.x_size());
    const auto problems = CheckConsistency(r);
    EXPECT_TRUE(problems.empty()) << FamilyName(f) << " " << i << ": " << (problems.empty() ? "" : problems[0]);
    EXPECT_EQ(r.non_existence, false);
    if (d.x_size() > 1)
      EXPECT_EQ(AssembleReport(d, mb, hu, d.x_size() - 1).non_existence, d.x_is_function_of_y());
  }
}

}  // namespace
