#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "zeroleak/codec.hpp"
#include "zeroleak/error.hpp"
#include "zeroleak/mechanism.hpp"
#include "zeroleak/sweep.hpp"

using namespace zeroleak;

namespace {

Mechanism DecodableG0(const JointDistribution& d) { return BuildDecodeTable(d, SolveG0(d).mech); }

// Every (x, y, u, w) outcome of the two-part code written out by hand.
std::vector<oracle::MessageMass> TwoPartMessages(const PrivateCode& c, const JointDistribution& d) {
  std::vector<oracle::MessageMass> out;
  const auto& m = c.mech;
  for (std::size_t x = 0; x < d.x_size(); ++x)
    for (std::size_t y = 0; y < d.y_size(); ++y)
      for (std::size_t u = 0; u < m.u_size(); ++u)
        for (std::size_t w = 0; w < c.key_size; ++w) {
          const double p = d(x, y) * m.p_u_given_y()(u, y) / static_cast<double>(c.key_size);
          if (p <= 0) continue;
          out.push_back({x, oracle::Bits((x + w) % d.x_size(), oracle::CeilLog2(d.x_size())) +
                                c.symbol_code.codewords[u], p});
        }
  return out;
}

TEST(Huffman, DyadicDistribution) {
  const auto code = BuildHuffman(std::vector<double>{0.5, 0.25, 0.25});
  EXPECT_EQ(code.codewords[0].size(), 1u);
  EXPECT_EQ(code.codewords[1].size(), 2u);
  EXPECT_EQ(code.codewords[2].size(), 2u);
  EXPECT_DOUBLE_EQ(code.ExpectedLength(std::vector<double>{0.5, 0.25, 0.25}), 1.5);
  EXPECT_TRUE(code.IsPrefixFree());
  EXPECT_DOUBLE_EQ(code.KraftSum(), 1.0);
}

TEST(Huffman, StatedMechanismWithinOneBit) {
  const std::vector<double> pu{1.0 / 6, 1.0 / 3, 1.0 / 4, 1.0 / 4};
  const auto code = BuildHuffman(pu);
  EXPECT_LE(code.ExpectedLength(pu), 1.9591 + 1);
  EXPECT_NEAR(code.ExpectedLength(pu), oracle::HuffmanLength(pu), 1e-12);
}

TEST(Huffman, SingleSymbolGetsOneBit) {
  const auto code = BuildHuffman(std::vector<double>{1.0});
  ASSERT_EQ(code.size(), 1u);
  EXPECT_EQ(code.codewords[0], "0");
  EXPECT_DOUBLE_EQ(code.ExpectedLength(std::vector<double>{1.0}), 1.0);
}

TEST(Huffman, SymbolLookup) {
  const auto code = BuildHuffman(std::vector<double>{0.5, 0.25, 0.25});
  for (std::size_t s = 0; s < 3; ++s) EXPECT_EQ(code.SymbolFor(code.codewords[s]), std::optional<std::size_t>(s));
  EXPECT_FALSE(code.SymbolFor("").has_value());
}

TEST(HuffmanProperty, OptimalPrefixFreeAndWithinEntropyPlusOne) {
  RandomSource rng(5);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 2 + rng.NextU64() % 12;
    std::vector<double> p(n);
    double s = 0;
    for (auto& v : p) s += (v = rng.NextUnit() + (rng.NextUnit() < 0.2 ? 5.0 : 0.0));
    for (auto& v : p) v /= s;
    const auto code = BuildHuffman(p);
    const double len = code.ExpectedLength(p);
    EXPECT_TRUE(code.IsPrefixFree());
    EXPECT_NEAR(code.KraftSum(), 1.0, 1e-12);
    EXPECT_NEAR(len, oracle::HuffmanLength(p), 1e-12);
    EXPECT_GE(len, oracle::H(p) - 1e-12);
    EXPECT_LT(len, oracle::H(p) + 1);
  }
}

TEST(Bits, RoundTrip) {
  EXPECT_EQ(ToBits(1, 2), "01");
  EXPECT_EQ(ToBits(5, 3), "101");
  EXPECT_EQ(ToBits(0, 0), "");
  EXPECT_EQ(FromBits("101"), 5u);
  EXPECT_EQ(FromBits(""), 0u);
}

TEST(RandomSource, Deterministic) {
  RandomSource a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.NextU64(), b.NextU64());
    const double u = a.NextUnit();
    EXPECT_EQ(u, b.NextUnit());
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  RandomSource c(42);
  c.NextU64();
  RandomSource resumed(c.state());
  RandomSource fresh(42);
  fresh.NextU64();
  EXPECT_EQ(resumed.NextU64(), fresh.NextU64());
}

TEST(TwoPart, WorkedExampleLengths) {
  const auto d = fixtures::WorkedExample();
  const auto mech = DecodableG0(d);
  const auto code = BuildTwoPart(d, mech);
  EXPECT_EQ(code.x_field_bits, 1u);
  EXPECT_EQ(code.key_size, 2u);
  const auto a = Audit(code, d);
  const double want = 1.0 + code.symbol_code.ExpectedLength(mech.p_u());
  ASSERT_EQ(a.per_key_expected_length.size(), 2u);
  for (double len : a.per_key_expected_length) EXPECT_NEAR(len, want, 1e-12);
  EXPECT_LE(a.max_expected_length(), 1 + 2.9591 + 1e-9);
  EXPECT_LT(a.max_expected_length(), 4.0);
  EXPECT_LE(a.mi_c_x, 1e-9);
  EXPECT_EQ(a.lossless_prob, 1.0);
  EXPECT_NEAR(a.pad_entropy, 1.0, 1e-12);
  EXPECT_LE(a.mi_pad_x, 1e-12);
  EXPECT_NEAR(a.mi_c_x, oracle::MessageLeakage(TwoPartMessages(code, d)), 1e-12);
}

TEST(TwoPart, PadArithmetic) {
  const auto d = fixtures::WorkedExample();
  const auto code = BuildTwoPart(d, DecodableG0(d));
  RandomSource rng(1);
  for (std::size_t y = 0; y < 3; ++y) {  // y in the x=0 group
    const auto bits = EncodeJoint(code, 0, y, 1, rng);
    EXPECT_EQ(bits.substr(0, 1), "1");
    EXPECT_EQ(Decode(code, bits, 1), y);
  }
}

TEST(TwoPart, EncodedMessagesMatchEnumeration) {
  const auto d = fixtures::WorkedExample();
  const auto code = BuildTwoPart(d, DecodableG0(d));
  std::set<std::string> possible;
  for (const auto& m : TwoPartMessages(code, d)) possible.insert(m.msg);
  RandomSource rng(9);
  for (int i = 0; i < 2000; ++i) {
    const std::size_t y = rng.Categorical(d.marginal_y());
    const std::size_t w = rng.NextU64() % code.key_size;
    const auto bits = Encode(code, y, w, rng);
    EXPECT_TRUE(possible.count(bits)) << bits;
    EXPECT_EQ(Decode(code, bits, w), y);
  }
}

TEST(TwoPart, SinglePrivateSymbolHasNoPad) {
  const auto d = fixtures::FromTable({{0.5, 0.25, 0.25}});
  const auto code = BuildTwoPart(d, DecodableG0(d));
  EXPECT_EQ(code.x_field_bits, 0u);
  const auto a = Audit(code, d);
  EXPECT_NEAR(a.max_expected_length(), code.symbol_code.ExpectedLength(code.mech.p_u()), 1e-12);
  EXPECT_NEAR(a.max_expected_length(), 1.5, 1e-12);
  EXPECT_EQ(a.lossless_prob, 1.0);
}

TEST(TwoPart, IdentityJointPutsEverythingInPad) {
  const auto d = fixtures::FromTable({{0.25, 0, 0, 0}, {0, 0.25, 0, 0}, {0, 0, 0.25, 0}, {0, 0, 0, 0.25}});
  const auto mech = DecodableG0(d);
  EXPECT_EQ(mech.u_size(), 1u);
  const auto code = BuildTwoPart(d, mech);
  const auto a = Audit(code, d);
  EXPECT_EQ(a.lossless_prob, 1.0);
  EXPECT_LE(a.mi_c_x, 1e-12);
  EXPECT_NEAR(a.max_expected_length(), 2.0 + 1.0, 1e-12);
}

TEST(TwoPart, NeedsDecodeTable) {
  const auto d = fixtures::WorkedExample();
  try {
    BuildTwoPart(d, SolveG0(d).mech);
    FAIL() << "expected IncompleteMechanism";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIncompleteMechanism);
  }
}

TEST(DirectPad, FourSymbolExample) {
  const auto d = fixtures::Independent({0.25, 0.25, 0.25, 0.25}, {0.25, 0.25, 0.25, 0.25});
  const auto code = BuildDirectPad(d);
  RandomSource rng(0);
  EXPECT_EQ(Encode(code, 2, 3, rng), "01");
  EXPECT_EQ(Decode(code, "01", 3), 2u);
  const auto a = Audit(code, d);
  for (double len : a.per_key_expected_length) EXPECT_DOUBLE_EQ(len, 2.0);
}

TEST(DirectPad, ThreeSymbolsUseTwoBits) {
  const auto d = JointDistribution::FromRows({{0.125, 0.0625, 0.0625},
                                              {0.0625, 0.125, 0.0625},
                                              {0.0625, 0.0625, 0.125},
                                              {0.125, 0.0625, 0.0625}});
  const auto code = BuildDirectPad(d);
  EXPECT_EQ(code.y_field_bits, 2u);
  EXPECT_EQ(code.key_size, 3u);
  const auto a = Audit(code, d);
  EXPECT_EQ(a.mi_c_x, 0.0);
  EXPECT_EQ(a.lossless_prob, 1.0);
  EXPECT_EQ(a.key_spread(), 0.0);
  RandomSource rng(4);
  for (std::size_t y = 0; y < 3; ++y)
    for (std::size_t w = 0; w < 3; ++w) {
      const auto bits = Encode(code, y, w, rng);
      EXPECT_EQ(bits, oracle::Bits((y + w) % 3, 2));
      EXPECT_EQ(Decode(code, bits, w), y);
    }
}

TEST(DirectPad, RequiresSmallY) {
  try {
    BuildDirectPad(fixtures::WorkedExample());
    FAIL() << "expected WrongRegime";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kWrongRegime);
  }
}

TEST(Decode, MalformedBits) {
  const auto d = fixtures::Independent({0.25, 0.25, 0.25, 0.25}, {0.25, 0.25, 0.25, 0.25});
  const auto code = BuildDirectPad(d);
  for (const char* bad : {"0", "011", "0a"}) {
    try {
      Decode(code, bad, 0);
      FAIL() << "expected MalformedBits for " << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kMalformedBits);
    }
  }
  const auto ex = fixtures::WorkedExample();
  const auto two = BuildTwoPart(ex, DecodableG0(ex));
  try {
    Decode(two, "1", 0);  // pad only, no symbol
    FAIL() << "expected MalformedBits";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedBits);
  }
}

TEST(Plain, LeaksOnWorkedExample) {
  const auto d = fixtures::WorkedExample();
  const auto code = BuildPlainCode(d);
  const auto a = Audit(code, d);
  EXPECT_GT(a.mi_c_x, 0.01);
  // Messages determine Y, and X = f(Y), so the leak is all of H(X).
  EXPECT_NEAR(a.mi_c_x, oracle::H({0.75, 0.25}), 1e-12);
  EXPECT_EQ(a.lossless_prob, 1.0);
}

TEST(CodecProperty, RandomMembersArePrivateAndLossless) {
  RandomSource rng(77);
  for (int i = 0; i < 60; ++i) {
    const Family f = i % 2 ? Family::kDeterministic : Family::kCommonInformation;
    const auto d = RandomInstance(f, rng, {4, 8});
    const auto mech = DecodableG0(d);
    const auto code = BuildTwoPart(d, mech);
    const auto a = Audit(code, d);
    const auto msgs = TwoPartMessages(code, d);
    EXPECT_LE(a.mi_c_x, 1e-9);
    EXPECT_NEAR(a.mi_c_x, oracle::MessageLeakage(msgs), 1e-10);
    EXPECT_EQ(a.lossless_prob, 1.0);
    EXPECT_LE(a.key_spread(), 1e-12);
    double len = 0;
    for (const auto& m : msgs) len += m.p * static_cast<double>(m.msg.size());
    EXPECT_NEAR(a.max_expected_length(), len, 1e-12);
    EXPECT_LE(len, mech.entropy() + 1 + oracle::CeilLog2(d.x_size()) + 1e-9);
    EXPECT_NEAR(a.pad_entropy, std::log2(static_cast<double>(d.x_size())), 1e-12);
    EXPECT_LE(a.mi_pad_x, 1e-12);
    for (int k = 0; k < 50; ++k) {
      const std::size_t y = rng.Categorical(d.marginal_y());
      const std::size_t w = rng.NextU64() % code.key_size;
      EXPECT_EQ(Decode(code, Encode(code, y, w, rng), w), y);
    }
  }
}

}  // namespace
