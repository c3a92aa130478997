#ifndef ZEROLEAK_CODEC_HPP_
#define ZEROLEAK_CODEC_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zeroleak/dist.hpp"
#include "zeroleak/mechanism.hpp"

namespace zeroleak {

// Bit strings are '0'/'1' characters, most significant bit first.
using BitString = std::string;

struct PrefixCode {
  std::vector<BitString> codewords;  // indexed by symbol

  std::size_t size() const { return codewords.size(); }
  double ExpectedLength(std::span<const double> p) const;
  double KraftSum() const;
  bool IsPrefixFree() const;
  std::optional<std::size_t> SymbolFor(std::string_view bits) const;
};

// Optimal prefix code; merges the two lightest subtrees, ties broken by the
// smallest symbol index they contain. A lone symbol gets the codeword "0".
PrefixCode BuildHuffman(std::span<const double> p);

// Fixed-width big-endian rendering of `value`.
BitString ToBits(std::size_t value, std::size_t width);
std::size_t FromBits(std::string_view bits);

enum class Scheme {
  kTwoPart,    // padded X then a prefix codeword of U
  kDirectPad,  // padded Y
  kPlain,      // prefix codeword of Y without a key; leaks, used as a control
};

const char* SchemeName(Scheme s);

struct PrivateCode {
  Scheme scheme = Scheme::kTwoPart;
  std::size_t key_size = 1;
  std::size_t pad_modulus = 1;
  std::size_t x_size = 0;
  std::size_t y_size = 0;
  std::size_t x_field_bits = 0;  // kTwoPart
  std::size_t y_field_bits = 0;  // kDirectPad
  PrefixCode symbol_code;        // codewords of U (kTwoPart) or Y (kPlain)
  Mechanism mech;                // kTwoPart
  Matrix x_given_y;              // lets the encoder draw X when only Y is given
};

PrivateCode BuildTwoPart(const JointDistribution& d, const Mechanism& mech);
// Throws kWrongRegime when |Y| > |X|.
PrivateCode BuildDirectPad(const JointDistribution& d);
PrivateCode BuildPlainCode(const JointDistribution& d);

// Caller-owned encoder randomness (splitmix64).
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : state_(seed) {}
  std::uint64_t NextU64();
  double NextUnit();  // uniform on [0, 1) with 53 random bits
  std::size_t Categorical(std::span<const double> p);
  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

// Encoder that observes the private symbol alongside y.
BitString EncodeJoint(const PrivateCode& code, std::size_t x, std::size_t y, std::size_t w,
                      RandomSource& rng);
// Encoder that observes y only; for kTwoPart it draws x from P_{X|Y}(.|y).
BitString Encode(const PrivateCode& code, std::size_t y, std::size_t w, RandomSource& rng);
// Throws kMalformedBits when `bits` does not parse.
std::size_t Decode(const PrivateCode& code, std::string_view bits, std::size_t w);

struct LeakageAudit {
  double mi_c_x = 0.0;          // I(C;X), bits
  double mi_c_x_given_y = 0.0;  // I(C;X|Y); zero iff X - Y - C
  double lossless_prob = 0.0;
  Vector per_key_expected_length;
  double pad_entropy = 0.0;  // H(padded field)
  double mi_pad_x = 0.0;     // I(X; padded field)
  std::size_t distinct_messages = 0;

  double max_expected_length() const;
  double key_spread() const;  // max - min of per_key_expected_length
};

// Exact enumeration over (x, y, u, w); never samples.
LeakageAudit Audit(const PrivateCode& code, const JointDistribution& d);

}  // namespace zeroleak

#endif  // ZEROLEAK_CODEC_HPP_
