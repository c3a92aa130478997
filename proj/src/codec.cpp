#include "zeroleak/codec.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <string>
#include <tuple>

#include "zeroleak/error.hpp"

namespace zeroleak {

double PrefixCode::ExpectedLength(std::span<const double> p) const {
  if (p.size() != codewords.size()) throw Error(ErrorCode::kBadShape, "distribution/code size mismatch");
  double l = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) l += p[i] * static_cast<double>(codewords[i].size());
  return l;
}

double PrefixCode::KraftSum() const {
  double s = 0.0;
  for (const auto& c : codewords) s += std::ldexp(1.0, -static_cast<int>(c.size()));
  return s;
}

bool PrefixCode::IsPrefixFree() const {
  for (std::size_t i = 0; i < codewords.size(); ++i)
    for (std::size_t j = 0; j < codewords.size(); ++j) {
      if (i == j) continue;
      const auto& a = codewords[i];
      const auto& b = codewords[j];
      if (a.size() <= b.size() && b.compare(0, a.size(), a) == 0) return false;
    }
  return true;
}

std::optional<std::size_t> PrefixCode::SymbolFor(std::string_view bits) const {
  for (std::size_t i = 0; i < codewords.size(); ++i)
    if (codewords[i] == bits) return i;
  return std::nullopt;
}

PrefixCode BuildHuffman(std::span<const double> p) {
  if (p.empty()) throw Error(ErrorCode::kInvalidArgument, "Huffman code needs at least one symbol");
  PrefixCode code;
  code.codewords.assign(p.size(), "");
  if (p.size() == 1) {
    code.codewords[0] = "0";
    return code;
  }

  struct Node {
    double prob;
    std::size_t min_symbol;
    int left = -1, right = -1;
  };
  std::vector<Node> nodes;
  using Key = std::tuple<double, std::size_t, std::size_t>;  // prob, min symbol, node id
  std::priority_queue<Key, std::vector<Key>, std::greater<>> heap;
  for (std::size_t i = 0; i < p.size(); ++i) {
    nodes.push_back({p[i], i});
    heap.emplace(p[i], i, i);
  }
  while (heap.size() > 1) {
    const auto [pa, sa, a] = heap.top();
    heap.pop();
    const auto [pb, sb, b] = heap.top();
    heap.pop();
    nodes.push_back({pa + pb, std::min(sa, sb), static_cast<int>(a), static_cast<int>(b)});
    heap.emplace(pa + pb, std::min(sa, sb), nodes.size() - 1);
  }

  std::vector<std::pair<std::size_t, BitString>> stack{{std::get<2>(heap.top()), ""}};
  while (!stack.empty()) {
    auto [id, prefix] = std::move(stack.back());
    stack.pop_back();
    const Node& n = nodes[id];
    if (n.left < 0) {
      code.codewords[id] = prefix;
      continue;
    }
    stack.emplace_back(static_cast<std::size_t>(n.right), prefix + "1");
    stack.emplace_back(static_cast<std::size_t>(n.left), prefix + "0");
  }
  return code;
}

BitString ToBits(std::size_t value, std::size_t width) {
  BitString s(width, '0');
  for (std::size_t i = 0; i < width; ++i)
    if ((value >> (width - 1 - i)) & 1u) s[i] = '1';
  return s;
}

std::size_t FromBits(std::string_view bits) {
  std::size_t v = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw Error(ErrorCode::kMalformedBits, "bit strings may only contain '0' and '1'");
    v = (v << 1) | static_cast<std::size_t>(c == '1');
  }
  return v;
}

const char* SchemeName(Scheme s) {
  switch (s) {
    case Scheme::kTwoPart: return "two_part";
    case Scheme::kDirectPad: return "direct_pad";
    case Scheme::kPlain: return "plain";
  }
  return "unknown";
}

PrivateCode BuildTwoPart(const JointDistribution& d, const Mechanism& mech) {
  if (!mech.has_decode_table())
    throw Error(ErrorCode::kIncompleteMechanism, "two-part code needs a mechanism with a decode table");
  if (mech.x_size() != d.x_size() || mech.y_size() != d.y_size())
    throw Error(ErrorCode::kBadShape, "mechanism does not match the joint distribution");
  PrivateCode code;
  code.scheme = Scheme::kTwoPart;
  code.key_size = d.x_size();
  code.pad_modulus = d.x_size();
  code.x_size = d.x_size();
  code.y_size = d.y_size();
  code.x_field_bits = CeilLog2(d.x_size());
  code.symbol_code = BuildHuffman(mech.p_u());
  code.mech = mech;
  code.x_given_y = d.x_given_y().matrix();
  return code;
}

PrivateCode BuildDirectPad(const JointDistribution& d) {
  if (d.y_size() > d.x_size())
    throw Error(ErrorCode::kWrongRegime, "direct pad needs |Y| <= |X| (got |Y|=" + std::to_string(d.y_size()) +
                                             ", |X|=" + std::to_string(d.x_size()) + ")");
  PrivateCode code;
  code.scheme = Scheme::kDirectPad;
  code.key_size = d.y_size();
  code.pad_modulus = d.y_size();
  code.x_size = d.x_size();
  code.y_size = d.y_size();
  code.y_field_bits = CeilLog2(d.y_size());
  code.x_given_y = d.x_given_y().matrix();
  return code;
}

PrivateCode BuildPlainCode(const JointDistribution& d) {
  PrivateCode code;
  code.scheme = Scheme::kPlain;
  code.key_size = 1;
  code.pad_modulus = 1;
  code.x_size = d.x_size();
  code.y_size = d.y_size();
  code.symbol_code = BuildHuffman(d.marginal_y());
  code.x_given_y = d.x_given_y().matrix();
  return code;
}

std::uint64_t RandomSource::NextU64() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double RandomSource::NextUnit() { return static_cast<double>(NextU64() >> 11) * 0x1.0p-53; }

std::size_t RandomSource::Categorical(std::span<const double> p) {
  const double r = NextUnit();
  double acc = 0.0;
  std::size_t last = p.size();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    acc += p[i];
    last = i;
    if (r < acc) return i;
  }
  if (last == p.size()) throw Error(ErrorCode::kInvalidArgument, "categorical distribution has no mass");
  return last;
}

namespace {

void CheckKey(const PrivateCode& code, std::size_t w) {
  if (w >= code.key_size)
    throw Error(ErrorCode::kInvalidArgument,
                "key " + std::to_string(w) + " outside {0.." + std::to_string(code.key_size - 1) + "}");
}

BitString EncodeTwoPart(const PrivateCode& code, std::size_t x, std::size_t u, std::size_t w) {
  return ToBits((x + w) % code.pad_modulus, code.x_field_bits) + code.symbol_code.codewords[u];
}

BitString EncodeDirect(const PrivateCode& code, std::size_t y, std::size_t w) {
  return ToBits((y + w) % code.pad_modulus, code.y_field_bits);
}

}  // namespace

BitString EncodeJoint(const PrivateCode& code, std::size_t x, std::size_t y, std::size_t w,
                      RandomSource& rng) {
  if (y >= code.y_size || x >= code.x_size) throw Error(ErrorCode::kInvalidArgument, "symbol out of range");
  CheckKey(code, w);
  switch (code.scheme) {
    case Scheme::kTwoPart: {
      if (code.x_given_y(x, y) <= 0.0)
        throw Error(ErrorCode::kInvalidArgument, "pair (x, y) has zero probability");
      const Vector p_u = code.mech.p_u_given_y().column(y);
      return EncodeTwoPart(code, x, rng.Categorical(p_u), w);
    }
    case Scheme::kDirectPad: return EncodeDirect(code, y, w);
    case Scheme::kPlain: return code.symbol_code.codewords[y];
  }
  throw Error(ErrorCode::kInternalError, "unknown scheme");
}

BitString Encode(const PrivateCode& code, std::size_t y, std::size_t w, RandomSource& rng) {
  if (y >= code.y_size) throw Error(ErrorCode::kInvalidArgument, "symbol out of range");
  std::size_t x = 0;
  if (code.scheme == Scheme::kTwoPart) x = rng.Categorical(code.x_given_y.column(y));
  return EncodeJoint(code, x, y, w, rng);
}

std::size_t Decode(const PrivateCode& code, std::string_view bits, std::size_t w) {
  CheckKey(code, w);
  for (char c : bits)
    if (c != '0' && c != '1') throw Error(ErrorCode::kMalformedBits, "bit strings may only contain '0' and '1'");
  switch (code.scheme) {
    case Scheme::kTwoPart: {
      if (bits.size() < code.x_field_bits) throw Error(ErrorCode::kMalformedBits, "message shorter than the pad field");
      const std::size_t padded = FromBits(bits.substr(0, code.x_field_bits));
      if (padded >= code.pad_modulus) throw Error(ErrorCode::kMalformedBits, "pad field out of range");
      const std::size_t x = (padded + code.pad_modulus - w) % code.pad_modulus;
      const auto u = code.symbol_code.SymbolFor(bits.substr(code.x_field_bits));
      if (!u) throw Error(ErrorCode::kMalformedBits, "second field is not a codeword");
      const auto y = code.mech.Decode(x, *u);
      if (!y) throw Error(ErrorCode::kMalformedBits, "(x, u) pair never occurs");
      return *y;
    }
    case Scheme::kDirectPad: {
      if (bits.size() != code.y_field_bits) throw Error(ErrorCode::kMalformedBits, "wrong message width");
      const std::size_t padded = FromBits(bits);
      if (padded >= code.pad_modulus) throw Error(ErrorCode::kMalformedBits, "padded value out of range");
      return (padded + code.pad_modulus - w) % code.pad_modulus;
    }
    case Scheme::kPlain: {
      const auto y = code.symbol_code.SymbolFor(bits);
      if (!y) throw Error(ErrorCode::kMalformedBits, "not a codeword");
      return *y;
    }
  }
  throw Error(ErrorCode::kInternalError, "unknown scheme");
}

double LeakageAudit::max_expected_length() const {
  return per_key_expected_length.empty()
             ? 0.0
             : *std::max_element(per_key_expected_length.begin(), per_key_expected_length.end());
}

double LeakageAudit::key_spread() const {
  if (per_key_expected_length.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(per_key_expected_length.begin(), per_key_expected_length.end());
  return *hi - *lo;
}

namespace {

double MutualInformationOf(const std::map<BitString, Vector>& joint_cx, std::size_t nx) {
  Vector p_x(nx, 0.0);
  std::map<BitString, double> p_c;
  for (const auto& [c, row] : joint_cx)
    for (std::size_t x = 0; x < nx; ++x) {
      p_x[x] += row[x];
      p_c[c] += row[x];
    }
  double mi = 0.0;
  for (const auto& [c, row] : joint_cx)
    for (std::size_t x = 0; x < nx; ++x)
      if (row[x] > 0.0) mi += row[x] * std::log2(row[x] / (p_c[c] * p_x[x]));
  return std::max(mi, 0.0);
}

}  // namespace

LeakageAudit Audit(const PrivateCode& code, const JointDistribution& d) {
  if (d.x_size() != code.x_size || d.y_size() != code.y_size)
    throw Error(ErrorCode::kBadShape, "code does not match the joint distribution");
  const std::size_t nx = d.x_size(), ny = d.y_size(), m = code.key_size;
  const double key_mass = 1.0 / static_cast<double>(m);

  LeakageAudit audit;
  audit.per_key_expected_length.assign(m, 0.0);
  std::map<BitString, Vector> joint_cx;
  std::map<std::pair<std::size_t, BitString>, Vector> joint_ycx;
  std::map<std::size_t, Vector> joint_pad_x;
  double failure_mass = 0.0;

  auto record = [&](std::size_t x, std::size_t y, std::size_t w, std::size_t pad, const BitString& c,
                    double mass) {
    auto& row = joint_cx[c];
    if (row.empty()) row.assign(nx, 0.0);
    row[x] += mass;
    auto& yrow = joint_ycx[{y, c}];
    if (yrow.empty()) yrow.assign(nx, 0.0);
    yrow[x] += mass;
    auto& prow = joint_pad_x[pad];
    if (prow.empty()) prow.assign(nx, 0.0);
    prow[x] += mass;
    audit.per_key_expected_length[w] += (mass / key_mass) * static_cast<double>(c.size());
    bool ok = false;
    try {
      ok = Decode(code, c, w) == y;
    } catch (const Error&) {
      ok = false;
    }
    if (!ok) failure_mass += mass;
  };

  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      const double pxy = d(x, y);
      if (pxy <= 0.0) continue;
      for (std::size_t w = 0; w < m; ++w) {
        const double base = pxy * key_mass;
        switch (code.scheme) {
          case Scheme::kTwoPart:
            for (std::size_t u = 0; u < code.mech.u_size(); ++u) {
              const double pu = code.mech.p_u_given_y()(u, y);
              if (pu <= 0.0) continue;
              record(x, y, w, (x + w) % code.pad_modulus, EncodeTwoPart(code, x, u, w), base * pu);
            }
            break;
          case Scheme::kDirectPad: {
            const std::size_t pad = (y + w) % code.pad_modulus;
            record(x, y, w, pad, EncodeDirect(code, y, w), base);
            break;
          }
          case Scheme::kPlain:
            record(x, y, w, 0, code.symbol_code.codewords[y], base);
            break;
        }
      }
    }

  audit.mi_c_x = MutualInformationOf(joint_cx, nx);
  audit.distinct_messages = joint_cx.size();
  audit.lossless_prob = failure_mass > 0.0 ? std::max(0.0, 1.0 - failure_mass) : 1.0;

  // I(X;C|Y) = sum_y P(y) I(X;C | Y=y)
  double mi_cond = 0.0;
  for (std::size_t y = 0; y < ny; ++y) {
    std::map<BitString, Vector> slice;
    double py = 0.0;
    for (const auto& [key, row] : joint_ycx) {
      if (key.first != y) continue;
      slice[key.second] = row;
      for (double v : row) py += v;
    }
    if (py <= 0.0) continue;
    for (auto& [c, row] : slice)
      for (double& v : row) v /= py;
    mi_cond += py * MutualInformationOf(slice, nx);
  }
  audit.mi_c_x_given_y = mi_cond;

  std::map<BitString, Vector> pad_as_message;
  Vector pad_marginal;
  for (const auto& [pad, row] : joint_pad_x) {
    pad_as_message[ToBits(pad, 64)] = row;
    double s = 0.0;
    for (double v : row) s += v;
    pad_marginal.push_back(s);
  }
  audit.pad_entropy = Entropy(pad_marginal);
  audit.mi_pad_x = MutualInformationOf(pad_as_message, nx);
  return audit;
}

}  // namespace zeroleak
