#include "zeroleak/io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "zeroleak/error.hpp"

namespace zeroleak {

namespace {

struct Token {
  std::string_view text;
  std::size_t line;
  std::size_t column;
};

[[noreturn]] void ParseFail(std::size_t line, std::size_t column, const std::string& what) {
  throw Error(ErrorCode::kParseError,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
}

double ParseReal(const Token& tok) {
  auto parse_part = [&](std::string_view s) {
    double v = 0.0;
    const char* first = s.data();
    if (!s.empty() && s.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
      ParseFail(tok.line, tok.column, "'" + std::string(tok.text) + "' is not a number");
    return v;
  };
  const auto slash = tok.text.find('/');
  if (slash == std::string_view::npos) return parse_part(tok.text);
  const double num = parse_part(tok.text.substr(0, slash));
  const double den = parse_part(tok.text.substr(slash + 1));
  if (den == 0.0) ParseFail(tok.line, tok.column, "zero denominator in '" + std::string(tok.text) + "'");
  return num / den;
}

struct Field {
  std::string name;
  std::size_t line = 0;
  std::vector<std::vector<Token>> rows;
};

std::vector<Field> SplitFields(std::string_view text) {
  std::vector<Field> fields;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      const std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i > start) tokens.push_back({line.substr(start, i - start), line_no, start + 1});
    }
    if (tokens.empty()) continue;

    if (tokens.front().text.back() == ':') {
      const std::string_view name = tokens.front().text.substr(0, tokens.front().text.size() - 1);
      if (name.empty()) ParseFail(line_no, tokens.front().column, "empty field name");
      fields.push_back({std::string(name), line_no, {}});
      tokens.erase(tokens.begin());
      if (tokens.empty()) continue;
    }
    if (fields.empty()) ParseFail(line_no, tokens.front().column, "values before any field name");
    fields.back().rows.push_back(std::move(tokens));
  }
  return fields;
}

Matrix ToMatrix(const Field& f) {
  if (f.rows.empty()) ParseFail(f.line, 1, "field '" + f.name + "' has no rows");
  const std::size_t cols = f.rows.front().size();
  Matrix m(f.rows.size(), cols);
  for (std::size_t r = 0; r < f.rows.size(); ++r) {
    const auto& row = f.rows[r];
    if (row.size() != cols)
      ParseFail(row.front().line, row.front().column,
                "row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(cols));
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = ParseReal(row[c]);
  }
  return m;
}

Vector ToVector(const Field& f) {
  Vector v;
  for (const auto& row : f.rows)
    for (const auto& tok : row) v.push_back(ParseReal(tok));
  if (v.empty()) ParseFail(f.line, 1, "field '" + f.name + "' is empty");
  return v;
}

}  // namespace

JointDistribution ParseDistribution(std::string_view text, double tol) {
  const std::vector<Field> fields = SplitFields(text);
  const Field* joint = nullptr;
  const Field* kernel = nullptr;
  const Field* p_y = nullptr;
  for (const auto& f : fields) {
    const Field** slot = nullptr;
    if (f.name == "joint") slot = &joint;
    else if (f.name == "kernel" || f.name == "x_given_y") slot = &kernel;
    else if (f.name == "p_y") slot = &p_y;
    else ParseFail(f.line, 1, "unknown field '" + f.name + "'");
    if (*slot) ParseFail(f.line, 1, "field '" + f.name + "' given twice");
    *slot = &f;
  }
  if (joint && (kernel || p_y))
    ParseFail((kernel ? kernel : p_y)->line, 1, "give either 'joint' or 'kernel' + 'p_y', not both");
  if (joint) {
    const Matrix m = ToMatrix(*joint);
    double total = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (double v : m.row(r)) total += v;
    if (std::abs(total - 1.0) > tol)
      throw Error(ErrorCode::kStochasticityError, "joint matrix sums to " + FormatExact(total));
    return JointDistribution::FromMatrix(m, tol);
  }
  if (!kernel || !p_y) ParseFail(1, 1, "expected 'joint' or both 'kernel' and 'p_y'");
  return JointDistribution::FromKernel(ToMatrix(*kernel), ToVector(*p_y), tol);
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

JointDistribution LoadDistribution(const std::string& path, double tol) {
  return ParseDistribution(ReadFile(path), tol);
}

std::string FormatExact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string JoinRow(std::span<const double> row) {
  std::string s;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) s += ' ';
    s += FormatExact(row[i]);
  }
  return s;
}

class KeyValues {
 public:
  explicit KeyValues(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (line.empty() || line.front() == '#') continue;
      const auto eq = line.find(" = ");
      if (eq == std::string_view::npos) ParseFail(line_no, 1, "expected 'key = value'");
      values_[std::string(line.substr(0, eq))] = std::string(line.substr(eq + 3));
    }
  }

  const std::string& Get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw Error(ErrorCode::kParseError, "missing key '" + key + "'");
    return it->second;
  }
  bool Has(const std::string& key) const { return values_.count(key) > 0; }

  std::size_t Size(const std::string& key) const {
    const std::string& s = Get(key);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw Error(ErrorCode::kParseError, "key '" + key + "' is not a nonnegative integer");
    return v;
  }

  Vector Row(const std::string& key, std::size_t expected) const {
    std::istringstream in(Get(key));
    Vector v;
    std::string tok;
    while (in >> tok) v.push_back(ParseReal({tok, 0, 0}));
    if (v.size() != expected)
      throw Error(ErrorCode::kParseError, "key '" + key + "' has " + std::to_string(v.size()) +
                                              " values, expected " + std::to_string(expected));
    return v;
  }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace

std::string SerializeCode(const PrivateCode& code) {
  std::ostringstream out;
  out << "format = zeroleak-code-1\n";
  out << "scheme = " << SchemeName(code.scheme) << "\n";
  out << "key_size = " << code.key_size << "\n";
  out << "pad_modulus = " << code.pad_modulus << "\n";
  out << "x_size = " << code.x_size << "\n";
  out << "y_size = " << code.y_size << "\n";
  out << "x_field_bits = " << code.x_field_bits << "\n";
  out << "y_field_bits = " << code.y_field_bits << "\n";
  for (std::size_t x = 0; x < code.x_given_y.rows(); ++x)
    out << "x_given_y." << x << " = " << JoinRow(code.x_given_y.row(x)) << "\n";
  out << "symbol_code.size = " << code.symbol_code.size() << "\n";
  for (std::size_t i = 0; i < code.symbol_code.size(); ++i)
    out << "symbol_code." << i << " = " << code.symbol_code.codewords[i] << "\n";
  if (code.scheme == Scheme::kTwoPart) {
    const Mechanism& m = code.mech;
    out << "mech.u_size = " << m.u_size() << "\n";
    out << "mech.p_u = " << JoinRow(m.p_u()) << "\n";
    for (std::size_t y = 0; y < m.y_size(); ++y)
      out << "mech.p_y_given_u." << y << " = " << JoinRow(m.p_y_given_u().row(y)) << "\n";
    for (std::size_t u = 0; u < m.u_size(); ++u)
      out << "mech.p_u_given_y." << u << " = " << JoinRow(m.p_u_given_y().row(u)) << "\n";
    for (std::size_t x = 0; x < m.x_size(); ++x) {
      out << "mech.decode." << x << " =";
      for (std::size_t u = 0; u < m.u_size(); ++u) {
        const auto y = m.Decode(x, u);
        out << ' ' << (y ? std::to_string(*y) : std::string("-"));
      }
      out << "\n";
    }
  }
  return out.str();
}

PrivateCode ParseCode(std::string_view text) {
  const KeyValues kv(text);
  if (kv.Get("format") != "zeroleak-code-1")
    throw Error(ErrorCode::kParseError, "unsupported code format '" + kv.Get("format") + "'");
  PrivateCode code;
  const std::string& scheme = kv.Get("scheme");
  if (scheme == "two_part") code.scheme = Scheme::kTwoPart;
  else if (scheme == "direct_pad") code.scheme = Scheme::kDirectPad;
  else if (scheme == "plain") code.scheme = Scheme::kPlain;
  else throw Error(ErrorCode::kParseError, "unknown scheme '" + scheme + "'");
  code.key_size = kv.Size("key_size");
  code.pad_modulus = kv.Size("pad_modulus");
  code.x_size = kv.Size("x_size");
  code.y_size = kv.Size("y_size");
  code.x_field_bits = kv.Size("x_field_bits");
  code.y_field_bits = kv.Size("y_field_bits");
  if (code.key_size == 0 || code.pad_modulus == 0 || code.x_size == 0 || code.y_size == 0)
    throw Error(ErrorCode::kParseError, "sizes must be positive");
  code.x_given_y = Matrix(code.x_size, code.y_size);
  for (std::size_t x = 0; x < code.x_size; ++x) {
    const Vector row = kv.Row("x_given_y." + std::to_string(x), code.y_size);
    for (std::size_t y = 0; y < code.y_size; ++y) code.x_given_y(x, y) = row[y];
  }
  const std::size_t ncodes = kv.Size("symbol_code.size");
  for (std::size_t i = 0; i < ncodes; ++i) code.symbol_code.codewords.push_back(kv.Get("symbol_code." + std::to_string(i)));
  for (const auto& c : code.symbol_code.codewords)
    for (char ch : c)
      if (ch != '0' && ch != '1') throw Error(ErrorCode::kParseError, "codeword '" + c + "' is not binary");
  if (!code.symbol_code.IsPrefixFree()) throw Error(ErrorCode::kParseError, "symbol code is not prefix-free");

  if (code.scheme == Scheme::kTwoPart) {
    const std::size_t nu = kv.Size("mech.u_size");
    if (nu != ncodes) throw Error(ErrorCode::kParseError, "symbol code size differs from |U|");
    Vector p_u = kv.Row("mech.p_u", nu);
    Matrix y_given_u(code.y_size, nu), u_given_y(nu, code.y_size);
    for (std::size_t y = 0; y < code.y_size; ++y) {
      const Vector row = kv.Row("mech.p_y_given_u." + std::to_string(y), nu);
      for (std::size_t u = 0; u < nu; ++u) y_given_u(y, u) = row[u];
    }
    for (std::size_t u = 0; u < nu; ++u) {
      const Vector row = kv.Row("mech.p_u_given_y." + std::to_string(u), code.y_size);
      for (std::size_t y = 0; y < code.y_size; ++y) u_given_y(u, y) = row[y];
    }
    std::vector<std::optional<std::size_t>> decode;
    for (std::size_t x = 0; x < code.x_size; ++x) {
      std::istringstream in(kv.Get("mech.decode." + std::to_string(x)));
      std::string tok;
      std::size_t count = 0;
      while (in >> tok) {
        ++count;
        if (tok == "-") {
          decode.emplace_back();
          continue;
        }
        std::size_t y = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), y);
        if (ec != std::errc() || ptr != tok.data() + tok.size() || y >= code.y_size)
          throw Error(ErrorCode::kParseError, "bad decode entry '" + tok + "'");
        decode.emplace_back(y);
      }
      if (count != nu) throw Error(ErrorCode::kParseError, "decode row " + std::to_string(x) + " has the wrong length");
    }
    code.mech = Mechanism::FromParts(code.x_size, std::move(p_u), std::move(y_given_u), std::move(u_given_y),
                                     std::move(decode));
  }
  return code;
}

}  // namespace zeroleak
