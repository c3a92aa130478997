#include "zeroleak/app.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <algorithm>
#include <map>
#include <sstream>
#include <vector>

#include "zeroleak/bounds_report.hpp"
#include "zeroleak/codec.hpp"
#include "zeroleak/error.hpp"
#include "zeroleak/io.hpp"
#include "zeroleak/mechanism.hpp"

namespace zeroleak {

std::optional<Command> ParseCommand(const std::string& name) {
  static const std::map<std::string, Command> kNames{{"analyze", Command::kAnalyze},
                                                     {"mechanism", Command::kMechanism},
                                                     {"code", Command::kCode},
                                                     {"audit", Command::kAudit},
                                                     {"sweep", Command::kSweep}};
  auto it = kNames.find(name);
  if (it == kNames.end()) return std::nullopt;
  return it->second;
}

std::optional<OutputFormat> ParseFormat(const std::string& name) {
  if (name == "text") return OutputFormat::kText;
  if (name == "structured") return OutputFormat::kStructured;
  return std::nullopt;
}

namespace {

// Text output groups keys under section headings; structured output is one
// "section.key=value" line per item.
class ReportWriter {
 public:
  explicit ReportWriter(OutputFormat format) : format_(format) {}

  void Section(const std::string& name) {
    section_ = name;
    if (format_ == OutputFormat::kText) out_ << (out_.tellp() > 0 ? "\n" : "") << "[" << name << "]\n";
  }

  void Put(const std::string& key, const std::string& value) {
    if (format_ == OutputFormat::kStructured) {
      out_ << section_ << '.' << key << '=' << value << '\n';
    } else {
      out_ << "  " << key << ": " << value << '\n';
    }
  }
  void Put(const std::string& key, const char* value) { Put(key, std::string(value)); }
  void Put(const std::string& key, double v) { Put(key, Num(v)); }
  void Put(const std::string& key, std::size_t v) { Put(key, std::to_string(v)); }
  void Put(const std::string& key, bool v) { Put(key, std::string(v ? "true" : "false")); }
  void Put(const std::string& key, std::span<const double> v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + Num(v[i]);
    Put(key, s);
  }

  std::string Num(double v) const {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (format_ == OutputFormat::kText && std::abs(v) < 5e-7) v = 0.0;  // no "-0.000000"
    char buf[40];
    std::snprintf(buf, sizeof buf, format_ == OutputFormat::kStructured ? "%.12g" : "%.6f", v);
    return buf;
  }

  std::string str() const { return out_.str(); }

 private:
  OutputFormat format_;
  std::string section_;
  std::ostringstream out_;
};

class Violations {
 public:
  void Require(bool ok, const std::string& invariant) {
    if (!ok) failed_.push_back(invariant);
  }
  bool empty() const { return failed_.empty(); }
  void Write(ReportWriter& w) const {
    w.Section("invariants");
    w.Put("status", failed_.empty() ? "pass" : "fail");
    for (std::size_t i = 0; i < failed_.size(); ++i) w.Put("violated." + std::to_string(i), failed_[i]);
  }

 private:
  std::vector<std::string> failed_;
};

struct Analysis {
  Membership membership;
  std::optional<G0Solution> g0;
  std::optional<Mechanism> decodable;  // g0 mechanism with a decode table
  std::string decode_error;
  std::optional<MechanismBounds> bounds;
};

Analysis Analyze(const JointDistribution& d, const Tolerances& tol) {
  Analysis a;
  a.membership = MembershipInPhat(d, tol);
  a.g0 = SolveG0(d, tol);
  try {
    a.decodable = BuildDecodeTable(d, a.g0->mech, tol);
  } catch (const Error& e) {
    a.decode_error = e.what();
  }
  if (a.membership.member()) a.bounds = EntropyBounds(d, a.g0->mech.entropy(), tol, a.membership);
  return a;
}

void WriteDistribution(ReportWriter& w, const JointDistribution& d, const Tolerances& tol) {
  w.Section("distribution");
  w.Put("x_size", d.x_size());
  w.Put("y_size", d.y_size());
  w.Put("p_x", d.marginal_x());
  w.Put("p_y", d.marginal_y());
  w.Put("x_is_function_of_y", d.x_is_function_of_y(tol.prob));
  w.Put("y_is_function_of_x", d.y_is_function_of_x(tol.prob));

  w.Section("entropy");
  w.Put("h_x", Entropy(d.marginal_x()));
  w.Put("h_y", Entropy(d.marginal_y()));
  w.Put("h_y_given_x", ConditionalEntropyYGivenX(d));
  Vector per_x(d.x_size());
  for (std::size_t x = 0; x < d.x_size(); ++x) per_x[x] = ConditionalEntropyPerX(d, x);
  w.Put("h_y_given_x_per_x", per_x);
  w.Put("i_xy", MutualInformation(d));

  const RankNullity rn = RankAndNullity(d.x_given_y().matrix(), tol.rank);
  w.Section("leakage_matrix");
  w.Put("rank", rn.rank);
  w.Put("nullity", rn.nullity);
}

void WriteAnalysis(ReportWriter& w, const JointDistribution& d, const Analysis& a, Violations& v) {
  w.Section("membership");
  w.Put("status", MembershipStatusName(a.membership.status));
  w.Put("member", a.membership.member());
  w.Put("g0", a.membership.g0);
  w.Put("h_y_given_x", a.membership.h_y_given_x);
  w.Put("deterministic_fast_path", a.membership.via_deterministic);

  w.Section("mechanism");
  w.Put("g0_value", a.g0->value);
  w.Put("vertex_count", a.g0->vertex_count);
  w.Put("u_size", a.g0->mech.u_size());
  w.Put("h_u", a.g0->mech.entropy());
  w.Put("h_u_simplex", a.g0->simplex_entropy);
  w.Put("decodable", a.decodable.has_value());
  if (!a.decodable) w.Put("decode_error", a.decode_error);
  w.Put("zero_leakage_residual", ZeroLeakageResidual(d, a.g0->mech));
  const InformationTerms t = ComputeInformationTerms(d, a.g0->mech);
  w.Put("i_xu", t.i_xu);
  w.Put("i_uy", t.i_uy);
  w.Put("i_xu_given_y", t.i_xu_given_y);
  w.Put("h_y_given_xu", t.h_y_given_xu);
  w.Put("key_equation_residual", t.KeyEquationResidual());
  v.Require(t.i_xu <= 1e-9, "zero leakage I(X;U) <= 1e-9");
  v.Require(std::abs(t.KeyEquationResidual()) <= 1e-9, "key equation residual <= 1e-9");
  if (a.membership.member()) {
    v.Require(a.decodable.has_value(), "member mechanism is decodable");
    v.Require(std::abs(a.g0->value - a.membership.h_y_given_x) <= 1e-6, "g0 = H(Y|X) for members");
  }

  if (a.bounds) {
    const MechanismBounds& b = *a.bounds;
    w.Section("entropy_bounds");
    w.Put("k_lower", b.k_lower);
    w.Put("k_upper", b.k_upper);
    w.Put("k_upper_strengthened", b.k_upper_strengthened);
    w.Put("log_nullity_bound", b.log_nullity_bound);
    w.Put("achieved_h_u", b.achieved_entropy);
    w.Put("rank_a_xy", b.rank_a);
    w.Put("unique", b.unique);
    w.Put("degenerate", b.degenerate);
    w.Put("strengthened_fallback", b.strengthened_fallback);
    v.Require(b.k_lower - 1e-6 <= b.achieved_entropy, "k_lower <= H(U*)");
    v.Require(b.achieved_entropy <= b.k_upper_strengthened + 1e-6, "H(U*) <= k_upper_strengthened");
    v.Require(b.k_upper_strengthened <= b.log_nullity_bound + 1e-6, "k_upper_strengthened <= log(nullity+1)");
  }
}

void WriteBounds(ReportWriter& w, const BoundsReport& r, Violations& v) {
  w.Section("upper_bounds");
  for (const auto& b : r.upper) {
    std::string value = b.applicable ? w.Num(b.bits) : std::string("n/a");
    value += " (" + b.requirement + (b.prior ? ", prior" : "") + (b.surrogate ? ", surrogate" : "") +
             ", key_size=" + std::to_string(b.key_size) + ")";
    w.Put(b.name, value);
  }
  w.Section("lower_bounds");
  w.Put("key_size", r.key_size);
  for (const auto& b : r.lower)
    w.Put(b.name, (b.applicable ? w.Num(b.bits) : std::string("n/a")) + " (" + b.requirement + ")");
  w.Put("non_existence", r.non_existence);

  w.Section("comparison");
  w.Put("small_y_improvement", r.small_y_improvement);
  w.Put("deterministic_improvement", r.deterministic_improvement);
  if (r.mechanism_plus_one) w.Put("mechanism_plus_one", *r.mechanism_plus_one);
  if (r.prior_mechanism_ceiling) w.Put("prior_mechanism_ceiling", *r.prior_mechanism_ceiling);
  if (r.mechanism_plus_one && r.prior_mechanism_ceiling) {
    const bool lower = *r.mechanism_plus_one < *r.prior_mechanism_ceiling;
    w.Put("mechanism_vs_prior", w.Num(*r.mechanism_plus_one) + (lower ? " < " : " >= ") +
                                    w.Num(*r.prior_mechanism_ceiling));
  }
  if (r.achieved) w.Put("achieved_length", *r.achieved);
  for (const auto& msg : CheckConsistency(r)) v.Require(false, msg);
}

void WriteMechanismTables(ReportWriter& w, const Mechanism& m) {
  w.Section("mechanism_tables");
  w.Put("p_u", m.p_u());
  for (std::size_t u = 0; u < m.u_size(); ++u) w.Put("p_y_given_u." + std::to_string(u), m.p_y_given_u().column(u));
  if (!m.has_decode_table()) return;
  for (std::size_t x = 0; x < m.x_size(); ++x) {
    std::string row;
    for (std::size_t u = 0; u < m.u_size(); ++u) {
      const auto y = m.Decode(x, u);
      row += (u ? " " : "") + (y ? std::to_string(*y) : std::string("-"));
    }
    w.Put("decode." + std::to_string(x), row);
  }
}

void WriteAudit(ReportWriter& w, const std::string& section, const PrivateCode& code, const LeakageAudit& a) {
  w.Section(section);
  w.Put("scheme", SchemeName(code.scheme));
  w.Put("key_size", code.key_size);
  w.Put("x_field_bits", code.x_field_bits);
  w.Put("y_field_bits", code.y_field_bits);
  for (std::size_t i = 0; i < code.symbol_code.size(); ++i)
    w.Put("codeword." + std::to_string(i), code.symbol_code.codewords[i]);
  w.Put("mi_c_x", a.mi_c_x);
  w.Put("mi_c_x_given_y", a.mi_c_x_given_y);
  w.Put("lossless_prob", a.lossless_prob);
  w.Put("per_key_expected_length", a.per_key_expected_length);
  w.Put("key_spread", a.key_spread());
  w.Put("pad_entropy", a.pad_entropy);
  w.Put("mi_pad_x", a.mi_pad_x);
  w.Put("distinct_messages", a.distinct_messages);
}

void RequireAudit(Violations& v, const std::string& scheme, const LeakageAudit& a, double length_cap) {
  v.Require(a.mi_c_x <= 1e-9, scheme + ": I(C;X) <= 1e-9");
  v.Require(a.lossless_prob == 1.0, scheme + ": lossless");
  v.Require(a.key_spread() <= 1e-12, scheme + ": per-key length constant in w");
  v.Require(a.max_expected_length() <= length_cap, scheme + ": expected length within bound");
}

void WriteDemo(ReportWriter& w, const std::string& section, const PrivateCode& code, const JointDistribution& d,
               std::uint64_t seed, Violations& v) {
  w.Section(section);
  RandomSource rng(seed);
  for (std::size_t y = 0; y < d.y_size(); ++y) {
    const std::size_t key = static_cast<std::size_t>(rng.NextU64() % code.key_size);
    const BitString bits = Encode(code, y, key, rng);
    const std::size_t back = Decode(code, bits, key);
    w.Put("y" + std::to_string(y), "w=" + std::to_string(key) + " bits=" + (bits.empty() ? "<empty>" : bits) +
                                       " decoded=" + std::to_string(back));
    v.Require(back == y, section + ": round trip for y=" + std::to_string(y));
  }
}

RunResult RunSingle(const RunConfig& cfg) {
  const JointDistribution d = LoadDistribution(cfg.input_path, cfg.tol.prob);
  ReportWriter w(cfg.format);
  Violations v;
  w.Section("run");
  w.Put("command", cfg.command == Command::kAnalyze     ? "analyze"
                   : cfg.command == Command::kMechanism ? "mechanism"
                   : cfg.command == Command::kCode      ? "code"
                                                        : "audit");
  w.Put("input", cfg.input_path);
  WriteDistribution(w, d, cfg.tol);
  v.Require(std::abs(Entropy(d.marginal_y()) - ConditionalEntropyYGivenX(d) - MutualInformation(d)) <= 1e-10,
            "H(Y) = H(Y|X) + I(X;Y)");

  if (cfg.command == Command::kAudit) {
    if (cfg.code_path.empty()) throw Error(ErrorCode::kInvalidArgument, "audit needs --code PATH");
    const PrivateCode code = ParseCode(ReadFile(cfg.code_path));
    const LeakageAudit a = Audit(code, d);
    WriteAudit(w, "audit", code, a);
    double cap = std::numeric_limits<double>::infinity();
    if (code.scheme == Scheme::kTwoPart)
      cap = code.mech.entropy() + 1.0 + static_cast<double>(code.x_field_bits) + 1e-9;
    if (code.scheme == Scheme::kDirectPad) cap = static_cast<double>(code.y_field_bits) + 1e-9;
    RequireAudit(v, SchemeName(code.scheme), a, cap);
    const auto lower = LowerBounds(d, code.key_size, std::nullopt, cfg.tol);
    double floor = 0.0;
    for (const auto& b : lower)
      if (b.applicable) floor = std::max(floor, b.bits);
    v.Require(a.max_expected_length() >= floor - 1e-9, "achieved length respects converse bounds");
    v.Write(w);
    return {v.empty() ? 0 : 1, w.str()};
  }

  const Analysis a = Analyze(d, cfg.tol);
  WriteAnalysis(w, d, a, v);
  if (cfg.command == Command::kMechanism) WriteMechanismTables(w, a.decodable ? *a.decodable : a.g0->mech);

  std::optional<double> achieved_hu;
  if (a.decodable) achieved_hu = a.decodable->entropy();
  BoundsReport report = AssembleReport(d, a.bounds, achieved_hu, d.x_size(), cfg.tol);

  if (cfg.command == Command::kCode) {
    std::optional<PrivateCode> saved;
    if (a.membership.member() && a.decodable) {
      const PrivateCode code = BuildTwoPart(d, *a.decodable);
      const LeakageAudit audit = Audit(code, d);
      WriteAudit(w, "two_part", code, audit);
      RequireAudit(v, "two_part", audit,
                   a.decodable->entropy() + 1.0 + static_cast<double>(code.x_field_bits) + 1e-9);
      WriteDemo(w, "two_part_demo", code, d, cfg.seed, v);
      report.achieved = audit.max_expected_length();
      report.achieved_bound = "two_part_mechanism";
      saved = code;
    }
    if (d.y_size() <= d.x_size()) {
      const PrivateCode code = BuildDirectPad(d);
      const LeakageAudit audit = Audit(code, d);
      WriteAudit(w, "direct_pad", code, audit);
      RequireAudit(v, "direct_pad", audit, static_cast<double>(code.y_field_bits) + 1e-9);
      WriteDemo(w, "direct_pad_demo", code, d, cfg.seed, v);
      if (!saved) saved = code;
    }
    if (!saved) {
      w.Section("code");
      w.Put("status", "no applicable scheme (needs membership with a decodable mechanism, or |Y| <= |X|)");
    }
    if (saved && !cfg.save_code_path.empty()) {
      std::ofstream out(cfg.save_code_path, std::ios::binary);
      if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + cfg.save_code_path + "'");
      out << SerializeCode(*saved);
      w.Section("code");
      w.Put("saved", cfg.save_code_path);
      w.Put("saved_scheme", SchemeName(saved->scheme));
    }
  }

  WriteBounds(w, report, v);
  v.Write(w);
  return {v.empty() ? 0 : 1, w.str()};
}

RunResult RunSweep(const RunConfig& cfg) {
  ReportWriter w(cfg.format);
  w.Section("sweep");
  w.Put("family", FamilyName(cfg.family));
  w.Put("n", cfg.n);
  w.Put("seed", std::to_string(cfg.seed));
  RandomSource rng(cfg.seed);
  std::map<std::string, std::pair<std::size_t, std::size_t>> tally;  // name -> (passed, total)
  std::vector<std::string> failures;
  std::size_t members = 0;
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const JointDistribution d = RandomInstance(cfg.family, rng);
    const InstanceResult r = CheckInstance(d, cfg.family, cfg.tol);
    if (r.member) ++members;
    for (const auto& c : r.checks) {
      auto& t = tally[c.name];
      ++t.second;
      if (c.passed) {
        ++t.first;
      } else {
        failures.push_back("instance " + std::to_string(i) + " " + c.name + ": " + c.detail);
      }
    }
  }
  w.Put("members", members);
  w.Section("checks");
  for (const auto& [name, t] : tally) w.Put(name, std::to_string(t.first) + "/" + std::to_string(t.second));
  w.Section("invariants");
  w.Put("status", failures.empty() ? "pass" : "fail");
  for (std::size_t i = 0; i < failures.size(); ++i) w.Put("violated." + std::to_string(i), failures[i]);
  return {failures.empty() ? 0 : 1, w.str()};
}

}  // namespace

RunResult Run(const RunConfig& config) {
  if (config.tol.prob <= 0 || config.tol.lp <= 0 || config.tol.ent <= 0 || config.tol.vertex <= 0 ||
      config.tol.rank <= 0)
    throw Error(ErrorCode::kInvalidArgument, "tolerances must be positive");
  if (config.command == Command::kSweep) return RunSweep(config);
  if (config.input_path.empty()) throw Error(ErrorCode::kInvalidArgument, "--input is required");
  return RunSingle(config);
}

}  // namespace zeroleak
