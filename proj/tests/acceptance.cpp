// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "zeroleak/bounds_report.hpp"
#include "zeroleak/codec.hpp"
#include "zeroleak/io.hpp"
#include "zeroleak/mechanism.hpp"
#include "zeroleak/sweep.hpp"

using namespace zeroleak;

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct Criterion {
  int id;
  std::string title;
  bool ok = true;
  std::string note;       // summary shown on the result line
  std::string first_bad;  // first failing detail

  void Require(bool cond, const std::string& what) {
    if (!cond && ok) first_bad = what;
    ok = ok && cond;
  }
};

std::string Fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string Fmt(double v) { return Fmt("%.6g", v); }

// Terms of the key equation recomputed from the (x, y, u) joint without the library.
oracle::TripleInfo IndependentTerms(const JointDistribution& d, const Mechanism& m) {
  oracle::Triple t{d.x_size(), d.y_size(), m.u_size(), std::vector<double>(d.x_size() * d.y_size() * m.u_size())};
  for (std::size_t x = 0; x < d.x_size(); ++x)
    for (std::size_t y = 0; y < d.y_size(); ++y)
      for (std::size_t u = 0; u < m.u_size(); ++u) t.at(x, y, u) = d(x, y) * m.p_u_given_y()(u, y);
  return oracle::Info(t);
}

struct Synthesized {
  JointDistribution d;
  Mechanism mech;  // with decode table
  MechanismBounds bounds;
};

struct AchievedCode {
  std::string label;
  JointDistribution d;
  PrivateCode code;
  LeakageAudit audit;
};

void PrintResult(const Criterion& c) {
  std::printf("%s  %d. %s: %s%s\n", c.ok ? "PASS" : "FAIL", c.id, c.title.c_str(), c.note.c_str(),
              c.ok ? "" : ("; first failure: " + c.first_bad).c_str());
}

}  // namespace

int main(int argc, char** argv) {
  const std::string data_dir = argc > 1 ? argv[1] : ZEROLEAK_DATA_DIR;
  const Tolerances tol;
  std::vector<Criterion> results;
  std::vector<Synthesized> synthesized;
  std::vector<AchievedCode> achieved;

  // 1. Worked example.
  {
    Criterion c{1, "worked example (kernel [[1,1,1,0,0,0],[0,0,0,1,1,1]], P_Y=[1/8,2/8,3/8,1/8,1/16,1/16])"};
    const auto start = Clock::now();
    const JointDistribution d = LoadDistribution(data_dir + "/worked_example.txt");
    const Membership mem = MembershipInPhat(d, tol);
    const G0Solution g0 = SolveG0(d, tol);
    const Mechanism mech = BuildDecodeTable(d, g0.mech, tol);
    const MechanismBounds b = EntropyBounds(d, mech.entropy(), tol, mem);
    const BoundsReport report = AssembleReport(d, b, mech.entropy(), d.x_size(), tol);
    const double elapsed = Seconds(start);
    const auto t = IndependentTerms(d, mech);
    const double hyx = oracle::CondH(oracle::JointFromKernel({{1, 1, 1, 0, 0, 0}, {0, 0, 0, 1, 1, 1}},
                                                              {1.0 / 8, 2.0 / 8, 3.0 / 8, 1.0 / 8, 1.0 / 16, 1.0 / 16}));
    c.Require(mem.member(), "membership");
    c.Require(std::abs(g0.value - hyx) <= 1e-6, "g0 = H(Y|X)");
    c.Require(std::abs(t.i_xu) <= 1e-9, "I(X;U) <= 1e-9");
    c.Require(t.h_y_given_xu <= 1e-9, "H(Y|X,U) <= 1e-9");
    c.Require(mech.entropy() <= 1.9591 + 1e-3, "H(U*) <= 1.9591");
    c.Require(report.mechanism_plus_one && *report.mechanism_plus_one <= 2.9591 + 1e-3, "H(U*)+1 <= 2.9591");
    c.Require(report.prior_mechanism_ceiling && *report.prior_mechanism_ceiling == 3.0, "ceil log 5 = 3");
    c.Require(report.deterministic_improvement && *report.mechanism_plus_one < *report.prior_mechanism_ceiling,
              "H(U*)+1 < 3");
    c.Require(elapsed < 1.0, "runtime < 1 s");
    c.note = "g0=" + Fmt("%.7f", g0.value) + " H(Y|X)=" + Fmt("%.7f", hyx) + " H(U*)=" + Fmt("%.4f", mech.entropy()) +
             " report: " + Fmt("%.4f", report.mechanism_plus_one.value_or(NAN)) + " < " +
             Fmt("%.0f", report.prior_mechanism_ceiling.value_or(NAN)) + " runtime=" + Fmt("%.4f", elapsed) + "s";
    results.push_back(c);
    synthesized.push_back({d, mech, b});
  }

  // 2 and 3. Random X = f(Y) instances.
  RandomSource rng(20240601);
  std::vector<JointDistribution> det;
  for (int i = 0; i < 200; ++i) det.push_back(RandomInstance(Family::kDeterministic, rng, {4, 10}));
  {
    Criterion c2{2, "nullity(P_X|Y) = |Y|-|X| on 200 random X=f(Y) instances"};
    Criterion c3{3, "k_lower <= H(U*) <= k_upper_strengthened <= log(nullity+1) on the same 200"};
    const auto start = Clock::now();
    std::size_t fallbacks = 0;
    for (std::size_t i = 0; i < det.size(); ++i) {
      const auto& d = det[i];
      const std::string tag = "instance " + std::to_string(i);
      bool full_px = std::all_of(d.marginal_x().begin(), d.marginal_x().end(), [](double p) { return p > 0; });
      c2.Require(full_px && d.x_size() <= 4 && d.y_size() <= 10, tag + " shape");
      const auto rn = RankAndNullity(d.x_given_y().matrix(), tol.rank);
      c2.Require(rn.nullity == d.y_size() - d.x_size(), tag + " nullity " + std::to_string(rn.nullity));

      const Membership mem = MembershipInPhat(d, tol);
      const G0Solution g0 = SolveG0(d, tol);
      const Mechanism mech = BuildDecodeTable(d, g0.mech, tol);
      const MechanismBounds b = EntropyBounds(d, mech.entropy(), tol, mem);
      if (b.strengthened_fallback) ++fallbacks;
      const double h = mech.entropy();
      c3.Require(b.k_lower - 1e-6 <= h, tag + " k_lower=" + Fmt(b.k_lower) + " > H(U*)=" + Fmt(h));
      c3.Require(h <= b.k_upper_strengthened + 1e-6, tag + " H(U*)=" + Fmt(h) + " > k_up=" + Fmt(b.k_upper_strengthened));
      c3.Require(b.k_upper_strengthened <= b.log_nullity_bound,
                 tag + " k_up - log(null+1) = " + Fmt("%.3e", b.k_upper_strengthened - b.log_nullity_bound));
      c3.Require(std::abs(b.log_nullity_bound - std::log2(static_cast<double>(rn.nullity) + 1)) < 1e-12,
                 tag + " log(null+1)");
      synthesized.push_back({d, mech, b});
    }
    const double elapsed = Seconds(start);
    c2.Require(elapsed < 5.0, "runtime < 5 s");
    c2.note = "200/200 checked, rank+synthesis+bounds runtime=" + Fmt("%.3f", elapsed) + "s";
    c3.note = "200 instances, strengthened-LP fallbacks=" + std::to_string(fallbacks);
    results.push_back(c2);
    results.push_back(c3);
  }

  // 4. Key equation on every mechanism from 1-3.
  {
    Criterion c{4, "key equation I(U;Y) = I(X;U) + H(Y|X) - I(X;U|Y) - H(Y|X,U)"};
    double worst = 0.0;
    for (std::size_t i = 0; i < synthesized.size(); ++i) {
      const auto& s = synthesized[i];
      const InformationTerms t = ComputeInformationTerms(s.d, s.mech);
      const auto o = IndependentTerms(s.d, s.mech);
      const double hyx = oracle::CondH([&] {
        oracle::Table tab(s.d.x_size(), std::vector<double>(s.d.y_size()));
        for (std::size_t x = 0; x < s.d.x_size(); ++x)
          for (std::size_t y = 0; y < s.d.y_size(); ++y) tab[x][y] = s.d(x, y);
        return tab;
      }());
      const double oracle_residual = o.i_uy - o.i_xu - hyx + o.i_xu_given_y + o.h_y_given_xu;
      worst = std::max({worst, std::abs(t.KeyEquationResidual()), std::abs(oracle_residual)});
      c.Require(std::abs(t.KeyEquationResidual()) <= 1e-9 && std::abs(oracle_residual) <= 1e-9,
                "mechanism " + std::to_string(i));
    }
    c.note = std::to_string(synthesized.size()) + " mechanisms, max |residual|=" + Fmt("%.2e", worst);
    results.push_back(c);
  }

  // 5. Two-part code.
  {
    Criterion c{5, "two-part code: I(C;X)=0, lossless, key-independent length within H(U*)+1+ceil log|X|"};
    std::vector<Synthesized> members{synthesized.front()};
    RandomSource crng(777);
    for (int i = 0; i < 50; ++i) {
      const Family f = i % 2 ? Family::kDeterministic : Family::kCommonInformation;
      const auto d = RandomInstance(f, crng, {4, 10});
      const Membership mem = MembershipInPhat(d, tol);
      c.Require(mem.member(), "random instance " + std::to_string(i) + " not a member");
      if (!mem.member()) continue;
      const Mechanism mech = BuildDecodeTable(d, SolveG0(d, tol).mech, tol);
      members.push_back({d, mech, EntropyBounds(d, mech.entropy(), tol, mem)});
    }
    double worst_mi = 0.0, worst_spread = 0.0;
    for (std::size_t i = 0; i < members.size(); ++i) {
      const auto& s = members[i];
      const PrivateCode code = BuildTwoPart(s.d, s.mech);
      const LeakageAudit a = Audit(code, s.d);
      const std::string tag = i == 0 ? "worked example" : "instance " + std::to_string(i);
      worst_mi = std::max(worst_mi, a.mi_c_x);
      worst_spread = std::max(worst_spread, a.key_spread());
      c.Require(a.mi_c_x <= 1e-9, tag + " I(C;X)=" + Fmt(a.mi_c_x));
      c.Require(a.lossless_prob == 1.0, tag + " lossless_prob=" + Fmt("%.17g", a.lossless_prob));
      c.Require(a.key_spread() <= 1e-12, tag + " spread=" + Fmt(a.key_spread()));
      const double cap = s.mech.entropy() + 1.0 + static_cast<double>(oracle::CeilLog2(s.d.x_size())) + 1e-9;
      c.Require(a.max_expected_length() <= cap, tag + " length " + Fmt(a.max_expected_length()) + " > " + Fmt(cap));
      achieved.push_back({tag, s.d, code, a});
    }
    const auto& ex = synthesized.front().d;
    const LeakageAudit plain = Audit(BuildPlainCode(ex), ex);
    c.Require(plain.mi_c_x > 0.01, "negative control leaked only " + Fmt(plain.mi_c_x));
    c.note = std::to_string(members.size()) + " codes, max I(C;X)=" + Fmt("%.2e", worst_mi) + ", max spread=" +
             Fmt("%.2e", worst_spread) + ", unpadded Huffman-on-Y leaks " + Fmt("%.4f", plain.mi_c_x) + " bits";
    results.push_back(c);
  }

  // 6. Direct pad when |Y| <= |X|.
  {
    Criterion c{6, "direct pad for |Y|<=|X|: ceil log|Y| bits always, I(C;X)=0, beats prior bound"};
    RandomSource drng(4242);
    std::size_t flagged = 0;
    for (int i = 0; i < 50; ++i) {
      const auto d = RandomInstance(Family::kSmallY, drng, {8, 8});
      const std::string tag = "instance " + std::to_string(i);
      c.Require(d.y_size() <= d.x_size() && d.y_size() <= 8, tag + " shape");
      const PrivateCode code = BuildDirectPad(d);
      const std::size_t width = oracle::CeilLog2(d.y_size());
      RandomSource erng(static_cast<std::uint64_t>(i));
      for (std::size_t y = 0; y < d.y_size(); ++y)
        for (std::size_t w = 0; w < code.key_size; ++w) {
          const BitString bits = Encode(code, y, w, erng);
          c.Require(bits.size() == width, tag + " message length");
          c.Require(Decode(code, bits, w) == y, tag + " round trip");
        }
      const LeakageAudit a = Audit(code, d);
      c.Require(a.mi_c_x <= 1e-12, tag + " I=" + Fmt(a.mi_c_x));
      c.Require(a.lossless_prob == 1.0, tag + " lossless");
      for (double len : a.per_key_expected_length)
        c.Require(std::abs(len - static_cast<double>(width)) <= 1e-12, tag + " per-key length " + Fmt("%.17g", len));
      const BoundsReport r = AssembleReport(d, std::nullopt, std::nullopt, d.x_size(), tol);
      const BoundEntry* pad = FindBound(r.upper, "direct_pad");
      const BoundEntry* prior = FindBound(r.upper, "functional_representation");
      if (width <= oracle::CeilLog2(d.x_size())) {
        c.Require(pad->bits <= prior->bits, tag + " direct pad above prior bound");
        c.Require(r.small_y_improvement, tag + " improvement flag");
        ++flagged;
      }
      achieved.push_back({tag + " (direct pad)", d, code, a});
    }
    c.note = "50 instances, improvement flag set on " + std::to_string(flagged);
    results.push_back(c);
  }

  // 7. Converse bounds.
  {
    Criterion c{7, "achieved lengths respect converse bounds; non-existence iff X=f(Y) and M<|X|"};
    double min_gap = 1e300;
    std::string tightest;
    std::size_t flag_checks = 0;
    for (const auto& a : achieved) {
      const auto lower = LowerBounds(a.d, a.code.key_size, std::nullopt, tol);
      double floor = FindBound(lower, "max_conditional_entropy")->bits;
      const BoundEntry* alpha = FindBound(lower, "log_private_alphabet");
      if (alpha->applicable) floor = std::max(floor, alpha->bits);
      for (double len : a.audit.per_key_expected_length) {
        c.Require(len >= floor - 1e-9, a.label + " length " + Fmt(len) + " < " + Fmt(floor));
        if (len - floor < min_gap) {
          min_gap = len - floor;
          tightest = a.label;
        }
      }
      const bool x_det = a.d.x_is_function_of_y(tol.prob);
      for (std::size_t m = 1; m <= a.d.x_size() + 1; ++m) {
        const bool expect = x_det && m < a.d.x_size();
        c.Require(CodeCannotExist(a.d, m, tol) == expect, a.label + " flag at M=" + std::to_string(m));
        c.Require(AssembleReport(a.d, std::nullopt, std::nullopt, m, tol).non_existence == expect,
                  a.label + " report flag at M=" + std::to_string(m));
        ++flag_checks;
      }
    }
    c.note = std::to_string(achieved.size()) + " codes, min slack=" + Fmt("%.3g", min_gap) + " bits (" + tightest + "), " +
             std::to_string(flag_checks) + " flag checks";
    results.push_back(c);
  }

  // 8. Unique-optimizer clause.
  {
    Criterion c{8, "unique optimizer: k_lower = k_upper_strengthened = H(U*) when rank(A_XY)=|Y|, Y!=f(X)"};
    RandomSource urng(88);
    std::size_t wide = 0, full_rank = 0, not_y_det = 0, members = 0;
    for (int i = 0; i < 500; ++i) {
      const auto d = RandomInstance(Family::kCommonInformation, urng, {9, 10});
      if (d.x_size() < d.y_size() + 1) continue;
      ++wide;
      const BoundMatrices bm = BuildBoundMatrices(d);
      if (RankAndNullity(bm.a_xy, tol.rank).rank != d.y_size()) continue;
      ++full_rank;
      if (d.y_is_function_of_x(tol.prob)) continue;
      ++not_y_det;
      const Membership mem = MembershipInPhat(d, tol);
      if (!mem.member()) continue;
      ++members;
      const Mechanism mech = SolveG0(d, tol).mech;
      const MechanismBounds b = EntropyBounds(d, mech.entropy(), tol, mem);
      c.Require(std::abs(b.k_lower - b.k_upper_strengthened) <= 1e-6 &&
                    std::abs(b.k_lower - mech.entropy()) <= 1e-6,
                "instance " + std::to_string(i));
    }
    const std::string counts = "500 drawn, |X|>=|Y|+1: " + std::to_string(wide) + ", rank(A_XY)=|Y|: " +
                               std::to_string(full_rank) + ", Y!=f(X): " + std::to_string(not_y_det) +
                               ", member: " + std::to_string(members);
    c.note = members == 0 ? "vacuous (" + counts + ")" : counts;
    results.push_back(c);
  }

  bool all = true;
  for (const auto& c : results) {
    PrintResult(c);
    all = all && c.ok;
  }
  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
