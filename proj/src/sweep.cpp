#include "zeroleak/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "zeroleak/bounds_report.hpp"
#include "zeroleak/error.hpp"
#include "zeroleak/mechanism.hpp"

namespace zeroleak {

const char* FamilyName(Family f) {
  switch (f) {
    case Family::kDeterministic: return "det-f";
    case Family::kCommonInformation: return "common-info";
    case Family::kInvertible: return "invertible";
    case Family::kSmallY: return "small-y";
  }
  return "unknown";
}

std::optional<Family> ParseFamily(std::string_view name) {
  for (Family f : {Family::kDeterministic, Family::kCommonInformation, Family::kInvertible, Family::kSmallY})
    if (name == FamilyName(f)) return f;
  return std::nullopt;
}

namespace {

std::size_t UniformInt(RandomSource& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.NextU64() % (hi - lo + 1));
}

// Flat Dirichlet draw, floored away from zero so every symbol keeps mass.
Vector RandomSimplexPoint(RandomSource& rng, std::size_t n) {
  Vector v(n);
  for (double& x : v) x = -std::log(1.0 - rng.NextUnit()) + 0.05;
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  for (double& x : v) x /= total;
  return v;
}

}  // namespace

JointDistribution RandomInstance(Family family, RandomSource& rng, const InstanceLimits& limits) {
  switch (family) {
    case Family::kDeterministic: {
      const std::size_t nx = UniformInt(rng, 2, std::max<std::size_t>(2, limits.max_x));
      const std::size_t ny = UniformInt(rng, nx, std::max(nx, limits.max_y));
      std::vector<std::size_t> f(ny);
      for (std::size_t y = 0; y < ny; ++y) f[y] = y < nx ? y : UniformInt(rng, 0, nx - 1);
      for (std::size_t i = ny; i > 1; --i) std::swap(f[i - 1], f[UniformInt(rng, 0, i - 1)]);
      const Vector p_y = RandomSimplexPoint(rng, ny);
      Matrix joint(nx, ny);
      for (std::size_t y = 0; y < ny; ++y) joint(f[y], y) = p_y[y];
      return JointDistribution::FromMatrix(joint);
    }
    case Family::kCommonInformation: {
      const std::size_t nv = UniformInt(rng, 2, 3);
      const std::size_t n1 = UniformInt(rng, 1, 3);
      const std::size_t n2 = UniformInt(rng, 2, std::max<std::size_t>(2, limits.max_y / nv));
      const Vector p_v = RandomSimplexPoint(rng, nv);
      Matrix joint(nv * n1, nv * n2);
      for (std::size_t v = 0; v < nv; ++v) {
        const Vector a = RandomSimplexPoint(rng, n1);
        const Vector b = RandomSimplexPoint(rng, n2);
        for (std::size_t i = 0; i < n1; ++i)
          for (std::size_t j = 0; j < n2; ++j) joint(v * n1 + i, v * n2 + j) = p_v[v] * a[i] * b[j];
      }
      return JointDistribution::FromMatrix(joint);
    }
    case Family::kInvertible: {
      const std::size_t n = UniformInt(rng, 2, std::max<std::size_t>(2, std::min(limits.max_x, limits.max_y)));
      const Vector p_y = RandomSimplexPoint(rng, n);
      Matrix joint(n, n);
      for (std::size_t y = 0; y < n; ++y) {
        const Vector noise = RandomSimplexPoint(rng, n);
        for (std::size_t x = 0; x < n; ++x) joint(x, y) = p_y[y] * (0.4 * noise[x] + (x == y ? 0.6 : 0.0));
      }
      return JointDistribution::FromMatrix(joint);
    }
    case Family::kSmallY: {
      const std::size_t ny = UniformInt(rng, 2, std::min<std::size_t>(8, std::max<std::size_t>(2, limits.max_y)));
      const std::size_t nx = UniformInt(rng, ny, std::max<std::size_t>(ny, 8));
      const Vector flat = RandomSimplexPoint(rng, nx * ny);
      Matrix joint(nx, ny);
      for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y) joint(x, y) = flat[x * ny + y];
      return JointDistribution::FromMatrix(joint);
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown instance family");
}

bool InstanceResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed; });
}

namespace {

std::string Num(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

}  // namespace

InstanceResult CheckInstance(const JointDistribution& d, std::optional<Family> family, const Tolerances& tol) {
  InstanceResult r;
  auto check = [&](std::string name, bool ok, std::string detail = {}) {
    r.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  const double h_y = Entropy(d.marginal_y());
  const double h_y_x = ConditionalEntropyYGivenX(d);
  const double mi = MutualInformation(d);
  check("entropy_chain", std::abs(h_y - h_y_x - mi) <= 1e-10, "H(Y)-H(Y|X)-I=" + Num(h_y - h_y_x - mi));

  const RankNullity rn = RankAndNullity(d.x_given_y().matrix(), tol.rank);
  if (family == Family::kDeterministic)
    check("nullity_identity", rn.nullity == d.y_size() - d.x_size(),
          "nullity=" + std::to_string(rn.nullity) + " |Y|-|X|=" + std::to_string(d.y_size() - d.x_size()));

  const Membership mem = MembershipInPhat(d, tol);
  r.member = mem.member();
  if (family == Family::kDeterministic || family == Family::kCommonInformation)
    check("membership_expected", mem.member(), std::string("status=") + MembershipStatusName(mem.status));
  if (family == Family::kInvertible && h_y_x > 1e-6)
    check("membership_expected", mem.status == MembershipStatus::kNonMember,
          std::string("status=") + MembershipStatusName(mem.status));

  std::optional<double> achieved_length;
  std::optional<MechanismBounds> bounds;
  std::optional<double> achieved_hu;
  if (mem.member()) {
    try {
      const G0Solution g0 = SolveG0(d, tol);
      const Mechanism mech = BuildDecodeTable(d, g0.mech, tol);
      const double hu = mech.entropy();
      r.achieved_entropy = hu;
      achieved_hu = hu;
      const InformationTerms terms = ComputeInformationTerms(d, mech);
      check("zero_leakage", terms.i_xu <= 1e-9, "I(X;U)=" + Num(terms.i_xu));
      check("decodable", terms.h_y_given_xu <= 1e-9, "H(Y|X,U)=" + Num(terms.h_y_given_xu));
      check("key_equation", std::abs(terms.KeyEquationResidual()) <= 1e-9,
            "residual=" + Num(terms.KeyEquationResidual()));
      const Vector per_x = PerSymbolIdentityResiduals(d, mech);
      double worst = 0.0;
      for (double v : per_x) worst = std::max(worst, std::abs(v));
      check("per_symbol_identity", worst <= 1e-8, "max residual=" + Num(worst));
      check("cardinality", mech.u_size() <= rn.nullity + 1,
            "|U|=" + std::to_string(mech.u_size()) + " nullity+1=" + std::to_string(rn.nullity + 1));

      bounds = EntropyBounds(d, hu, tol, mem);
      const bool sandwich = bounds->k_lower - 1e-6 <= hu && hu <= bounds->k_upper_strengthened + 1e-6 &&
                            bounds->k_upper_strengthened <= bounds->log_nullity_bound + 1e-6;
      check("sandwich", sandwich,
            "k_lower=" + Num(bounds->k_lower) + " H(U)=" + Num(hu) + " k_str=" + Num(bounds->k_upper_strengthened) +
                " log(null+1)=" + Num(bounds->log_nullity_bound));
      if (bounds->unique)
        check("unique_optimizer",
              std::abs(bounds->k_lower - hu) <= 1e-6 && std::abs(bounds->k_upper_strengthened - hu) <= 1e-6);

      const PrivateCode code = BuildTwoPart(d, mech);
      const LeakageAudit audit = Audit(code, d);
      const double cap = hu + 1.0 + static_cast<double>(CeilLog2(d.x_size())) + 1e-9;
      check("two_part_private", audit.mi_c_x <= 1e-9, "I(C;X)=" + Num(audit.mi_c_x));
      check("two_part_lossless", audit.lossless_prob == 1.0, "P(lossless)=" + Num(audit.lossless_prob));
      check("two_part_key_symmetry", audit.key_spread() <= 1e-12, "spread=" + Num(audit.key_spread()));
      check("two_part_length", audit.max_expected_length() <= cap,
            "length=" + Num(audit.max_expected_length()) + " cap=" + Num(cap));
      check("pad_uniform", std::abs(audit.pad_entropy - std::log2(static_cast<double>(d.x_size()))) <= 1e-12 &&
                               audit.mi_pad_x <= 1e-12);
      achieved_length = audit.max_expected_length();

      const auto lower = LowerBounds(d, code.key_size, bounds->k_lower, tol);
      double floor = 0.0;
      for (const auto& b : lower)
        if (b.applicable && b.name != "lp_conditional_converse") floor = std::max(floor, b.bits);
      check("converse_soundness", *achieved_length >= floor - 1e-9,
            "length=" + Num(*achieved_length) + " lower=" + Num(floor));
    } catch (const Error& e) {
      check("mechanism_pipeline", false, std::string(ErrorCodeName(e.code())) + ": " + e.what());
    }
  }

  if (d.y_size() <= d.x_size()) {
    const PrivateCode pad = BuildDirectPad(d);
    const LeakageAudit audit = Audit(pad, d);
    const double width = static_cast<double>(CeilLog2(d.y_size()));
    bool exact = true;
    for (double l : audit.per_key_expected_length) exact = exact && std::abs(l - width) <= 1e-12;
    check("direct_pad_width", exact);
    check("direct_pad_private", audit.mi_c_x <= 1e-12, "I(C;X)=" + Num(audit.mi_c_x));
    check("direct_pad_lossless", audit.lossless_prob == 1.0);
    const auto lower = LowerBounds(d, pad.key_size, std::nullopt, tol);
    double floor = 0.0;
    for (const auto& b : lower)
      if (b.applicable) floor = std::max(floor, b.bits);
    check("direct_pad_converse", audit.max_expected_length() >= floor - 1e-9);
  }

  BoundsReport report = AssembleReport(d, bounds, achieved_hu, d.x_size(), tol);
  if (achieved_length) {
    report.achieved = achieved_length;
    report.achieved_bound = "two_part_mechanism";
  }
  const auto violations = CheckConsistency(report);
  check("report_consistency", violations.empty(), violations.empty() ? "" : violations.front());
  return r;
}

}  // namespace zeroleak
