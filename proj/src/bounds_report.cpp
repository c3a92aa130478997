#include "zeroleak/bounds_report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace zeroleak {

namespace {

double CeilLog2d(std::size_t n) { return static_cast<double>(CeilLog2(n)); }

}  // namespace

std::vector<BoundEntry> UpperBounds(const JointDistribution& d,
                                    const std::optional<MechanismBounds>& mech_bounds,
                                    std::optional<double> achieved_hu, const Tolerances& tol) {
  const std::size_t nx = d.x_size(), ny = d.y_size();
  const double pad_bits = CeilLog2d(nx);
  const bool member = mech_bounds.has_value();
  const bool x_det = d.x_is_function_of_y(tol.prob);

  std::vector<BoundEntry> out;
  out.push_back({"two_part_mechanism", achieved_hu && member ? *achieved_hu + 1.0 + pad_bits : 0.0,
                 member && achieved_hu.has_value(), kRequiresMember, nx, false, true});
  out.push_back({"two_part_strengthened_lp", member ? mech_bounds->k_upper_strengthened + 1.0 + pad_bits : 0.0,
                 member, kRequiresMember, nx});
  out.push_back({"two_part_nullity", member ? mech_bounds->log_nullity_bound + 1.0 + pad_bits : 0.0, member,
                 kRequiresMember, nx});
  out.push_back({"two_part_min_entropy", achieved_hu ? *achieved_hu + 1.0 + pad_bits : 0.0,
                 achieved_hu.has_value(), kRequiresDecodable, nx, false, true});

  double sum_cond = 0.0;
  for (std::size_t x = 0; x < nx; ++x) sum_cond += ConditionalEntropyPerX(d, x);
  const double counting = CeilLog2d(nx * (ny - 1) + 1) - 1.0;
  out.push_back({"functional_representation", 1.0 + std::min(sum_cond, counting) + pad_bits, true,
                 kRequiresNothing, nx, true});

  const double det_bits = ny >= nx ? CeilLog2d(ny - nx + 1) + pad_bits : 0.0;
  out.push_back({"deterministic_private_prior", det_bits, x_det, kRequiresDeterministicX, nx, true});

  out.push_back({"direct_pad", CeilLog2d(ny), ny <= nx, kRequiresSmallY, ny});
  return out;
}

bool CodeCannotExist(const JointDistribution& d, std::size_t key_size, const Tolerances& tol) {
  return d.x_is_function_of_y(tol.prob) && key_size < d.x_size();
}

std::vector<BoundEntry> LowerBounds(const JointDistribution& d, std::size_t key_size,
                                    std::optional<double> k_lower, const Tolerances& tol) {
  std::vector<BoundEntry> out;
  double worst = 0.0;
  for (std::size_t x = 0; x < d.x_size(); ++x) worst = std::max(worst, ConditionalEntropyPerX(d, x));
  out.push_back({"max_conditional_entropy", worst, true, kRequiresNothing, 0});

  const bool x_det = d.x_is_function_of_y(tol.prob);
  out.push_back({"log_private_alphabet", std::log2(static_cast<double>(d.x_size())),
                 x_det && key_size >= d.x_size(), kRequiresDeterministicX, d.x_size()});

  out.push_back({"lp_conditional_converse", k_lower.value_or(0.0), k_lower.has_value(),
                 kRequiresConverseConditions, 0});
  return out;
}

BoundsReport AssembleReport(const JointDistribution& d,
                            const std::optional<MechanismBounds>& mech_bounds,
                            std::optional<double> achieved_hu, std::size_t key_size,
                            const Tolerances& tol) {
  BoundsReport r;
  r.key_size = key_size;
  r.upper = UpperBounds(d, mech_bounds, achieved_hu, tol);
  r.lower = LowerBounds(d, key_size, mech_bounds ? std::optional(mech_bounds->k_lower) : std::nullopt, tol);
  for (const auto& b : r.upper)
    if (b.prior) r.prior_upper.push_back(b);
  r.non_existence = CodeCannotExist(d, key_size, tol);

  const BoundEntry* direct = FindBound(r.upper, "direct_pad");
  const BoundEntry* frl = FindBound(r.upper, "functional_representation");
  const BoundEntry* surrogate = FindBound(r.upper, "two_part_min_entropy");
  if (direct->applicable) {
    r.small_y_improvement = direct->bits <= frl->bits + 1e-12 &&
                            (!surrogate->applicable || direct->bits <= surrogate->bits + 1e-12);
  }
  const BoundEntry* det = FindBound(r.upper, "deterministic_private_prior");
  const BoundEntry* mech = FindBound(r.upper, "two_part_mechanism");
  if (det->applicable && mech->applicable) r.deterministic_improvement = mech->bits < det->bits;

  if (achieved_hu) r.mechanism_plus_one = *achieved_hu + 1.0;
  if (d.x_is_function_of_y(tol.prob) && d.y_size() >= d.x_size())
    r.prior_mechanism_ceiling = CeilLog2d(d.y_size() - d.x_size() + 1);
  return r;
}

const BoundEntry* FindBound(const std::vector<BoundEntry>& list, const std::string& name) {
  for (const auto& b : list)
    if (b.name == name) return &b;
  return nullptr;
}

std::vector<std::string> CheckConsistency(const BoundsReport& report, double slack) {
  std::vector<std::string> violations;
  double max_lower = -std::numeric_limits<double>::infinity();
  std::string max_lower_name;
  for (const auto& lo : report.lower) {
    if (!lo.applicable) continue;
    if (lo.bits > max_lower) {
      max_lower = lo.bits;
      max_lower_name = lo.name;
    }
    for (const auto& up : report.upper) {
      if (!up.applicable) continue;
      if (lo.bits > up.bits + slack)
        violations.push_back("lower bound " + lo.name + " exceeds upper bound " + up.name);
    }
  }
  if (report.achieved) {
    if (*report.achieved < max_lower - slack)
      violations.push_back("achieved length is below lower bound " + max_lower_name);
    if (const BoundEntry* b = FindBound(report.upper, report.achieved_bound)) {
      if (b->applicable && *report.achieved > b->bits + slack)
        violations.push_back("achieved length exceeds upper bound " + b->name);
    }
  }
  const BoundEntry* mech = FindBound(report.upper, "two_part_mechanism");
  const BoundEntry* nullity = FindBound(report.upper, "two_part_nullity");
  if (mech && nullity && mech->applicable && nullity->applicable && mech->bits > nullity->bits + slack)
    violations.push_back("mechanism two-part bound exceeds the nullity bound");
  return violations;
}

}  // namespace zeroleak
