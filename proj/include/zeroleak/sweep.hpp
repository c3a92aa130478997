#ifndef ZEROLEAK_SWEEP_HPP_
#define ZEROLEAK_SWEEP_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zeroleak/codec.hpp"
#include "zeroleak/dist.hpp"
#include "zeroleak/tolerances.hpp"

namespace zeroleak {

enum class Family {
  kDeterministic,      // X = f(Y), f random and surjective
  kCommonInformation,  // X = (V, N1), Y = (V, N2), N1 and N2 independent given V
  kInvertible,         // square, invertible P_{X|Y}
  kSmallY,             // arbitrary joint with |Y| <= |X|
};

const char* FamilyName(Family f);
std::optional<Family> ParseFamily(std::string_view name);

struct InstanceLimits {
  std::size_t max_x = 4;
  std::size_t max_y = 10;
};

JointDistribution RandomInstance(Family family, RandomSource& rng, const InstanceLimits& limits = {});

struct PropertyCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct InstanceResult {
  std::vector<PropertyCheck> checks;
  bool member = false;
  double achieved_entropy = 0.0;

  bool passed() const;
};

// Runs the property suite on one instance: entropy chain rule, membership,
// nullity identity, mechanism audits, bound sandwich, codec audits and
// report consistency. Checks that do not apply are omitted.
InstanceResult CheckInstance(const JointDistribution& d, std::optional<Family> family,
                             const Tolerances& tol = {});

}  // namespace zeroleak

#endif  // ZEROLEAK_SWEEP_HPP_
