#ifndef ZEROLEAK_BOUNDS_REPORT_HPP_
#define ZEROLEAK_BOUNDS_REPORT_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "zeroleak/dist.hpp"
#include "zeroleak/mechanism.hpp"

namespace zeroleak {

inline constexpr const char* kRequiresNothing = "requires: none";
inline constexpr const char* kRequiresDeterministicX = "requires: X=f(Y)";
inline constexpr const char* kRequiresMember = "requires: member_Phat";
inline constexpr const char* kRequiresDecodable = "requires: decodable_mechanism";
inline constexpr const char* kRequiresSmallY = "requires: |Y|<=|X|";
inline constexpr const char* kRequiresConverseConditions =
    "requires: member_Phat, I(X;C)=0, H(Y|X,C)=0, X-Y-C";

struct BoundEntry {
  std::string name;
  double bits = 0.0;
  bool applicable = false;
  std::string requirement;
  std::size_t key_size = 0;  // shared-key size the bound refers to; 0 = any
  bool prior = false;        // formula from the functional-representation construction
  bool surrogate = false;    // evaluated at a constructed mechanism, not the exact optimum
};

// Upper bounds on the optimal expected length. `mech_bounds` is present only
// for members; `achieved_hu` is H(U) of a decodable zero-leakage mechanism.
std::vector<BoundEntry> UpperBounds(const JointDistribution& d,
                                    const std::optional<MechanismBounds>& mech_bounds,
                                    std::optional<double> achieved_hu, const Tolerances& tol = {});

// Converse bounds at key size `key_size`. `k_lower` feeds the LP converse.
std::vector<BoundEntry> LowerBounds(const JointDistribution& d, std::size_t key_size,
                                    std::optional<double> k_lower, const Tolerances& tol = {});

// True when X = f(Y) and key_size < |X|: no perfectly private lossless code exists.
bool CodeCannotExist(const JointDistribution& d, std::size_t key_size, const Tolerances& tol = {});

struct BoundsReport {
  std::vector<BoundEntry> upper;
  std::vector<BoundEntry> lower;
  std::vector<BoundEntry> prior_upper;
  std::size_t key_size = 0;
  bool non_existence = false;
  bool small_y_improvement = false;        // direct pad vs prior bounds, |Y| <= |X|
  bool deterministic_improvement = false;  // mechanism two-part vs prior, X = f(Y)
  std::optional<double> mechanism_plus_one;       // H(U*) + 1
  std::optional<double> prior_mechanism_ceiling;  // ceil log(|Y|-|X|+1), X = f(Y)
  std::optional<double> achieved;                 // audited max per-key expected length
  std::string achieved_bound;                     // upper bound the achieved code realizes
};

BoundsReport AssembleReport(const JointDistribution& d,
                            const std::optional<MechanismBounds>& mech_bounds,
                            std::optional<double> achieved_hu, std::size_t key_size,
                            const Tolerances& tol = {});

const BoundEntry* FindBound(const std::vector<BoundEntry>& list, const std::string& name);

// Violated report invariants, one message each; empty when consistent.
std::vector<std::string> CheckConsistency(const BoundsReport& report, double slack = 1e-9);

}  // namespace zeroleak

#endif  // ZEROLEAK_BOUNDS_REPORT_HPP_
