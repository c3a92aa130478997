#ifndef ZEROLEAK_MECHANISM_HPP_
#define ZEROLEAK_MECHANISM_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "zeroleak/dist.hpp"
#include "zeroleak/linalg.hpp"
#include "zeroleak/tolerances.hpp"

namespace zeroleak {

// Row i is P_Y - P_{Y|x_i}; entry i of b is H(Y|X=x_i) - H(Y|X).
struct BoundMatrices {
  Matrix a_xy;
  Vector b_xy;
};

BoundMatrices BuildBoundMatrices(const JointDistribution& d);

// A disclosure variable U generated from Y alone.
class Mechanism {
 public:
  Mechanism() = default;
  // Column u of `y_given_u` is P_{Y|U=u}; `p_u` are the mixture weights.
  Mechanism(const JointDistribution& d, Vector p_u, Matrix y_given_u);

  std::size_t u_size() const { return p_u_.size(); }
  std::size_t x_size() const { return x_size_; }
  std::size_t y_size() const { return y_given_u_.rows(); }

  const Vector& p_u() const { return p_u_; }
  const Matrix& p_y_given_u() const { return y_given_u_; }  // |Y| x |U|
  const Matrix& p_u_given_y() const { return u_given_y_; }  // |U| x |Y|

  bool has_decode_table() const { return !decode_.empty(); }
  // The y recovered from (x, u), or nullopt when (x, u) has no mass.
  std::optional<std::size_t> Decode(std::size_t x, std::size_t u) const;

  double entropy() const { return Entropy(p_u_); }

  // Raw constructor used by deserialization; no consistency checks beyond shape.
  static Mechanism FromParts(std::size_t x_size, Vector p_u, Matrix y_given_u, Matrix u_given_y,
                             std::vector<std::optional<std::size_t>> decode);
  const std::vector<std::optional<std::size_t>>& decode_table() const { return decode_; }

 private:
  friend Mechanism BuildDecodeTable(const JointDistribution&, const Mechanism&, const Tolerances&);

  std::size_t x_size_ = 0;
  Vector p_u_;
  Matrix y_given_u_;
  Matrix u_given_y_;
  std::vector<std::optional<std::size_t>> decode_;  // index x * u_size + u
};

enum class MembershipStatus { kMember, kBoundary, kNonMember };

const char* MembershipStatusName(MembershipStatus s);

struct Membership {
  MembershipStatus status = MembershipStatus::kNonMember;
  double g0 = 0.0;           // bits
  double h_y_given_x = 0.0;  // bits
  bool via_deterministic = false;

  bool member() const { return status == MembershipStatus::kMember; }
};

struct G0Solution {
  double value = 0.0;  // g_0 in bits
  Mechanism mech;
  std::size_t vertex_count = 0;
  double simplex_entropy = 0.0;  // H(U) of the plain simplex optimum, before refinement
};

// Maximizes I(Y;U) subject to X - Y - U and I(X;U) = 0 by mixing the
// vertices of {p >= 0 : P_{X|Y} p = P_X}. Among optimal mixtures, searches the
// optimal face for a low-entropy basic solution.
G0Solution SolveG0(const JointDistribution& d, const Tolerances& tol = {});

// g_0 = H(Y|X) test. Skips the LP when X is a function of Y.
Membership MembershipInPhat(const JointDistribution& d, const Tolerances& tol = {});

struct MechanismBounds {
  double h_y_given_x = 0.0;
  double k_lower = 0.0;
  double k_upper = 0.0;  // +inf when the plain max-LP is unbounded
  double k_upper_strengthened = 0.0;
  double log_nullity_bound = 0.0;
  std::size_t nullity = 0;
  std::size_t rank_a = 0;
  bool unique = false;
  bool degenerate = false;             // H(Y|X) = 0
  bool strengthened_fallback = false;  // strengthened LP infeasible in floating point
  double achieved_entropy = 0.0;
};

// Lower/upper brackets on the minimum optimizer entropy. Throws kNotInPhat
// unless `membership` (computed if absent) says the joint is a member.
MechanismBounds EntropyBounds(const JointDistribution& d, double achieved_entropy,
                               const Tolerances& tol = {},
                               std::optional<Membership> membership = std::nullopt);

// Fills decode(x, u). Throws kNotDecodable if some (x, u) with positive mass
// admits two y, or if H(Y|X,U) exceeds tol.ent.
Mechanism BuildDecodeTable(const JointDistribution& d, const Mechanism& mech,
                           const Tolerances& tol = {});

struct InformationTerms {
  double h_u = 0.0;
  double i_uy = 0.0;
  double i_xu = 0.0;
  double h_y_given_x = 0.0;
  double i_xu_given_y = 0.0;
  double h_y_given_xu = 0.0;

  // I(U;Y) - I(X;U) - H(Y|X) + I(X;U|Y) + H(Y|X,U); zero for every valid joint.
  double KeyEquationResidual() const {
    return i_uy - i_xu - h_y_given_x + i_xu_given_y + h_y_given_xu;
  }
};

// Each term is evaluated from its own defining sum over P(x,y,u) = P_XY(x,y) P(u|y).
InformationTerms ComputeInformationTerms(const JointDistribution& d, const Mechanism& mech);

// sum_y (P_{y|x} - P_y) H(U|Y=y) - (H(Y|X) - H(Y|X=x)) for every x.
Vector PerSymbolIdentityResiduals(const JointDistribution& d, const Mechanism& mech);

// Largest |P_{X|Y} P_{Y|U=u} - P_X| over u and x.
double ZeroLeakageResidual(const JointDistribution& d, const Mechanism& mech);

}  // namespace zeroleak

#endif  // ZEROLEAK_MECHANISM_HPP_
