#ifndef ZEROLEAK_DIST_HPP_
#define ZEROLEAK_DIST_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "zeroleak/linalg.hpp"
#include "zeroleak/tolerances.hpp"

namespace zeroleak {

// Column-stochastic conditional distribution, indexed [out][cond].
class Kernel {
 public:
  Kernel() = default;
  // Throws Error(kStochasticityError) naming the first bad column.
  static Kernel FromMatrix(Matrix k, double tol = Tolerances{}.prob);

  std::size_t out_size() const { return k_.rows(); }
  std::size_t cond_size() const { return k_.cols(); }
  double operator()(std::size_t out, std::size_t cond) const { return k_(out, cond); }
  const Matrix& matrix() const { return k_; }
  Vector column(std::size_t cond) const { return k_.column(cond); }

 private:
  explicit Kernel(Matrix k) : k_(std::move(k)) {}
  Matrix k_;
};

// Finite joint distribution P_XY stored as a |X| x |Y| matrix. Zero rows and
// columns are removed on construction; the original indices are retained.
class JointDistribution {
 public:
  // Clamps entries in [-tol, 0) to zero, renormalizes, and strips all-zero
  // rows and columns. Throws kBadShape, kEmptySupport or kStochasticityError.
  static JointDistribution FromMatrix(const Matrix& raw, double tol = Tolerances{}.prob);
  static JointDistribution FromRows(const std::vector<std::vector<double>>& rows,
                                    double tol = Tolerances{}.prob);
  // P_XY(x, y) = P_{X|Y}(x | y) P_Y(y).
  static JointDistribution FromKernel(const Matrix& x_given_y, std::span<const double> p_y,
                                      double tol = Tolerances{}.prob);

  std::size_t x_size() const { return p_.rows(); }
  std::size_t y_size() const { return p_.cols(); }
  double operator()(std::size_t x, std::size_t y) const { return p_(x, y); }
  const Matrix& matrix() const { return p_; }

  // Original row / column index of each retained symbol.
  const std::vector<std::size_t>& x_index() const { return x_index_; }
  const std::vector<std::size_t>& y_index() const { return y_index_; }

  const Vector& marginal_x() const { return p_x_; }
  const Vector& marginal_y() const { return p_y_; }

  Kernel x_given_y() const;  // |X| x |Y|
  Kernel y_given_x() const;  // |Y| x |X|

  // True when every column of P_{X|Y} is a point mass.
  bool x_is_function_of_y(double tol = Tolerances{}.prob) const;
  bool y_is_function_of_x(double tol = Tolerances{}.prob) const;

 private:
  JointDistribution(Matrix p, std::vector<std::size_t> xi, std::vector<std::size_t> yi);

  Matrix p_;
  std::vector<std::size_t> x_index_;
  std::vector<std::size_t> y_index_;
  Vector p_x_;
  Vector p_y_;
};

// Shannon entropy in bits; zero entries contribute nothing.
double Entropy(std::span<const double> p);
double ConditionalEntropyPerX(const JointDistribution& d, std::size_t x);  // H(Y|X=x)
double ConditionalEntropyYGivenX(const JointDistribution& d);              // H(Y|X)
double MutualInformation(const JointDistribution& d);                     // I(X;Y)

// -p log2 p with the 0 log 0 = 0 convention.
inline double EntropyTerm(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

std::size_t CeilLog2(std::size_t n);

}  // namespace zeroleak

#endif  // ZEROLEAK_DIST_HPP_
