#ifndef ZEROLEAK_LINALG_HPP_
#define ZEROLEAK_LINALG_HPP_

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "zeroleak/tolerances.hpp"

namespace zeroleak {

using Vector = std::vector<double>;

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix Identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  Vector column(std::size_t c) const;

  Matrix Transposed() const;
  Vector operator*(std::span<const double> v) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct RankNullity {
  std::size_t rank = 0;
  std::size_t nullity = 0;
};

// Gaussian elimination with partial pivoting; a pivot counts when its
// magnitude exceeds tol * max(1, max|m|).
RankNullity RankAndNullity(const Matrix& m, double tol = Tolerances{}.rank);

// Row-reduced echelon form of m. `pivot_columns` receives the pivot column
// of each nonzero row, in order.
Matrix ReducedRowEchelon(const Matrix& m, double tol,
                         std::vector<std::size_t>* pivot_columns);

// Solves the square system a x = b. Returns nullopt if a is singular at tol.
std::optional<Vector> SolveSquare(const Matrix& a, std::span<const double> b,
                                  double tol = Tolerances{}.rank);

// A basis of the right null space of m, one vector per free column.
std::vector<Vector> NullSpace(const Matrix& m, double tol = Tolerances{}.rank);

enum class Sense { kMinimize, kMaximize };

struct LinearInequality {
  Vector coefficients;
  double upper_bound = 0.0;
};

// optimize objective . x  s.t.  eq_lhs x = eq_rhs,  [extra . x <= ub],  x >= 0
struct LinearProgram {
  Vector objective;
  Matrix eq_lhs;
  Vector eq_rhs;
  std::optional<LinearInequality> extra_ineq;
  Sense sense = Sense::kMinimize;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* LpStatusName(LpStatus status);

struct LpOutcome {
  LpStatus status = LpStatus::kInfeasible;
  double value = 0.0;
  Vector point;
};

// Two-phase primal simplex on a dense tableau with Bland's rule. Throws
// Error(kNumericalFailure) if the final basis fails the residual check.
LpOutcome SolveLp(const LinearProgram& lp, const Tolerances& tol = {});

// All basic feasible solutions of {x >= 0 : a x = b}, found by solving every
// square subsystem on rank(a) columns. Sorted lexicographically descending.
// Throws Error(kInfeasible) when there are none.
std::vector<Vector> EnumerateVertices(const Matrix& a, std::span<const double> b,
                                      const Tolerances& tol = {});

}  // namespace zeroleak

#endif  // ZEROLEAK_LINALG_HPP_
