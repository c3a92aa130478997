#include "zeroleak/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "zeroleak/error.hpp"

namespace zeroleak {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::kBadShape, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::Identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vector Matrix::column(std::size_t c) const {
  Vector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

Matrix Matrix::Transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Vector Matrix::operator*(std::span<const double> v) const {
  if (v.size() != cols_) throw Error(ErrorCode::kBadShape, "matrix-vector size mismatch");
  Vector out(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) s += (*this)(r, c) * v[c];
    out[r] = s;
  }
  return out;
}

namespace {

double MaxAbs(const Matrix& m) {
  double best = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (double v : m.row(r)) best = std::max(best, std::abs(v));
  return best;
}

void SwapRows(Matrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(a, c), m(b, c));
}

}  // namespace

Matrix ReducedRowEchelon(const Matrix& m, double tol,
                         std::vector<std::size_t>* pivot_columns) {
  Matrix r = m;
  const double threshold = tol * std::max(1.0, MaxAbs(m));
  std::vector<std::size_t> pivots;
  std::size_t lead = 0;
  for (std::size_t col = 0; col < r.cols() && lead < r.rows(); ++col) {
    std::size_t best = lead;
    for (std::size_t i = lead + 1; i < r.rows(); ++i)
      if (std::abs(r(i, col)) > std::abs(r(best, col))) best = i;
    if (std::abs(r(best, col)) <= threshold) {
      for (std::size_t i = lead; i < r.rows(); ++i) r(i, col) = 0.0;
      continue;
    }
    SwapRows(r, lead, best);
    const double p = r(lead, col);
    for (std::size_t c = 0; c < r.cols(); ++c) r(lead, c) /= p;
    for (std::size_t i = 0; i < r.rows(); ++i) {
      if (i == lead) continue;
      const double f = r(i, col);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < r.cols(); ++c) r(i, c) -= f * r(lead, c);
      r(i, col) = 0.0;
    }
    pivots.push_back(col);
    ++lead;
  }
  if (pivot_columns) *pivot_columns = std::move(pivots);
  return r;
}

RankNullity RankAndNullity(const Matrix& m, double tol) {
  std::vector<std::size_t> pivots;
  ReducedRowEchelon(m, tol, &pivots);
  return {pivots.size(), m.cols() - pivots.size()};
}

std::optional<Vector> SolveSquare(const Matrix& a, std::span<const double> b, double tol) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw Error(ErrorCode::kBadShape, "SolveSquare needs a square system");
  Matrix aug(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n) = b[i];
  }
  const double threshold = tol * std::max(1.0, MaxAbs(a));
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::abs(aug(i, col)) > std::abs(aug(best, col))) best = i;
    if (std::abs(aug(best, col)) <= threshold) return std::nullopt;
    SwapRows(aug, col, best);
    for (std::size_t i = col + 1; i < n; ++i) {
      const double f = aug(i, col) / aug(col, col);
      if (f == 0.0) continue;
      for (std::size_t c = col; c <= n; ++c) aug(i, c) -= f * aug(col, c);
    }
  }
  Vector x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = aug(i, n);
    for (std::size_t j = i + 1; j < n; ++j) s -= aug(i, j) * x[j];
    x[i] = s / aug(i, i);
  }
  return x;
}

std::vector<Vector> NullSpace(const Matrix& m, double tol) {
  std::vector<std::size_t> pivots;
  const Matrix r = ReducedRowEchelon(m, tol, &pivots);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t p : pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector v(m.cols(), 0.0);
    v[f] = 1.0;
    for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -r(k, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

const char* LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

constexpr std::size_t kMaxPivots = 100000;

// Dense simplex tableau in standard form. Columns [0, num_real) are the
// structural and slack variables; [num_real, num_real + rows) are
// artificials. The last column holds the right-hand side.
class Tableau {
 public:
  Tableau(const Matrix& a, std::span<const double> b, std::size_t num_real)
      : t_(a.rows(), num_real + a.rows() + 1), num_real_(num_real), basis_(a.rows()) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      const double sign = b[i] < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < num_real; ++j) t_(i, j) = sign * a(i, j);
      t_(i, num_real + i) = 1.0;
      t_(i, rhs()) = sign * b[i];
      basis_[i] = num_real + i;
      active_.push_back(true);
    }
  }

  std::size_t rows() const { return t_.rows(); }
  std::size_t rhs() const { return t_.cols() - 1; }
  std::size_t num_real() const { return num_real_; }
  bool is_artificial(std::size_t j) const { return j >= num_real_ && j < rhs(); }
  const std::vector<std::size_t>& basis() const { return basis_; }
  const std::vector<bool>& active() const { return active_; }
  double value(std::size_t row) const { return t_(row, rhs()); }

  // Minimizes cost . x over the current feasible basis. Returns false if the
  // problem is unbounded in that direction.
  bool Optimize(const Vector& cost, bool allow_artificials, double eps) {
    for (std::size_t iter = 0; iter < kMaxPivots; ++iter) {
      std::size_t entering = rhs();
      for (std::size_t j = 0; j < rhs(); ++j) {
        if (!allow_artificials && is_artificial(j)) continue;
        if (ReducedCost(cost, j) < -eps) {
          entering = j;
          break;
        }
      }
      if (entering == rhs()) return true;
      std::size_t leaving = rows();
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < rows(); ++i) {
        if (!active_[i]) continue;
        const double coef = t_(i, entering);
        if (coef <= eps) continue;
        const double ratio = t_(i, rhs()) / coef;
        const bool better = leaving == rows() || ratio < best_ratio - eps;
        const bool tie_lower_index =
            !better && ratio <= best_ratio + eps && basis_[i] < basis_[leaving];
        if (better || tie_lower_index) {
          best_ratio = better ? ratio : std::min(best_ratio, ratio);
          leaving = i;
        }
      }
      if (leaving == rows()) return false;
      Pivot(leaving, entering);
    }
    throw Error(ErrorCode::kNumericalFailure, "simplex exceeded the pivot limit");
  }

  // Replaces artificial basics by structural columns where possible and
  // deactivates the rows that turn out to be redundant.
  void DriveOutArtificials(double eps) {
    for (std::size_t i = 0; i < rows(); ++i) {
      if (!active_[i] || !is_artificial(basis_[i])) continue;
      std::size_t col = rhs();
      double best = eps;
      for (std::size_t j = 0; j < num_real_; ++j) {
        if (std::abs(t_(i, j)) > best) {
          best = std::abs(t_(i, j));
          col = j;
        }
      }
      if (col == rhs()) {
        active_[i] = false;
      } else {
        Pivot(i, col);
      }
    }
  }

 private:
  double ReducedCost(const Vector& cost, std::size_t j) const {
    double r = cost[j];
    for (std::size_t i = 0; i < rows(); ++i)
      if (active_[i]) r -= cost[basis_[i]] * t_(i, j);
    return r;
  }

  void Pivot(std::size_t row, std::size_t col) {
    const double p = t_(row, col);
    for (std::size_t c = 0; c < t_.cols(); ++c) t_(row, c) /= p;
    for (std::size_t i = 0; i < rows(); ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < t_.cols(); ++c) t_(i, c) -= f * t_(row, c);
      t_(i, col) = 0.0;
    }
    basis_[row] = col;
  }

  Matrix t_;
  std::size_t num_real_;
  std::vector<std::size_t> basis_;
  std::vector<bool> active_;
};

double InfNorm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

LpOutcome SolveLp(const LinearProgram& lp, const Tolerances& tol) {
  const std::size_t n = lp.objective.size();
  if (lp.eq_lhs.rows() > 0 && lp.eq_lhs.cols() != n)
    throw Error(ErrorCode::kBadShape, "LP constraint matrix has " + std::to_string(lp.eq_lhs.cols()) +
                                          " columns but the objective has " + std::to_string(n));
  if (lp.eq_rhs.size() != lp.eq_lhs.rows())
    throw Error(ErrorCode::kBadShape, "LP right-hand side length mismatch");
  if (lp.extra_ineq && lp.extra_ineq->coefficients.size() != n)
    throw Error(ErrorCode::kBadShape, "LP inequality length mismatch");

  const bool has_slack = lp.extra_ineq.has_value();
  const std::size_t num_real = n + (has_slack ? 1 : 0);
  const std::size_t m = lp.eq_lhs.rows() + (has_slack ? 1 : 0);

  Matrix a(m, num_real);
  Vector b(m);
  for (std::size_t i = 0; i < lp.eq_lhs.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = lp.eq_lhs(i, j);
    b[i] = lp.eq_rhs[i];
  }
  if (has_slack) {
    for (std::size_t j = 0; j < n; ++j) a(m - 1, j) = lp.extra_ineq->coefficients[j];
    a(m - 1, n) = 1.0;
    b[m - 1] = lp.extra_ineq->upper_bound;
  }

  const double scale = 1.0 + InfNorm(b);
  const double eps = tol.lp * 1e-2;

  if (m == 0) {
    // Only x >= 0: the origin is optimal unless some cost is negative.
    LpOutcome out;
    const double dir = lp.sense == Sense::kMaximize ? -1.0 : 1.0;
    for (double c : lp.objective) {
      if (dir * c < -eps) {
        out.status = LpStatus::kUnbounded;
        out.value = lp.sense == Sense::kMaximize ? std::numeric_limits<double>::infinity()
                                                 : -std::numeric_limits<double>::infinity();
        return out;
      }
    }
    out.status = LpStatus::kOptimal;
    out.point.assign(n, 0.0);
    return out;
  }

  Tableau tab(a, b, num_real);
  const std::size_t total = num_real + m;
  Vector phase1(total + 1, 0.0);
  for (std::size_t j = num_real; j < total; ++j) phase1[j] = 1.0;
  tab.Optimize(phase1, /*allow_artificials=*/true, eps);

  double infeasibility = 0.0;
  for (std::size_t i = 0; i < tab.rows(); ++i)
    if (tab.is_artificial(tab.basis()[i])) infeasibility += tab.value(i);
  LpOutcome out;
  if (infeasibility > tol.lp * scale) {
    out.status = LpStatus::kInfeasible;
    return out;
  }
  tab.DriveOutArtificials(tol.lp);

  const double dir = lp.sense == Sense::kMaximize ? -1.0 : 1.0;
  Vector phase2(total + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = dir * lp.objective[j];
  if (!tab.Optimize(phase2, /*allow_artificials=*/false, eps)) {
    out.status = LpStatus::kUnbounded;
    out.value = lp.sense == Sense::kMaximize ? std::numeric_limits<double>::infinity()
                                             : -std::numeric_limits<double>::infinity();
    return out;
  }

  // Re-solve the final basis against the original data to shed the
  // rounding accumulated by the pivots.
  std::vector<std::size_t> rows_kept;
  std::vector<std::size_t> cols_kept;
  for (std::size_t i = 0; i < tab.rows(); ++i) {
    if (!tab.active()[i]) continue;
    if (tab.is_artificial(tab.basis()[i])) continue;
    rows_kept.push_back(i);
    cols_kept.push_back(tab.basis()[i]);
  }
  Vector full(num_real, 0.0);
  for (std::size_t k = 0; k < rows_kept.size(); ++k) full[cols_kept[k]] = tab.value(rows_kept[k]);
  {
    Matrix sq(rows_kept.size(), rows_kept.size());
    Vector rhs(rows_kept.size());
    for (std::size_t r = 0; r < rows_kept.size(); ++r) {
      for (std::size_t c = 0; c < cols_kept.size(); ++c) sq(r, c) = a(rows_kept[r], cols_kept[c]);
      rhs[r] = b[rows_kept[r]];
    }
    if (!rows_kept.empty()) {
      if (auto polished = SolveSquare(sq, rhs, 1e-13)) {
        Vector candidate(num_real, 0.0);
        for (std::size_t k = 0; k < cols_kept.size(); ++k) candidate[cols_kept[k]] = (*polished)[k];
        const Vector res_new = a * candidate;
        const Vector res_old = a * full;
        double err_new = 0.0, err_old = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          err_new = std::max(err_new, std::abs(res_new[i] - b[i]));
          err_old = std::max(err_old, std::abs(res_old[i] - b[i]));
        }
        if (err_new <= err_old) full = std::move(candidate);
      }
    }
  }

  for (double& v : full) {
    if (v < -tol.lp * scale)
      throw Error(ErrorCode::kNumericalFailure, "simplex basis left a negative variable");
    if (v < 0.0) v = 0.0;
  }
  const Vector lhs = a * full;
  for (std::size_t i = 0; i < m; ++i) {
    if (std::abs(lhs[i] - b[i]) > tol.lp * scale)
      throw Error(ErrorCode::kNumericalFailure,
                  "simplex residual " + std::to_string(std::abs(lhs[i] - b[i])) + " on row " +
                      std::to_string(i));
  }

  out.status = LpStatus::kOptimal;
  out.point.assign(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(n));
  out.value = 0.0;
  for (std::size_t j = 0; j < n; ++j) out.value += lp.objective[j] * out.point[j];
  return out;
}

namespace {

bool NextCombination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<Vector> EnumerateVertices(const Matrix& a, std::span<const double> b,
                                      const Tolerances& tol) {
  if (a.rows() == 0) throw Error(ErrorCode::kBadShape, "vertex enumeration needs at least one equality");
  if (b.size() != a.rows()) throw Error(ErrorCode::kBadShape, "right-hand side length mismatch");
  const std::size_t n = a.cols();

  Matrix aug(a.rows(), n + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n) = b[i];
  }
  std::vector<std::size_t> pivots;
  const Matrix reduced = ReducedRowEchelon(aug, tol.rank, &pivots);
  if (!pivots.empty() && pivots.back() == n)
    throw Error(ErrorCode::kInfeasible, "equality system is inconsistent");
  const std::size_t rank = pivots.size();

  const double scale = 1.0 + InfNorm(b);
  auto feasible = [&](Vector& x) {
    for (double& v : x) {
      if (v < -tol.lp) return false;
      if (v < 0.0) v = 0.0;
    }
    const Vector lhs = a * x;
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (std::abs(lhs[i] - b[i]) > tol.lp * scale) return false;
    return true;
  };

  std::vector<Vector> vertices;
  auto add_unique = [&](Vector x) {
    for (const Vector& v : vertices) {
      double d = 0.0;
      for (std::size_t j = 0; j < n; ++j) d = std::max(d, std::abs(v[j] - x[j]));
      if (d <= tol.vertex) return;
    }
    vertices.push_back(std::move(x));
  };

  if (rank == 0) {
    Vector origin(n, 0.0);
    if (feasible(origin)) add_unique(std::move(origin));
  } else if (rank <= n) {
    std::vector<std::size_t> subset(rank);
    std::iota(subset.begin(), subset.end(), 0);
    Matrix sq(rank, rank);
    Vector rhs(rank);
    for (std::size_t r = 0; r < rank; ++r) rhs[r] = reduced(r, n);
    do {
      for (std::size_t r = 0; r < rank; ++r)
        for (std::size_t c = 0; c < rank; ++c) sq(r, c) = reduced(r, subset[c]);
      auto sol = SolveSquare(sq, rhs, tol.rank);
      if (!sol) continue;
      Vector x(n, 0.0);
      for (std::size_t c = 0; c < rank; ++c) x[subset[c]] = (*sol)[c];
      if (feasible(x)) add_unique(std::move(x));
    } while (NextCombination(subset, n));
  }

  if (vertices.empty()) throw Error(ErrorCode::kInfeasible, "no basic feasible solution exists");
  std::sort(vertices.begin(), vertices.end(), std::greater<>());
  return vertices;
}

}  // namespace zeroleak
