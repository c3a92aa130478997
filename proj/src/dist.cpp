#include "zeroleak/dist.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zeroleak/error.hpp"

namespace zeroleak {

Kernel Kernel::FromMatrix(Matrix k, double tol) {
  if (k.empty()) throw Error(ErrorCode::kBadShape, "kernel must be nonempty");
  for (std::size_t c = 0; c < k.cols(); ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < k.rows(); ++r) {
      if (k(r, c) < -tol)
        throw Error(ErrorCode::kStochasticityError,
                    "kernel entry (" + std::to_string(r) + "," + std::to_string(c) + ") is negative");
      if (k(r, c) < 0.0) k(r, c) = 0.0;
      sum += k(r, c);
    }
    if (std::abs(sum - 1.0) > tol)
      throw Error(ErrorCode::kStochasticityError,
                  "kernel column " + std::to_string(c) + " sums to " + std::to_string(sum));
  }
  return Kernel(std::move(k));
}

JointDistribution::JointDistribution(Matrix p, std::vector<std::size_t> xi,
                                     std::vector<std::size_t> yi)
    : p_(std::move(p)), x_index_(std::move(xi)), y_index_(std::move(yi)) {
  p_x_.assign(p_.rows(), 0.0);
  p_y_.assign(p_.cols(), 0.0);
  for (std::size_t x = 0; x < p_.rows(); ++x)
    for (std::size_t y = 0; y < p_.cols(); ++y) {
      p_x_[x] += p_(x, y);
      p_y_[y] += p_(x, y);
    }
}

JointDistribution JointDistribution::FromMatrix(const Matrix& raw, double tol) {
  if (raw.empty()) throw Error(ErrorCode::kBadShape, "joint distribution needs at least one row and column");
  Matrix m = raw;
  double total = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      double& v = m(r, c);
      if (!std::isfinite(v))
        throw Error(ErrorCode::kStochasticityError,
                    "entry (" + std::to_string(r) + "," + std::to_string(c) + ") is not finite");
      if (v < -tol)
        throw Error(ErrorCode::kStochasticityError,
                    "entry (" + std::to_string(r) + "," + std::to_string(c) + ") is negative");
      if (v < 0.0) v = 0.0;
      total += v;
    }
  if (total <= 0.0) throw Error(ErrorCode::kEmptySupport, "joint distribution has no mass");

  std::vector<std::size_t> rows, cols;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) s += m(r, c);
    if (s > 0.0) rows.push_back(r);
  }
  for (std::size_t c = 0; c < m.cols(); ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) s += m(r, c);
    if (s > 0.0) cols.push_back(c);
  }
  Matrix p(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) p(i, j) = m(rows[i], cols[j]) / total;
  return JointDistribution(std::move(p), std::move(rows), std::move(cols));
}

JointDistribution JointDistribution::FromRows(const std::vector<std::vector<double>>& rows,
                                              double tol) {
  if (rows.empty() || rows.front().empty())
    throw Error(ErrorCode::kBadShape, "joint distribution needs at least one row and column");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols())
      throw Error(ErrorCode::kBadShape, "row " + std::to_string(r) + " has " +
                                            std::to_string(rows[r].size()) + " entries, expected " +
                                            std::to_string(m.cols()));
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  }
  return FromMatrix(m, tol);
}

JointDistribution JointDistribution::FromKernel(const Matrix& x_given_y, std::span<const double> p_y,
                                                double tol) {
  if (x_given_y.cols() != p_y.size())
    throw Error(ErrorCode::kBadShape, "kernel has " + std::to_string(x_given_y.cols()) +
                                          " columns but P_Y has " + std::to_string(p_y.size()) +
                                          " entries");
  const Kernel k = Kernel::FromMatrix(x_given_y, tol);
  double total = 0.0;
  for (std::size_t y = 0; y < p_y.size(); ++y) {
    if (p_y[y] < -tol)
      throw Error(ErrorCode::kStochasticityError, "P_Y entry " + std::to_string(y) + " is negative");
    total += std::max(p_y[y], 0.0);
  }
  if (std::abs(total - 1.0) > tol)
    throw Error(ErrorCode::kStochasticityError, "P_Y sums to " + std::to_string(total));
  Matrix joint(k.out_size(), k.cond_size());
  for (std::size_t x = 0; x < k.out_size(); ++x)
    for (std::size_t y = 0; y < k.cond_size(); ++y) joint(x, y) = k(x, y) * std::max(p_y[y], 0.0);
  return FromMatrix(joint, tol);
}

Kernel JointDistribution::x_given_y() const {
  Matrix k(x_size(), y_size());
  for (std::size_t y = 0; y < y_size(); ++y)
    for (std::size_t x = 0; x < x_size(); ++x) k(x, y) = p_(x, y) / p_y_[y];
  return Kernel::FromMatrix(std::move(k), 1e-6);
}

Kernel JointDistribution::y_given_x() const {
  Matrix k(y_size(), x_size());
  for (std::size_t x = 0; x < x_size(); ++x)
    for (std::size_t y = 0; y < y_size(); ++y) k(y, x) = p_(x, y) / p_x_[x];
  return Kernel::FromMatrix(std::move(k), 1e-6);
}

bool JointDistribution::x_is_function_of_y(double tol) const {
  for (std::size_t y = 0; y < y_size(); ++y) {
    std::size_t support = 0;
    for (std::size_t x = 0; x < x_size(); ++x)
      if (p_(x, y) / p_y_[y] > tol) ++support;
    if (support != 1) return false;
  }
  return true;
}

bool JointDistribution::y_is_function_of_x(double tol) const {
  for (std::size_t x = 0; x < x_size(); ++x) {
    std::size_t support = 0;
    for (std::size_t y = 0; y < y_size(); ++y)
      if (p_(x, y) / p_x_[x] > tol) ++support;
    if (support != 1) return false;
  }
  return true;
}

double Entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) h += EntropyTerm(v);
  return h;
}

double ConditionalEntropyPerX(const JointDistribution& d, std::size_t x) {
  const double px = d.marginal_x()[x];
  double h = 0.0;
  for (std::size_t y = 0; y < d.y_size(); ++y) h += EntropyTerm(d(x, y) / px);
  return h;
}

double ConditionalEntropyYGivenX(const JointDistribution& d) {
  double h = 0.0;
  for (std::size_t x = 0; x < d.x_size(); ++x) h += d.marginal_x()[x] * ConditionalEntropyPerX(d, x);
  return h;
}

double MutualInformation(const JointDistribution& d) {
  double i = 0.0;
  for (std::size_t x = 0; x < d.x_size(); ++x)
    for (std::size_t y = 0; y < d.y_size(); ++y) {
      const double p = d(x, y);
      if (p > 0.0) i += p * std::log2(p / (d.marginal_x()[x] * d.marginal_y()[y]));
    }
  return std::max(i, 0.0);
}

std::size_t CeilLog2(std::size_t n) {
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  return bits;
}

}  // namespace zeroleak
