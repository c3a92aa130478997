#ifndef ZEROLEAK_TESTS_FIXTURES_HPP_
#define ZEROLEAK_TESTS_FIXTURES_HPP_

#include <string>
#include <vector>

#include "oracles.hpp"
#include "zeroleak/dist.hpp"

namespace fixtures {

inline const oracle::Table kWorkedKernel{{1, 1, 1, 0, 0, 0}, {0, 0, 0, 1, 1, 1}};
inline const std::vector<double> kWorkedPy{1.0 / 8, 2.0 / 8, 3.0 / 8, 1.0 / 8, 1.0 / 16, 1.0 / 16};

inline zeroleak::Matrix ToMatrix(const oracle::Table& t) {
  zeroleak::Matrix m(t.size(), t.empty() ? 0 : t[0].size());
  for (std::size_t r = 0; r < t.size(); ++r)
    for (std::size_t c = 0; c < t[r].size(); ++c) m(r, c) = t[r][c];
  return m;
}

inline oracle::Table ToTable(const zeroleak::Matrix& m) {
  oracle::Table t(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) t[r][c] = m(r, c);
  return t;
}

inline zeroleak::JointDistribution WorkedExample() {
  return zeroleak::JointDistribution::FromKernel(ToMatrix(kWorkedKernel), kWorkedPy);
}

inline zeroleak::JointDistribution FromTable(const oracle::Table& t) {
  return zeroleak::JointDistribution::FromMatrix(ToMatrix(t));
}

// Binary symmetric pair: uniform X, crossover 0.1.
inline zeroleak::JointDistribution BinarySymmetric() {
  return FromTable({{0.45, 0.05}, {0.05, 0.45}});
}

inline zeroleak::JointDistribution Independent(const std::vector<double>& px, const std::vector<double>& py) {
  oracle::Table t(px.size(), std::vector<double>(py.size()));
  for (std::size_t x = 0; x < px.size(); ++x)
    for (std::size_t y = 0; y < py.size(); ++y) t[x][y] = px[x] * py[y];
  return FromTable(t);
}

inline std::string DataPath(const std::string& name) { return std::string(ZEROLEAK_DATA_DIR) + "/" + name; }

}  // namespace fixtures

#endif  // ZEROLEAK_TESTS_FIXTURES_HPP_
