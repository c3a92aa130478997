#include "zeroleak/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "zeroleak/error.hpp"

namespace zeroleak {

BoundMatrices BuildBoundMatrices(const JointDistribution& d) {
  const std::size_t t = d.x_size();
  const std::size_t q = d.y_size();
  BoundMatrices out{Matrix(t, q), Vector(t)};
  const double h_y_x = ConditionalEntropyYGivenX(d);
  for (std::size_t x = 0; x < t; ++x) {
    const double px = d.marginal_x()[x];
    for (std::size_t y = 0; y < q; ++y) out.a_xy(x, y) = d.marginal_y()[y] - d(x, y) / px;
    out.b_xy[x] = ConditionalEntropyPerX(d, x) - h_y_x;
  }
  return out;
}

Mechanism::Mechanism(const JointDistribution& d, Vector p_u, Matrix y_given_u)
    : x_size_(d.x_size()), p_u_(std::move(p_u)), y_given_u_(std::move(y_given_u)) {
  if (y_given_u_.rows() != d.y_size() || y_given_u_.cols() != p_u_.size())
    throw Error(ErrorCode::kBadShape, "mechanism kernel shape does not match |Y| x |U|");
  u_given_y_ = Matrix(p_u_.size(), d.y_size());
  for (std::size_t y = 0; y < d.y_size(); ++y) {
    double total = 0.0;
    for (std::size_t u = 0; u < p_u_.size(); ++u) total += p_u_[u] * y_given_u_(y, u);
    for (std::size_t u = 0; u < p_u_.size(); ++u)
      u_given_y_(u, y) = total > 0.0 ? p_u_[u] * y_given_u_(y, u) / total : 0.0;
  }
}

Mechanism Mechanism::FromParts(std::size_t x_size, Vector p_u, Matrix y_given_u, Matrix u_given_y,
                               std::vector<std::optional<std::size_t>> decode) {
  if (y_given_u.cols() != p_u.size() || u_given_y.rows() != p_u.size() ||
      u_given_y.cols() != y_given_u.rows())
    throw Error(ErrorCode::kBadShape, "inconsistent mechanism tables");
  if (!decode.empty() && decode.size() != x_size * p_u.size())
    throw Error(ErrorCode::kBadShape, "decode table has the wrong size");
  Mechanism m;
  m.x_size_ = x_size;
  m.p_u_ = std::move(p_u);
  m.y_given_u_ = std::move(y_given_u);
  m.u_given_y_ = std::move(u_given_y);
  m.decode_ = std::move(decode);
  return m;
}

std::optional<std::size_t> Mechanism::Decode(std::size_t x, std::size_t u) const {
  if (decode_.empty()) throw Error(ErrorCode::kIncompleteMechanism, "mechanism has no decode table");
  if (x >= x_size_ || u >= u_size()) throw Error(ErrorCode::kInvalidArgument, "decode index out of range");
  return decode_[x * u_size() + u];
}

const char* MembershipStatusName(MembershipStatus s) {
  switch (s) {
    case MembershipStatus::kMember: return "member";
    case MembershipStatus::kBoundary: return "boundary";
    case MembershipStatus::kNonMember: return "non-member";
  }
  return "unknown";
}

namespace {

double WeightEntropy(std::span<const double> w) {
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double v : w) h += EntropyTerm(v / total);
  return h;
}

std::vector<std::size_t> SupportOf(std::span<const double> w) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0.0) s.push_back(i);
  return s;
}

Matrix SelectColumns(const Matrix& m, std::span<const std::size_t> cols) {
  Matrix out(m.rows(), cols.size());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = m(r, cols[c]);
  return out;
}

// Solves face * w = rhs on the support of `w` when those columns are
// independent. Returns false if the support is rank deficient.
bool PolishOnSupport(const Matrix& face, std::span<const double> rhs, Vector& w, double rank_tol) {
  const std::vector<std::size_t> support = SupportOf(w);
  if (support.empty()) return true;
  Matrix aug(face.rows(), support.size() + 1);
  for (std::size_t r = 0; r < face.rows(); ++r) {
    for (std::size_t c = 0; c < support.size(); ++c) aug(r, c) = face(r, support[c]);
    aug(r, support.size()) = rhs[r];
  }
  std::vector<std::size_t> pivots;
  const Matrix reduced = ReducedRowEchelon(aug, rank_tol, &pivots);
  std::size_t structural = 0;
  for (std::size_t p : pivots)
    if (p < support.size()) ++structural;
  if (structural != support.size()) return false;
  Vector solved(support.size(), 0.0);
  for (std::size_t k = 0; k < pivots.size(); ++k)
    if (pivots[k] < support.size()) solved[pivots[k]] = reduced(k, support.size());
  for (double v : solved)
    if (v < 0.0) return false;
  for (std::size_t c = 0; c < support.size(); ++c) w[support[c]] = solved[c];
  return true;
}

// Moves along null directions of the supported columns until they are
// independent. Entropy is concave, so the cheaper endpoint of each segment
// never increases it.
void ReduceToBasic(const Matrix& face, Vector& w, double rank_tol) {
  for (std::size_t guard = 0; guard < w.size() + 1; ++guard) {
    const std::vector<std::size_t> support = SupportOf(w);
    if (support.empty()) return;
    const std::vector<Vector> null = NullSpace(SelectColumns(face, support), rank_tol);
    if (null.empty()) return;
    const Vector& dir = null.front();

    auto step = [&](double sign) {
      double t = std::numeric_limits<double>::infinity();
      std::size_t hit = support.size();
      for (std::size_t k = 0; k < support.size(); ++k) {
        const double dk = sign * dir[k];
        if (dk < 0.0) {
          const double tk = w[support[k]] / -dk;
          if (tk < t) {
            t = tk;
            hit = k;
          }
        }
      }
      Vector out = w;
      if (hit == support.size()) return out;
      for (std::size_t k = 0; k < support.size(); ++k)
        out[support[k]] = std::max(0.0, w[support[k]] + t * sign * dir[k]);
      out[support[hit]] = 0.0;
      return out;
    };
    Vector plus = step(1.0);
    Vector minus = step(-1.0);
    w = WeightEntropy(minus) < WeightEntropy(plus) ? std::move(minus) : std::move(plus);
  }
}

// Greedily assigns the largest attainable weight to one face column at a
// time, re-solving a small LP per candidate.
std::optional<Vector> GreedyPeel(const Matrix& face, const Vector& rhs, const Tolerances& tol) {
  const std::size_t n = face.cols();
  Vector weights(n, 0.0);
  Vector residual = rhs;
  std::vector<std::size_t> remaining(n);
  std::iota(remaining.begin(), remaining.end(), 0);

  while (!remaining.empty()) {
    double res_norm = 0.0;
    for (double r : residual) res_norm = std::max(res_norm, std::abs(r));
    if (res_norm <= tol.lp) break;

    const Matrix sub = SelectColumns(face, remaining);
    std::vector<double> attainable(remaining.size(), 0.0);
    for (std::size_t k = 0; k < remaining.size(); ++k) {
      LinearProgram lp;
      lp.objective.assign(remaining.size(), 0.0);
      lp.objective[k] = 1.0;
      lp.eq_lhs = sub;
      lp.eq_rhs = residual;
      lp.sense = Sense::kMaximize;
      LpOutcome out;
      try {
        out = SolveLp(lp, tol);
      } catch (const Error&) {
        return std::nullopt;
      }
      if (out.status != LpStatus::kOptimal) return std::nullopt;
      attainable[k] = out.value;
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < remaining.size(); ++k)
      if (attainable[k] > attainable[best] + 1e-12) best = k;
    if (attainable[best] <= tol.lp) break;

    const std::size_t col = remaining[best];
    weights[col] = attainable[best];
    for (std::size_t r = 0; r < face.rows(); ++r) {
      residual[r] -= attainable[best] * face(r, col);
      if (std::abs(residual[r]) < 1e-15) residual[r] = 0.0;
    }
    // Columns that cannot carry weight now never will on a smaller face.
    std::vector<std::size_t> next;
    for (std::size_t k = 0; k < remaining.size(); ++k)
      if (k != best && attainable[k] > tol.lp) next.push_back(remaining[k]);
    remaining = std::move(next);
  }
  return weights;
}

}  // namespace

G0Solution SolveG0(const JointDistribution& d, const Tolerances& tol) {
  const Kernel kx = d.x_given_y();
  const std::vector<Vector> vertices = EnumerateVertices(kx.matrix(), d.marginal_x(), tol);
  const std::size_t q = d.y_size();
  const std::size_t nv = vertices.size();

  Matrix columns(q, nv);
  Vector costs(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t y = 0; y < q; ++y) columns(y, v) = vertices[v][y];
    costs[v] = Entropy(vertices[v]);
  }

  LinearProgram lp{costs, columns, d.marginal_y(), std::nullopt, Sense::kMinimize};
  const LpOutcome out = SolveLp(lp, tol);
  if (out.status != LpStatus::kOptimal)
    throw Error(ErrorCode::kInternalError,
                std::string("mixture LP over the leakage polytope is ") + LpStatusName(out.status));

  // Optimal face: the mixture constraints plus the cost row pinned at the optimum.
  Matrix face(q + 1, nv);
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t y = 0; y < q; ++y) face(y, v) = columns(y, v);
    face(q, v) = costs[v];
  }
  Vector face_rhs = d.marginal_y();
  face_rhs.push_back(out.value);

  Vector best = out.point;
  for (double& w : best)
    if (w <= tol.lp * 1e-3) w = 0.0;
  ReduceToBasic(face, best, tol.rank);
  PolishOnSupport(face, face_rhs, best, tol.rank);
  const double simplex_entropy = WeightEntropy(best);

  if (auto greedy = GreedyPeel(face, face_rhs, tol)) {
    Vector candidate = *greedy;
    ReduceToBasic(face, candidate, tol.rank);
    if (PolishOnSupport(face, face_rhs, candidate, tol.rank)) {
      const Vector mixed = columns * candidate;
      double err = 0.0;
      for (std::size_t y = 0; y < q; ++y) err = std::max(err, std::abs(mixed[y] - d.marginal_y()[y]));
      if (err <= tol.prob && WeightEntropy(candidate) < simplex_entropy - 1e-12) best = candidate;
    }
  }

  // Order outcomes by decreasing weight, then by canonical vertex order.
  std::vector<std::size_t> support = SupportOf(best);
  std::stable_sort(support.begin(), support.end(),
                   [&](std::size_t a, std::size_t b) { return best[a] > best[b]; });
  const double total = std::accumulate(best.begin(), best.end(), 0.0);
  Vector p_u(support.size());
  Matrix y_given_u(q, support.size());
  for (std::size_t u = 0; u < support.size(); ++u) {
    p_u[u] = best[support[u]] / total;
    for (std::size_t y = 0; y < q; ++y) y_given_u(y, u) = vertices[support[u]][y];
  }

  G0Solution sol;
  double mixed_cost = 0.0;
  for (std::size_t u = 0; u < support.size(); ++u) mixed_cost += p_u[u] * costs[support[u]];
  sol.value = std::max(0.0, Entropy(d.marginal_y()) - mixed_cost);
  sol.mech = Mechanism(d, std::move(p_u), std::move(y_given_u));
  sol.vertex_count = nv;
  sol.simplex_entropy = simplex_entropy;
  return sol;
}

Membership MembershipInPhat(const JointDistribution& d, const Tolerances& tol) {
  Membership m;
  m.h_y_given_x = ConditionalEntropyYGivenX(d);
  if (d.x_is_function_of_y(tol.prob)) {
    m.status = MembershipStatus::kMember;
    m.g0 = m.h_y_given_x;
    m.via_deterministic = true;
    return m;
  }
  m.g0 = SolveG0(d, tol).value;
  const double gap = std::abs(m.g0 - m.h_y_given_x);
  if (gap <= tol.ent) {
    m.status = MembershipStatus::kMember;
  } else if (gap <= 100.0 * tol.ent) {
    m.status = MembershipStatus::kBoundary;
  } else {
    m.status = MembershipStatus::kNonMember;
  }
  return m;
}

MechanismBounds EntropyBounds(const JointDistribution& d, double achieved_entropy,
                               const Tolerances& tol, std::optional<Membership> membership) {
  if (!membership) membership = MembershipInPhat(d, tol);
  if (!membership->member())
    throw Error(ErrorCode::kNotInPhat, std::string("joint distribution is ") +
                                           MembershipStatusName(membership->status) +
                                           " (g0 != H(Y|X)); entropy bounds do not apply");

  MechanismBounds out;
  out.achieved_entropy = achieved_entropy;
  out.h_y_given_x = ConditionalEntropyYGivenX(d);
  out.degenerate = out.h_y_given_x <= tol.ent;
  out.nullity = RankAndNullity(d.x_given_y().matrix(), tol.rank).nullity;
  out.log_nullity_bound = std::log2(static_cast<double>(out.nullity + 1));

  const BoundMatrices bm = BuildBoundMatrices(d);
  out.rank_a = RankAndNullity(bm.a_xy, tol.rank).rank;
  out.unique = out.rank_a == d.y_size() && !d.y_is_function_of_x(tol.prob);

  LinearProgram lp{d.marginal_y(), bm.a_xy, bm.b_xy, std::nullopt, Sense::kMinimize};
  const LpOutcome lo = SolveLp(lp, tol);
  if (lo.status != LpStatus::kOptimal)
    throw Error(ErrorCode::kInfeasibleBoundLp,
                std::string("lower-bound LP is ") + LpStatusName(lo.status));
  out.k_lower = out.h_y_given_x + lo.value;

  lp.sense = Sense::kMaximize;
  const LpOutcome hi = SolveLp(lp, tol);
  if (hi.status == LpStatus::kInfeasible)
    throw Error(ErrorCode::kInfeasibleBoundLp, "upper-bound LP is infeasible");
  out.k_upper = hi.status == LpStatus::kUnbounded ? std::numeric_limits<double>::infinity()
                                                  : out.h_y_given_x + hi.value;

  lp.extra_ineq = LinearInequality{d.marginal_y(), out.log_nullity_bound - out.h_y_given_x};
  const LpOutcome strong = SolveLp(lp, tol);
  if (strong.status == LpStatus::kOptimal) {
    // The inequality caps the value; any excess is LP feasibility residual.
    out.k_upper_strengthened = std::min(out.h_y_given_x + strong.value, out.log_nullity_bound);
  } else {
    out.strengthened_fallback = true;
    out.k_upper_strengthened = std::min(out.k_upper, out.log_nullity_bound);
  }
  return out;
}

Mechanism BuildDecodeTable(const JointDistribution& d, const Mechanism& mech, const Tolerances& tol) {
  if (mech.y_size() != d.y_size() || mech.x_size() != d.x_size())
    throw Error(ErrorCode::kBadShape, "mechanism does not match the joint distribution");
  constexpr double kMassFloor = 1e-14;
  const std::size_t nu = mech.u_size();
  Mechanism out = mech;
  out.decode_.assign(d.x_size() * nu, std::nullopt);
  for (std::size_t x = 0; x < d.x_size(); ++x) {
    for (std::size_t u = 0; u < nu; ++u) {
      std::optional<std::size_t> found;
      for (std::size_t y = 0; y < d.y_size(); ++y) {
        if (d(x, y) * mech.p_u_given_y()(u, y) <= kMassFloor) continue;
        if (found)
          throw Error(ErrorCode::kNotDecodable,
                      "(x=" + std::to_string(x) + ", u=" + std::to_string(u) + ") is consistent with y=" +
                          std::to_string(*found) + " and y=" + std::to_string(y));
        found = y;
      }
      out.decode_[x * nu + u] = found;
    }
  }
  const double residual = ComputeInformationTerms(d, out).h_y_given_xu;
  if (residual > tol.ent)
    throw Error(ErrorCode::kNotDecodable, "H(Y|X,U) = " + std::to_string(residual) + " bits");
  return out;
}

InformationTerms ComputeInformationTerms(const JointDistribution& d, const Mechanism& mech) {
  const std::size_t nx = d.x_size(), ny = d.y_size(), nu = mech.u_size();
  auto joint = [&](std::size_t x, std::size_t y, std::size_t u) {
    return d(x, y) * mech.p_u_given_y()(u, y);
  };
  Matrix p_yu(ny, nu), p_xu(nx, nu);
  Vector p_u(nu, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t u = 0; u < nu; ++u) {
        const double p = joint(x, y, u);
        p_yu(y, u) += p;
        p_xu(x, u) += p;
        p_u[u] += p;
      }
  const Vector& p_x = d.marginal_x();
  const Vector& p_y = d.marginal_y();

  InformationTerms t;
  t.h_u = Entropy(p_u);
  t.h_y_given_x = ConditionalEntropyYGivenX(d);
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t u = 0; u < nu; ++u)
      if (p_yu(y, u) > 0.0) t.i_uy += p_yu(y, u) * std::log2(p_yu(y, u) / (p_y[y] * p_u[u]));
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t u = 0; u < nu; ++u)
      if (p_xu(x, u) > 0.0) t.i_xu += p_xu(x, u) * std::log2(p_xu(x, u) / (p_x[x] * p_u[u]));
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t u = 0; u < nu; ++u) {
        const double p = joint(x, y, u);
        if (p <= 0.0) continue;
        // p(x,u|y) / (p(x|y) p(u|y)) = p(x,y,u) p(y) / (p(x,y) p(y,u))
        t.i_xu_given_y += p * std::log2(p * p_y[y] / (d(x, y) * p_yu(y, u)));
        t.h_y_given_xu -= p * std::log2(p / p_xu(x, u));
      }
  return t;
}

Vector PerSymbolIdentityResiduals(const JointDistribution& d, const Mechanism& mech) {
  Vector h_u_given_y(d.y_size(), 0.0);
  for (std::size_t y = 0; y < d.y_size(); ++y)
    for (std::size_t u = 0; u < mech.u_size(); ++u) h_u_given_y[y] += EntropyTerm(mech.p_u_given_y()(u, y));
  const double h_y_x = ConditionalEntropyYGivenX(d);
  Vector out(d.x_size());
  for (std::size_t x = 0; x < d.x_size(); ++x) {
    double lhs = 0.0;
    for (std::size_t y = 0; y < d.y_size(); ++y)
      lhs += (d(x, y) / d.marginal_x()[x] - d.marginal_y()[y]) * h_u_given_y[y];
    out[x] = lhs - (h_y_x - ConditionalEntropyPerX(d, x));
  }
  return out;
}

double ZeroLeakageResidual(const JointDistribution& d, const Mechanism& mech) {
  const Kernel kx = d.x_given_y();
  double worst = 0.0;
  for (std::size_t u = 0; u < mech.u_size(); ++u) {
    const Vector col = mech.p_y_given_u().column(u);
    const Vector px = kx.matrix() * col;
    for (std::size_t x = 0; x < d.x_size(); ++x) worst = std::max(worst, std::abs(px[x] - d.marginal_x()[x]));
  }
  return worst;
}

}  // namespace zeroleak
