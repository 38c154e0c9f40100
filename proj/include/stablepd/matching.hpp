#pragma once

#include "stablepd/persistence.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stablepd {

enum class DistanceMetric { euclidean, persistence_scaled, relative_persistence };

inline std::string_view to_string(DistanceMetric m) {
  switch (m) {
    case DistanceMetric::euclidean: return "euclidean";
    case DistanceMetric::persistence_scaled: return "pscaled";
    case DistanceMetric::relative_persistence: return "relpers";
  }
  return "relpers";
}

inline DistanceMetric parse_metric(std::string_view s) {
  if (s == "euclidean") return DistanceMetric::euclidean;
  if (s == "pscaled") return DistanceMetric::persistence_scaled;
  if (s == "relpers") return DistanceMetric::relative_persistence;
  throw std::invalid_argument("unknown metric '" + std::string(s) + "'");
}

/// Distance between two same-degree diagram points, computed in double.
template <typename Scalar>
double point_distance(const PersistencePoint<Scalar>& p, const PersistencePoint<Scalar>& q,
                      DistanceMetric metric) {
  if (p.degree != q.degree) throw std::invalid_argument("point_distance: degree mismatch");
  const double db = static_cast<double>(p.birth) - static_cast<double>(q.birth);
  const double dd = static_cast<double>(p.death) - static_cast<double>(q.death);
  const double base = std::sqrt(db * db + dd * dd);
  const double pp = static_cast<double>(p.birth) - static_cast<double>(p.death);
  const double pq = static_cast<double>(q.birth) - static_cast<double>(q.death);
  switch (metric) {
    case DistanceMetric::euclidean:
      return base;
    case DistanceMetric::persistence_scaled:
      return base / (1.0 + (pp + pq) / 2.0);
    case DistanceMetric::relative_persistence: {
      const double top = std::max(pp, pq);
      const double rel = top > 0 ? std::abs(pp - pq) / top : 0.0;
      return base * (1.0 + rel);
    }
  }
  return base;
}

/// Rows: degree-`degree` points of A in diagram order; columns: same for B.
template <typename Scalar>
Eigen::MatrixXd distance_matrix(const PersistenceDiagram<Scalar>& a, const PersistenceDiagram<Scalar>& b,
                                int degree, DistanceMetric metric) {
  const auto ia = a.indices_of_degree(degree);
  const auto ib = b.indices_of_degree(degree);
  Eigen::MatrixXd d(static_cast<Eigen::Index>(ia.size()), static_cast<Eigen::Index>(ib.size()));
  for (std::size_t i = 0; i < ia.size(); ++i)
    for (std::size_t j = 0; j < ib.size(); ++j)
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          point_distance(a.points[ia[i]], b.points[ib[j]], metric);
  return d;
}

using Assignment = std::vector<std::pair<Eigen::Index, Eigen::Index>>;

/// Minimum-cost one-to-one assignment of min(rows, cols) pairs.
///
/// Rectangular inputs are padded to square with `pad_cost` (default
/// max(D) + 1); pairs touching padding are dropped from the result. Shortest
/// augmenting path Hungarian method with dual potentials, O(n^3). Columns are
/// scanned in ascending order and the first strict minimum wins, so equal
/// inputs always give the same assignment. Result is sorted by row.
inline Assignment solve_assignment(const Eigen::MatrixXd& cost, std::optional<double> pad_cost = std::nullopt) {
  const Eigen::Index rows = cost.rows();
  const Eigen::Index cols = cost.cols();
  if (rows == 0 || cols == 0) return {};
  if (!cost.allFinite() || cost.minCoeff() < 0)
    throw std::invalid_argument("solve_assignment: costs must be finite and non-negative");
  const Eigen::Index n = std::max(rows, cols);
  const double pad = pad_cost.value_or(cost.maxCoeff() + 1.0);
  Eigen::MatrixXd c = Eigen::MatrixXd::Constant(n, n, pad);
  c.topLeftCorner(rows, cols) = cost;

  // 1-based internals: column 0 is the virtual source of each augmentation.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<Eigen::Index> match_of_col(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (Eigen::Index i = 1; i <= n; ++i) {
    match_of_col[0] = i;
    Eigen::Index j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const Eigen::Index i0 = match_of_col[j0];
      double delta = inf;
      Eigen::Index j1 = 0;
      for (Eigen::Index j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double reduced = c(i0 - 1, j - 1) - u[i0] - v[j];
        if (reduced < minv[j]) {
          minv[j] = reduced;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Eigen::Index j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match_of_col[j0] != 0);
    do {
      const Eigen::Index j1 = way[j0];
      match_of_col[j0] = match_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment out;
  out.reserve(static_cast<std::size_t>(std::min(rows, cols)));
  for (Eigen::Index j = 1; j <= n; ++j) {
    const Eigen::Index r = match_of_col[j] - 1;
    const Eigen::Index col = j - 1;
    if (r < rows && col < cols) out.emplace_back(r, col);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline double assignment_cost(const Eigen::MatrixXd& cost, const Assignment& a) {
  double total = 0;
  for (const auto& [r, c] : a) total += cost(r, c);
  return total;
}

struct MatchedPair {
  std::size_t a = 0;  ///< index into A's points
  std::size_t b = 0;  ///< index into B's points
  double distance = 0;
  bool operator==(const MatchedPair&) const = default;
};

/// Accepted correspondences between two diagrams; indices refer to the full point lists.
struct MatchResult {
  std::vector<MatchedPair> pairs;
  std::vector<std::size_t> unmatched_a;
  std::vector<std::size_t> unmatched_b;
  bool operator==(const MatchResult&) const = default;
};

/// Optimal assignment between the degree-`degree` points of A and B, keeping
/// only pairs at distance <= tau_m.
template <typename Scalar>
MatchResult match_diagrams(const PersistenceDiagram<Scalar>& a, const PersistenceDiagram<Scalar>& b,
                           int degree, DistanceMetric metric, double tau_m) {
  if (!(tau_m >= 0)) throw std::invalid_argument("match_diagrams: tau_m must be >= 0");
  const auto ia = a.indices_of_degree(degree);
  const auto ib = b.indices_of_degree(degree);
  const Eigen::MatrixXd d = distance_matrix(a, b, degree, metric);
  std::optional<double> sentinel;
  if (d.size() > 0) sentinel = tau_m + d.maxCoeff() + 1.0;
  const Assignment assignment = solve_assignment(d, sentinel);

  MatchResult result;
  std::vector<char> used_a(ia.size(), 0), used_b(ib.size(), 0);
  for (const auto& [r, c] : assignment) {
    if (d(r, c) > tau_m) continue;
    result.pairs.push_back({ia[r], ib[c], d(r, c)});
    used_a[r] = used_b[c] = 1;
  }
  for (std::size_t i = 0; i < ia.size(); ++i)
    if (!used_a[i]) result.unmatched_a.push_back(ia[i]);
  for (std::size_t j = 0; j < ib.size(); ++j)
    if (!used_b[j]) result.unmatched_b.push_back(ib[j]);
  return result;
}

}  // namespace stablepd
