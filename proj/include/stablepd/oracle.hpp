#pragma once

#include "stablepd/persistence.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace stablepd {

inline constexpr int kOracleMaxSide = 16;

/// Reference diagram by explicit boundary-matrix reduction over GF(2).
///
/// Builds every vertex, edge and square of the cubical complex, orders cells
/// by descending value (ties: lower dimension first, then lexicographic cell
/// coordinates) and runs the standard column reduction. Cubic in the number
/// of cells; meant for small fields only.
template <typename Scalar>
PersistenceDiagram<Scalar> oracle_pd(const ScalarField<Scalar>& f, int max_side = kOracleMaxSide) {
  const int h = f.height();
  const int w = f.width();
  if (h > max_side || w > max_side) throw std::invalid_argument("field exceeds oracle size limit");

  // Cells live on the doubled grid: (2r, 2c) vertex, one odd coordinate an
  // edge, both odd a square.
  struct Cell {
    int y, x, dim;
    Scalar value;
  };
  const int gh = 2 * h - 1;
  const int gw = 2 * w - 1;
  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(gh) * gw);
  for (int y = 0; y < gh; ++y) {
    for (int x = 0; x < gw; ++x) {
      Scalar v = f(y / 2, x / 2);
      if (y % 2) v = std::min(v, f(y / 2 + 1, x / 2));
      if (x % 2) v = std::min(v, f(y / 2, x / 2 + 1));
      if (y % 2 && x % 2) v = std::min(v, f(y / 2 + 1, x / 2 + 1));
      cells.push_back({y, x, (y % 2) + (x % 2), v});
    }
  }
  std::vector<int> order(cells.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Cell& ca = cells[a];
    const Cell& cb = cells[b];
    if (ca.value != cb.value) return ca.value > cb.value;
    if (ca.dim != cb.dim) return ca.dim < cb.dim;
    if (ca.y != cb.y) return ca.y < cb.y;
    return ca.x < cb.x;
  });
  std::vector<int> position(cells.size());
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = static_cast<int>(i);

  auto grid_index = [gw](int y, int x) { return y * gw + x; };
  // Columns hold filtration positions of facets, kept sorted ascending.
  std::vector<std::vector<int>> columns(order.size());
  for (std::size_t j = 0; j < order.size(); ++j) {
    const Cell& c = cells[order[j]];
    auto& col = columns[j];
    if (c.y % 2) {
      col.push_back(position[grid_index(c.y - 1, c.x)]);
      col.push_back(position[grid_index(c.y + 1, c.x)]);
    }
    if (c.x % 2) {
      col.push_back(position[grid_index(c.y, c.x - 1)]);
      col.push_back(position[grid_index(c.y, c.x + 1)]);
    }
    std::sort(col.begin(), col.end());
  }

  std::vector<int> pivot_owner(order.size(), -1);
  std::vector<char> paired(order.size(), 0);
  PersistenceDiagram<Scalar> pd;
  std::vector<int> scratch;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    auto& col = columns[j];
    while (!col.empty() && pivot_owner[col.back()] >= 0) {
      const auto& other = columns[pivot_owner[col.back()]];
      scratch.clear();
      std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(),
                                    std::back_inserter(scratch));
      col.swap(scratch);
    }
    if (col.empty()) continue;
    const int low = col.back();
    pivot_owner[low] = static_cast<int>(j);
    paired[low] = paired[j] = 1;
    const Cell& born = cells[order[low]];
    const Cell& dies = cells[order[j]];
    if (born.value > dies.value) pd.points.push_back({born.dim, born.value, dies.value, false});
  }
  const Scalar global_min = f.values().minCoeff();
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (paired[j]) continue;
    const Cell& c = cells[order[j]];
    pd.points.push_back({c.dim, c.value, global_min, true});
  }
  pd.sort_canonical();
  return pd;
}

}  // namespace stablepd
