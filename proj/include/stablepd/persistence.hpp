#pragma once

#include "stablepd/field.hpp"

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

namespace stablepd {

/// One birth-death pair under the super-level convention (birth >= death).
template <typename Scalar>
struct PersistencePoint {
  int degree = 0;
  Scalar birth = 0;
  Scalar death = 0;
  bool essential = false;

  Scalar persistence() const { return birth - death; }
  bool operator==(const PersistencePoint&) const = default;
};

/// Canonical order: degree ascending, birth descending, death descending, essential first.
template <typename Scalar>
bool canonical_less(const PersistencePoint<Scalar>& a, const PersistencePoint<Scalar>& b) {
  if (a.degree != b.degree) return a.degree < b.degree;
  if (a.birth != b.birth) return a.birth > b.birth;
  if (a.death != b.death) return a.death > b.death;
  return a.essential && !b.essential;
}

template <typename Scalar>
struct PersistenceDiagram {
  std::vector<PersistencePoint<Scalar>> points;
  int scale_index = 1;
  Filtration filtration = Filtration::intensity;

  /// Positions (into `points`) of the points of one homology degree.
  std::vector<std::size_t> indices_of_degree(int degree) const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < points.size(); ++i)
      if (points[i].degree == degree) idx.push_back(i);
    return idx;
  }

  void sort_canonical() { std::stable_sort(points.begin(), points.end(), canonical_less<Scalar>); }

  bool operator==(const PersistenceDiagram&) const = default;
};

namespace detail {

/// Union-find over pixel indices that remembers, per root, the component's
/// birth value and smallest member index.
template <typename Scalar>
class ComponentForest {
 public:
  explicit ComponentForest(std::size_t n) : parent_(n), birth_(n), min_index_(n) {
    std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
    std::iota(min_index_.begin(), min_index_.end(), std::uint32_t{0});
  }

  void make(std::uint32_t i, Scalar birth) { birth_[i] = birth; }

  std::uint32_t find(std::uint32_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  Scalar birth(std::uint32_t root) const { return birth_[root]; }
  std::uint32_t min_index(std::uint32_t root) const { return min_index_[root]; }

  /// Links `young` under `old`; the caller decides which is elder.
  void attach(std::uint32_t young, std::uint32_t old) {
    parent_[young] = old;
    min_index_[old] = std::min(min_index_[old], min_index_[young]);
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<Scalar> birth_;
  std::vector<std::uint32_t> min_index_;
};

template <typename Scalar>
std::vector<std::uint32_t> sorted_pixels(const ScalarField<Scalar>& f, bool descending) {
  std::vector<std::uint32_t> order(static_cast<std::size_t>(f.size()));
  std::iota(order.begin(), order.end(), std::uint32_t{0});
  const Scalar* v = f.values().data();
  if (descending)
    std::stable_sort(order.begin(), order.end(), [v](auto a, auto b) { return v[a] > v[b]; });
  else
    std::stable_sort(order.begin(), order.end(), [v](auto a, auto b) { return v[a] < v[b]; });
  return order;
}

// Degree 0: pixels enter by descending value; 4-neighbour edges merge
// components and the younger one (lower birth, then larger min index) dies.
template <typename Scalar>
void degree0_pairs(const ScalarField<Scalar>& f, std::vector<PersistencePoint<Scalar>>& out) {
  const int w = f.width();
  const int h = f.height();
  const Scalar* v = f.values().data();
  const auto order = sorted_pixels(f, /*descending=*/true);
  ComponentForest<Scalar> uf(order.size());
  std::vector<std::uint8_t> present(order.size(), 0);

  for (const std::uint32_t p : order) {
    present[p] = 1;
    uf.make(p, v[p]);
    const int r = static_cast<int>(p) / w;
    const int c = static_cast<int>(p) % w;
    const std::array<std::pair<int, int>, 4> nbrs{{{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}}};
    for (const auto& [nr, nc] : nbrs) {
      if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
      const auto q = static_cast<std::uint32_t>(nr * w + nc);
      if (!present[q]) continue;
      std::uint32_t a = uf.find(p);
      std::uint32_t b = uf.find(q);
      if (a == b) continue;
      const bool a_elder = uf.birth(a) > uf.birth(b) ||
                           (uf.birth(a) == uf.birth(b) && uf.min_index(a) < uf.min_index(b));
      if (a_elder) std::swap(a, b);
      // a is the younger root.
      if (uf.birth(a) > v[p]) out.push_back({0, uf.birth(a), v[p], false});
      uf.attach(a, b);
    }
  }
  const std::uint32_t root = uf.find(order.front());
  out.push_back({0, uf.birth(root), v[order.back()], true});
}

// Degree 1 by planar duality: a bounded 8-connected component of {f < t}
// is a hole of the super-level complex at t. Pixels enter by ascending value;
// border pixels attach to a virtual outside node that is always elder.
template <typename Scalar>
void degree1_pairs(const ScalarField<Scalar>& f, std::vector<PersistencePoint<Scalar>>& out) {
  const int w = f.width();
  const int h = f.height();
  const Scalar* v = f.values().data();
  const auto order = sorted_pixels(f, /*descending=*/false);
  const auto outside = static_cast<std::uint32_t>(order.size());
  ComponentForest<Scalar> uf(order.size() + 1);
  uf.make(outside, -std::numeric_limits<Scalar>::infinity());
  std::vector<std::uint8_t> present(order.size(), 0);

  auto merge = [&](std::uint32_t p, std::uint32_t q) {
    std::uint32_t a = uf.find(p);
    std::uint32_t b = uf.find(q);
    if (a == b) return;
    // Elder here means the lower sub-level birth; outside wins every tie.
    const bool a_elder = a == outside ||
                         (b != outside && (uf.birth(a) < uf.birth(b) ||
                                           (uf.birth(a) == uf.birth(b) && uf.min_index(a) < uf.min_index(b))));
    if (a_elder) std::swap(a, b);
    if (v[p] > uf.birth(a)) out.push_back({1, v[p], uf.birth(a), false});
    uf.attach(a, b);
  };

  for (const std::uint32_t p : order) {
    present[p] = 1;
    uf.make(p, v[p]);
    const int r = static_cast<int>(p) / w;
    const int c = static_cast<int>(p) % w;
    if (r == 0 || c == 0 || r == h - 1 || c == w - 1) merge(p, outside);
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        const int nr = r + dr;
        const int nc = c + dc;
        if ((dr == 0 && dc == 0) || nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
        const auto q = static_cast<std::uint32_t>(nr * w + nc);
        if (present[q]) merge(p, q);
      }
    }
  }
}

}  // namespace detail

/// Degree-0 and degree-1 diagram of the super-level filtration of `f`
/// (pixels as vertices, 4-neighbour edges, squares when all corners are present).
///
/// Only off-diagonal pairs (birth > death) are reported, plus the single
/// essential component whose death is clamped to min(f). Points are returned
/// in canonical order.
template <typename Scalar>
PersistenceDiagram<Scalar> compute_pd(const ScalarField<Scalar>& f, int scale_index = 1,
                                      Filtration filtration = Filtration::intensity) {
  PersistenceDiagram<Scalar> pd;
  pd.scale_index = scale_index;
  pd.filtration = filtration;
  detail::degree0_pairs(f, pd.points);
  detail::degree1_pairs(f, pd.points);
  pd.sort_canonical();
  return pd;
}

struct BettiNumbers {
  int b0 = 0;
  int b1 = 0;
  bool operator==(const BettiNumbers&) const = default;
};

/// Betti numbers of the super-level complex at threshold `tau`.
template <typename Scalar>
BettiNumbers betti_at(const PersistenceDiagram<Scalar>& pd, Scalar tau) {
  BettiNumbers b;
  for (const auto& p : pd.points) {
    const bool alive = p.birth >= tau && (p.essential || tau > p.death);
    if (!alive) continue;
    (p.degree == 0 ? b.b0 : b.b1) += 1;
  }
  return b;
}

/// Removes zero-persistence points, including a degenerate essential point.
template <typename Scalar>
PersistenceDiagram<Scalar> drop_zero_persistence(PersistenceDiagram<Scalar> pd) {
  std::erase_if(pd.points, [](const auto& p) { return p.birth == p.death; });
  return pd;
}

}  // namespace stablepd
