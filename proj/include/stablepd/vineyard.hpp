#pragma once

#include "stablepd/field.hpp"
#include "stablepd/matching.hpp"
#include "stablepd/persistence.hpp"

#include <algorithm>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace stablepd {

/// Thresholds and metric for cross-scale tracking.
struct VineyardParams {
  DistanceMetric metric = DistanceMetric::relative_persistence;
  double tau_m = 0.3;
  double tau_s = 0.7;
};

template <typename Scalar>
struct VineSegment {
  int scale_from = 1;
  std::size_t index_from = 0;  ///< position in diagram `scale_from`
  std::size_t index_to = 0;    ///< position in diagram `scale_from + 1`
  PersistencePoint<Scalar> point_from;
  PersistencePoint<Scalar> point_to;
  double distance = 0;
  double pers_from = 0;
  double pers_to = 0;
  bool operator==(const VineSegment&) const = default;
};

template <typename Scalar>
struct Vine {
  int id = 0;
  int degree = 0;
  std::vector<VineSegment<Scalar>> segments;
  int birth_scale = 1;
  int death_scale = 1;
  bool operator==(const Vine&) const = default;
};

/// Links points of consecutive diagrams into vines for one homology degree.
///
/// Diagrams must be ordered finest first. At each step the degree's points of
/// PD_i and PD_{i+1} are optimally assigned; accepted pairs extend the vine
/// that currently ends at the source point (keyed by its position in PD_i) or
/// start a new one. Vines whose end point finds no accepted partner die at
/// scale i+1. Vines are returned in creation order, ids 0..k-1.
template <typename Scalar>
std::vector<Vine<Scalar>> track_vines(std::span<const PersistenceDiagram<Scalar>> pds, int degree,
                                      DistanceMetric metric, double tau_m) {
  if (pds.size() < 2) throw std::invalid_argument("track_vines needs at least two diagrams");
  for (const auto& pd : pds)
    if (pd.filtration != pds.front().filtration)
      throw std::invalid_argument("track_vines: mixed filtrations");

  std::vector<Vine<Scalar>> vines;
  std::map<std::size_t, std::size_t> active;  // point index in PD_i -> vine
  const int n = static_cast<int>(pds.size());
  for (int i = 1; i < n; ++i) {
    const auto& a = pds[i - 1];
    const auto& b = pds[i];
    const MatchResult m = match_diagrams(a, b, degree, metric, tau_m);
    std::map<std::size_t, std::size_t> next;
    for (const auto& pair : m.pairs) {
      const auto& p = a.points[pair.a];
      const auto& q = b.points[pair.b];
      VineSegment<Scalar> s{i,       pair.a,        pair.b,
                            p,       q,             pair.distance,
                            static_cast<double>(p.persistence()), static_cast<double>(q.persistence())};
      std::size_t vine;
      if (const auto it = active.find(pair.a); it != active.end()) {
        vine = it->second;
        active.erase(it);
      } else {
        vine = vines.size();
        vines.push_back({static_cast<int>(vine), degree, {}, i, i});
      }
      vines[vine].segments.push_back(s);
      next[pair.b] = vine;
    }
    // Whatever is still active was not extended at this step.
    for (const auto& [point, vine] : active) vines[vine].death_scale = i + 1;
    active = std::move(next);
  }
  for (const auto& [point, vine] : active) vines[vine].death_scale = n;
  return vines;
}

/// Persistence-weighted mean of 1/(1 + distance) over a vine's segments, weights floored at 0.1.
template <typename Scalar>
double stability_score(const Vine<Scalar>& v) {
  if (v.segments.empty()) throw std::invalid_argument("stability_score: vine has no segments");
  double num = 0;
  double den = 0;
  for (const auto& s : v.segments) {
    const double w = std::max(0.1, (s.pers_from + s.pers_to) / 2.0);
    num += w / (1.0 + s.distance);
    den += w;
  }
  return num / den;
}

template <typename Scalar>
struct StablePoint {
  PersistencePoint<Scalar> point;
  int vine_id = 0;
  int medial_scale = 1;
  double sigma = 1;
  bool operator==(const StablePoint&) const = default;
};

/// Sort key of the stable-diagram CSV: degree, sigma desc, birth desc, then vine id.
template <typename Scalar>
bool stable_less(const StablePoint<Scalar>& a, const StablePoint<Scalar>& b) {
  if (a.point.degree != b.point.degree) return a.point.degree < b.point.degree;
  if (a.sigma != b.sigma) return a.sigma > b.sigma;
  if (a.point.birth != b.point.birth) return a.point.birth > b.point.birth;
  return a.vine_id < b.vine_id;
}

template <typename Scalar>
struct StableDiagram {
  std::vector<StablePoint<Scalar>> points;
  Filtration filtration = Filtration::intensity;

  void sort_canonical() { std::stable_sort(points.begin(), points.end(), stable_less<Scalar>); }
  bool operator==(const StableDiagram&) const = default;
};

/// Medial-scale representatives of vines with sigma >= tau_s, in input order.
template <typename Scalar>
StableDiagram<Scalar> stable_diagram(std::span<const Vine<Scalar>> vines, double tau_s,
                                     Filtration filtration = Filtration::intensity) {
  if (!(tau_s >= 0 && tau_s <= 1)) throw std::invalid_argument("stable_diagram: tau_s must lie in [0, 1]");
  StableDiagram<Scalar> out;
  out.filtration = filtration;
  for (const auto& v : vines) {
    const double sigma = stability_score(v);
    if (sigma < tau_s) continue;
    const auto& mid = v.segments[v.segments.size() / 2];
    out.points.push_back({mid.point_from, v.id, mid.scale_from, sigma});
  }
  return out;
}

template <typename Scalar>
struct VineyardResult {
  std::vector<Vine<Scalar>> vines;  ///< degree 0 then degree 1, ids unique across both
  StableDiagram<Scalar> stable;
};

/// Tracks degrees 0 and 1 separately and unions their stable points.
template <typename Scalar>
VineyardResult<Scalar> run_vineyard(std::span<const PersistenceDiagram<Scalar>> pds,
                                    const VineyardParams& params = {}) {
  if (pds.empty()) throw std::invalid_argument("run_vineyard: no diagrams");
  VineyardResult<Scalar> result;
  result.stable.filtration = pds.front().filtration;
  for (int degree = 0; degree <= 1; ++degree) {
    auto vines = track_vines(pds, degree, params.metric, params.tau_m);
    const int offset = static_cast<int>(result.vines.size());
    for (auto& v : vines) v.id += offset;
    auto part = stable_diagram<Scalar>(vines, params.tau_s, result.stable.filtration);
    result.stable.points.insert(result.stable.points.end(), part.points.begin(), part.points.end());
    result.vines.insert(result.vines.end(), vines.begin(), vines.end());
  }
  result.stable.sort_canonical();
  return result;
}

/// Diagram of every pyramid level (scale index 1 = finest).
template <typename Scalar>
std::vector<PersistenceDiagram<Scalar>> pyramid_diagrams(const ScalePyramid<Scalar>& pyramid) {
  std::vector<PersistenceDiagram<Scalar>> pds;
  pds.reserve(pyramid.levels.size());
  for (std::size_t i = 0; i < pyramid.levels.size(); ++i)
    pds.push_back(compute_pd(pyramid.levels[i], static_cast<int>(i) + 1, pyramid.filtration));
  return pds;
}

template <typename Scalar>
StableDiagram<Scalar> stabilize(const ScalePyramid<Scalar>& pyramid, const VineyardParams& params = {}) {
  if (pyramid.levels.size() < 2) throw std::invalid_argument("stabilize needs at least two pyramid levels");
  const auto pds = pyramid_diagrams(pyramid);
  return run_vineyard<Scalar>(pds, params).stable;
}

}  // namespace stablepd
