#include "stablepd/matching.hpp"
#include "support/test_support.hpp"

#include <doctest.h>

#include <random>

using namespace stablepd;

namespace {

using P = PersistencePoint<double>;

PersistenceDiagram<double> diagram(std::vector<P> pts) {
  PersistenceDiagram<double> pd;
  pd.points = std::move(pts);
  return pd;
}

P random_point(std::mt19937_64& rng, int degree = 0) {
  std::uniform_real_distribution<double> u(0, 1);
  double b = u(rng), d = u(rng);
  if (b < d) std::swap(b, d);
  return {degree, b, d, false};
}

}  // namespace

TEST_SUITE("matching") {

TEST_CASE("metric names round trip") {
  for (auto m : {DistanceMetric::euclidean, DistanceMetric::persistence_scaled, DistanceMetric::relative_persistence})
    CHECK(parse_metric(to_string(m)) == m);
  CHECK_THROWS_AS(parse_metric("wasserstein"), std::invalid_argument);
}

TEST_CASE("point_distance hand values") {
  const P p{0, 3, 0, false}, q{0, 0, 4, false};
  CHECK(point_distance(p, q, DistanceMetric::euclidean) == 5.0);
  for (auto m : {DistanceMetric::euclidean, DistanceMetric::persistence_scaled, DistanceMetric::relative_persistence})
    CHECK(point_distance(p, p, m) == 0.0);

  const P a{0, 4, 0, false}, b{0, 3, 0, false};
  CHECK(point_distance(a, b, DistanceMetric::euclidean) == 1.0);
  CHECK(point_distance(a, b, DistanceMetric::persistence_scaled) == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
  CHECK(point_distance(a, b, DistanceMetric::relative_persistence) == doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("relative persistence guards zero persistence") {
  const P a{0, 0.5, 0.5, true}, b{0, 0.25, 0.25, false};
  CHECK(point_distance(a, b, DistanceMetric::relative_persistence) ==
        point_distance(a, b, DistanceMetric::euclidean));
}

TEST_CASE("point_distance rejects degree mismatch") {
  CHECK_THROWS_AS(point_distance(P{0, 1, 0, false}, P{1, 1, 0, false}, DistanceMetric::euclidean),
                  std::invalid_argument);
}

TEST_CASE("metric properties on random points") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 500; ++t) {
    const P p = random_point(rng), q = random_point(rng);
    const double e = point_distance(p, q, DistanceMetric::euclidean);
    const double s = point_distance(p, q, DistanceMetric::persistence_scaled);
    const double r = point_distance(p, q, DistanceMetric::relative_persistence);
    CHECK(e == point_distance(q, p, DistanceMetric::euclidean));
    CHECK(s == point_distance(q, p, DistanceMetric::persistence_scaled));
    CHECK(r == point_distance(q, p, DistanceMetric::relative_persistence));
    CHECK(e > 0);
    CHECK(s > 0);
    CHECK(r >= e);
    CHECK(e >= s);
  }
}

TEST_CASE("distance_matrix") {
  const auto a = diagram({{0, 4, 0, false}, {1, 0.5, 0.1, false}, {0, 3, 0, false}});
  const auto b = diagram({{0, 3, 0, false}, {0, 0, 4, false}});
  SUBCASE("empty side") {
    const auto d = distance_matrix(diagram({}), b, 0, DistanceMetric::euclidean);
    CHECK(d.rows() == 0);
    CHECK(d.cols() == 2);
  }
  SUBCASE("self distances vanish on the diagonal") {
    const auto d = distance_matrix(a, a, 0, DistanceMetric::relative_persistence);
    CHECK(d.rows() == 2);
    CHECK(d.diagonal().isZero(0));
  }
  SUBCASE("entries are point distances of the degree's points") {
    const auto d = distance_matrix(a, b, 0, DistanceMetric::relative_persistence);
    REQUIRE(d.rows() == 2);
    CHECK(d(0, 0) == 1.25);
    CHECK(d(1, 0) == 0.0);
    CHECK(d(0, 1) == point_distance(a.points[0], b.points[1], DistanceMetric::relative_persistence));
    CHECK(d(1, 1) == point_distance(a.points[2], b.points[1], DistanceMetric::relative_persistence));
  }
}

TEST_CASE("solve_assignment small cases") {
  Eigen::MatrixXd d(2, 2);
  d << 0, 1, 1, 0;
  CHECK(solve_assignment(d) == Assignment{{0, 0}, {1, 1}});
  d << 1, 2, 2, 4;
  const auto a = solve_assignment(d);
  CHECK(a == Assignment{{0, 1}, {1, 0}});
  CHECK(assignment_cost(d, a) == 4.0);
  CHECK(solve_assignment(Eigen::MatrixXd(0, 3)).empty());
}

TEST_CASE("solve_assignment rectangular") {
  Eigen::MatrixXd d(2, 3);
  d << 5, 1, 9,  //
      1, 2, 9;
  const auto a = solve_assignment(d);
  CHECK(a == Assignment{{0, 1}, {1, 0}});
  CHECK(solve_assignment(d.transpose()) == Assignment{{0, 1}, {1, 0}});
}

TEST_CASE("solve_assignment rejects negative or non-finite costs") {
  Eigen::MatrixXd d(1, 1);
  d << -1;
  CHECK_THROWS_AS(solve_assignment(d), std::invalid_argument);
  d << std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(solve_assignment(d), std::invalid_argument);
}

TEST_CASE("solve_assignment matches brute force on random real matrices") {
  std::mt19937_64 rng(123);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_real_distribution<double> u(0, 10);
  for (int t = 0; t < 300; ++t) {
    Eigen::MatrixXd d(dim(rng), dim(rng));
    for (Eigen::Index i = 0; i < d.size(); ++i) d.data()[i] = u(rng);
    const auto a = solve_assignment(d);
    CHECK(a.size() == static_cast<std::size_t>(std::min(d.rows(), d.cols())));
    CHECK(assignment_cost(d, a) == doctest::Approx(stablepd::testing::brute_force_assignment_cost(d)).epsilon(1e-12));
    CHECK(solve_assignment(d) == a);
  }
}

TEST_CASE("match_diagrams") {
  SUBCASE("identical diagrams with zero threshold") {
    const auto a = diagram({{0, 0.9, 0.1, true}, {0, 0.5, 0.2, false}, {1, 0.7, 0.3, false}});
    const auto m = match_diagrams(a, a, 0, DistanceMetric::relative_persistence, 0.0);
    CHECK(m.pairs == std::vector<MatchedPair>{{0, 0, 0.0}, {1, 1, 0.0}});
    CHECK(m.unmatched_a.empty());
    CHECK(m.unmatched_b.empty());
    const auto m1 = match_diagrams(a, a, 1, DistanceMetric::relative_persistence, 0.0);
    CHECK(m1.pairs == std::vector<MatchedPair>{{2, 2, 0.0}});
  }
  SUBCASE("threshold below every distance") {
    const auto a = diagram({{0, 0.9, 0.1, false}});
    const auto b = diagram({{0, 0.5, 0.1, false}, {0, 0.4, 0.2, false}});
    const auto m = match_diagrams(a, b, 0, DistanceMetric::euclidean, 0.05);
    CHECK(m.pairs.empty());
    CHECK(m.unmatched_a == std::vector<std::size_t>{0});
    CHECK(m.unmatched_b == std::vector<std::size_t>{0, 1});
  }
  SUBCASE("hand-enumerated rectangular case") {
    const auto a = diagram({{0, 1.0, 0.0, false}});
    const auto b = diagram({{0, 0.9, 0.0, false}, {0, 0.2, 0.1, false}});
    const auto m = match_diagrams(a, b, 0, DistanceMetric::euclidean, 0.3);
    REQUIRE(m.pairs.size() == 1);
    CHECK(m.pairs[0].a == 0);
    CHECK(m.pairs[0].b == 0);
    CHECK(m.pairs[0].distance == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(m.unmatched_b == std::vector<std::size_t>{1});
  }
  SUBCASE("never accepts a pair beyond tau_m") {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 100; ++t) {
      std::vector<P> pa(t % 7), pb((t * 3) % 6);
      for (auto& p : pa) p = random_point(rng);
      for (auto& p : pb) p = random_point(rng);
      const auto m = match_diagrams(diagram(pa), diagram(pb), 0, DistanceMetric::relative_persistence, 0.2);
      for (const auto& pr : m.pairs) CHECK(pr.distance <= 0.2);
      CHECK(m.pairs.size() + m.unmatched_a.size() == pa.size());
      CHECK(m.pairs.size() + m.unmatched_b.size() == pb.size());
    }
  }
  CHECK_THROWS_AS(match_diagrams(diagram({}), diagram({}), 0, DistanceMetric::euclidean, -1.0),
                  std::invalid_argument);
}

}  // TEST_SUITE
