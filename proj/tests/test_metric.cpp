#include "doctest.h"
#include "prefgame/metric.hpp"
#include "prefgame/random.hpp"

using namespace prefgame;

namespace {

double scalar_l2sq(const Coords& a, const Coords& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return s;
}

std::vector<Point> bit_vectors(std::size_t m) {
  std::vector<Point> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    Coords c(m);
    for (std::size_t j = 0; j < m; ++j) c[j] = (mask >> j) & 1U ? 1.0 : 0.0;
    out.emplace_back(c);
  }
  return out;
}

}  // namespace

TEST_CASE("uniform metric distances") {
  const auto m = Metric::uniform({"a", "b", "c"});
  CHECK(m(Point(std::size_t{0}), Point(std::size_t{1})) == 1.0);
  CHECK(m(Point(std::size_t{0}), Point(std::size_t{0})) == 0.0);
}

TEST_CASE("squared euclidean on ballots and interior points") {
  const auto m = Metric::squared_euclidean(4);
  CHECK(m(Coords{1, 1, 0, 0}, Coords{0, 1, 1, 0}) == 2.0);
  const Coords s{2.0 / 3, 2.0 / 3, 1.0 / 3, 1.0 / 3};
  CHECK(m(s, Coords{1, 1, 0, 0}) == doctest::Approx(4.0 / 9).epsilon(1e-15));
  CHECK(m(s, Coords{1, 1, 0, 0}) == scalar_l2sq(s, Coords{1, 1, 0, 0}));
}

TEST_CASE("hamming distance") {
  const auto m = Metric::hamming(4);
  CHECK(m(Coords{1, 1, 0, 0}, Coords{0, 1, 1, 0}) == 2.0);
  CHECK(m(Coords{1, 0, 1, 0}, Coords{1, 0, 1, 0}) == 0.0);
}

TEST_CASE("table metric accepted when the triangle is tight") {
  const auto m = Metric::table({"a", "b", "c"}, {{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
  std::vector<Point> pts{std::size_t{0}, std::size_t{1}, std::size_t{2}};
  const auto v = validate_approx_metric(m, pts);
  CHECK(v.exact());
  CHECK(v.min_rho == 1.0);
}

TEST_CASE("build_metric rejects malformed tables") {
  MetricDescriptor d;
  d.kind = MetricKind::table;
  d.labels = {"a", "b"};
  d.matrix = {{0, 1}, {2, 0}};
  CHECK_THROWS_AS(build_metric(d), Error);
  d.matrix = {{0, -1}, {-1, 0}};
  CHECK_THROWS_AS(build_metric(d), Error);
  d.matrix = {{0.5, 1}, {1, 0}};
  CHECK_THROWS_AS(build_metric(d), Error);
  d.matrix = {{0, 1}, {1, 0}};
  d.rho = 0.5;
  CHECK_THROWS_AS(build_metric(d), Error);
  d.rho = 1.0;
  CHECK_NOTHROW(build_metric(d));
}

TEST_CASE("points outside the domain are rejected") {
  const auto m = Metric::squared_euclidean(3);
  CHECK_THROWS_AS(m(Coords{1, 0}, Coords{0, 1, 0}), DomainError);
  const auto u = Metric::uniform({"a", "b"});
  CHECK_THROWS_AS(u(Point(std::size_t{0}), Point(std::size_t{7})), DomainError);
}

TEST_CASE("validate_approx_metric reports the tight factor") {
  SUBCASE("uniform is exact") {
    const auto m = Metric::uniform({"a", "b", "c"});
    std::vector<Point> pts{std::size_t{0}, std::size_t{1}, std::size_t{2}};
    CHECK(validate_approx_metric(m, pts).min_rho == 1.0);
  }
  SUBCASE("squared euclidean midpoint triple gives 2") {
    const auto m = Metric::squared_euclidean(2);
    std::vector<Point> pts{Coords{1, 0}, Coords{0, 1}, Coords{0.5, 0.5}};
    const auto v = validate_approx_metric(m, pts);
    CHECK(v.min_rho == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(v.within_declared);
  }
  SUBCASE("under-declared table is flagged") {
    const auto m = Metric::table({"a", "b", "c"}, {{0, 5, 1}, {5, 0, 1}, {1, 1, 0}});
    std::vector<Point> pts{std::size_t{0}, std::size_t{1}, std::size_t{2}};
    const auto v = validate_approx_metric(m, pts);
    CHECK(v.min_rho == doctest::Approx(2.5).epsilon(1e-12));
    CHECK_FALSE(v.within_declared);
    CHECK_FALSE(v.exact());
  }
  SUBCASE("empty point set") {
    const auto m = Metric::uniform({"a", "b"});
    CHECK_THROWS(validate_approx_metric(m, std::vector<Point>{}));
  }
}

TEST_CASE("min_rho attains the bound on some triple") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> t(4, std::vector<double>(4, 0.0));
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = a + 1; b < 4; ++b) t[a][b] = t[b][a] = 0.1 + uniform01(rng);
    const auto m = Metric::table({"a", "b", "c", "d"}, t, 10.0);
    std::vector<Point> pts{std::size_t{0}, std::size_t{1}, std::size_t{2}, std::size_t{3}};
    const double r = validate_approx_metric(m, pts).min_rho;
    double attained = 1.0;
    bool holds = true;
    for (std::size_t x = 0; x < 4; ++x)
      for (std::size_t y = 0; y < 4; ++y)
        for (std::size_t z = 0; z < 4; ++z) {
          if (t[x][y] > r * (t[x][z] + t[z][y])) holds = false;
          if (t[x][z] + t[z][y] > 0) attained = std::max(attained, t[x][y] / (t[x][z] + t[z][y]));
        }
    CHECK(holds);
    CHECK(std::abs(attained - r) <= 1e-12);
  }
}

TEST_CASE("squared euclidean equals hamming on bit vectors") {
  for (std::size_t m = 1; m <= 6; ++m) {
    const auto l2 = Metric::squared_euclidean(m);
    const auto h = Metric::hamming(m);
    const auto pts = bit_vectors(m);
    bool same = true;
    for (const auto& a : pts)
      for (const auto& b : pts) same = same && l2(a, b) == h(a, b);
    CHECK(same);
  }
}

TEST_CASE("symmetry and zero diagonal on random pairs") {
  Rng rng(5);
  const auto l2 = Metric::squared_euclidean(5);
  const auto h = Metric::hamming(5);
  const auto u = Metric::uniform({"a", "b", "c", "d"});
  bool ok = true;
  for (int t = 0; t < 1000; ++t) {
    Coords a(5), b(5), ba(5), bb(5);
    for (std::size_t j = 0; j < 5; ++j) {
      a[j] = uniform01(rng);
      b[j] = uniform01(rng);
      ba[j] = static_cast<double>(uniform_index(rng, 2));
      bb[j] = static_cast<double>(uniform_index(rng, 2));
    }
    const Point la = uniform_index(rng, 4), lb = uniform_index(rng, 4);
    ok = ok && l2(a, b) == l2(b, a) && l2(a, a) == 0.0;
    ok = ok && h(ba, bb) == h(bb, ba) && h(ba, ba) == 0.0;
    ok = ok && u(la, lb) == u(lb, la) && u(la, la) == 0.0;
    ok = ok && l2(a, b) == scalar_l2sq(a, b);
  }
  CHECK(ok);
}

TEST_CASE("distance matrix extremes") {
  const auto m = Metric::table({"a", "b", "s"}, {{0, 1, 1}, {1, 0, 0}, {1, 0, 0}});
  std::vector<Point> pts{std::size_t{0}, std::size_t{1}, std::size_t{2}};
  DistanceMatrix dm(m, pts);
  CHECK(dm.max() == 1.0);
  REQUIRE(dm.min_positive());
  CHECK(*dm.min_positive() == 1.0);
  std::vector<Point> same{std::size_t{1}, std::size_t{2}};
  CHECK_FALSE(DistanceMatrix(m, same).min_positive());
}
