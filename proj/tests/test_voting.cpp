#include "doctest.h"
#include "support.hpp"

using namespace prefgame;

namespace {

const Coords& ballot(const StrategySpace& z, std::size_t i) { return std::get<Coords>(z.point(i)); }

}  // namespace

TEST_CASE("k-approval game construction") {
  const auto g = build_k_approval_game(2, 1, 0.5, testing::symmetric_weights(2), {{1, 0}, {0, 1}});
  CHECK(g.space_size() == 2);
  const auto g42 = build_k_approval_game(4, 2, 0.5, testing::symmetric_weights(2),
                                         {{0.5, 0.5, 0.5, 0.5}, {1, 1, 0, 0}});
  CHECK(g42.space_size() == 6);
  CHECK_THROWS_AS(build_k_approval_game(4, 2, 0.5, testing::symmetric_weights(2),
                                        {{0.5, 0.5, 0.5, 0.0}, {1, 1, 0, 0}}),
                  InvalidGame);
  CHECK_THROWS_AS(build_k_approval_game(3, 1, 0.5, testing::symmetric_weights(2),
                                        {{1.5, -0.5, 0}, {1, 0, 0}}),
                  InvalidGame);
}

TEST_CASE("difference sets") {
  const auto d = difference_sets({1, 1, 0, 0}, {0, 0, 1, 1});
  CHECK(d.ell == 2);
  CHECK(d.c01 == std::vector<std::size_t>{2, 3});
  CHECK(d.c10 == std::vector<std::size_t>{0, 1});
  CHECK_THROWS_AS(difference_sets({1, 0, 0}, {1, 1, 0}), DomainError);
}

TEST_CASE("worst-case preference") {
  SUBCASE("m=4, k=2, x=1100, e=0011, alpha=3/4") {
    const Coords x{1, 1, 0, 0}, e{0, 0, 1, 1};
    const auto s = worst_case_preference(x, e, 0.75);
    CHECK(s[0] == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(s[1] == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(s[2] == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(s[3] == doctest::Approx(1.0 / 3).epsilon(1e-15));
    const auto m = Metric::squared_euclidean(4);
    CHECK(std::abs(m(x, s) - 4.0 / 9) <= 1e-15);
    CHECK(m(x, e) == 4.0);
    CHECK(std::abs(m(x, s) / m(x, e) - 1.0 / 9) <= 1e-15);
    CHECK(std::abs(boundary_objective(s, x, e) - 1.0 / 9) <= 1e-15);
  }
  SUBCASE("alpha one") {
    const auto s = worst_case_preference({1, 0, 0}, {0, 1, 0}, 1.0);
    CHECK(s == Coords{0.5, 0.5, 0.0});
    CHECK(boundary_objective(s, {1, 0, 0}, {0, 1, 0}) == 0.25);
  }
  SUBCASE("alpha near one half") {
    const auto s = worst_case_preference({1, 0}, {0, 1}, 0.5 + 1e-9);
    CHECK(s[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(s[1] == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(boundary_objective(s, {1, 0}, {0, 1}) < 1e-15);
  }
  SUBCASE("invalid inputs") {
    CHECK_THROWS(worst_case_preference({1, 0}, {1, 0}, 0.75));
    CHECK_THROWS(worst_case_preference({1, 0}, {0, 1}, 0.5));
  }
}

TEST_CASE("s* is feasible, tight and length independent for all pairs") {
  for (std::size_t m = 2; m <= 5; ++m) {
    for (std::size_t k = 1; k < m; ++k) {
      const auto z = StrategySpace::k_approval({m, k});
      for (double alpha : {0.55, 0.6, 0.75, 0.9, 1.0}) {
        bool ok = true;
        for (std::size_t a = 0; a < z.size(); ++a) {
          for (std::size_t b = 0; b < z.size(); ++b) {
            if (a == b) continue;
            const auto& x = ballot(z, a);
            const auto& e = ballot(z, b);
            const auto s = worst_case_preference(x, e, alpha);
            double sum = 0;
            for (double v : s) {
              sum += v;
              ok = ok && v >= 0 && v <= 1;
            }
            ok = ok && std::abs(sum - static_cast<double>(k)) <= 1e-12;
            ok = ok && std::abs(boundary_constraint(s, x, e, alpha)) <= 1e-12;
            ok = ok && std::abs(boundary_objective(s, x, e) - boundary_closed_form(alpha)) <= 1e-12;
          }
        }
        CHECK(ok);
      }
    }
  }
}

TEST_CASE("KKT residuals") {
  const Coords x{1, 1, 0, 0}, e{0, 0, 1, 1};
  const auto s = worst_case_preference(x, e, 0.75);
  const auto r = kkt_residual(s, x, e, 0.75);
  CHECK(r.max_residual() <= 1e-12);
  CHECK(std::abs(r.mu - 0.5 / (2 * 2 * 0.75)) <= 1e-12);
  CHECK(std::abs(r.mu - r.expected_mu) <= 1e-12);

  const auto u = kkt_residual({0.5, 0.5, 0.5, 0.5}, x, e, 0.75);
  CHECK(u.stationarity > 1e-3);
}

TEST_CASE("gradient agrees with central differences") {
  const Coords x{1, 0, 1, 0, 0}, e{0, 1, 0, 1, 0};
  const auto s = worst_case_preference(x, e, 0.8);
  const auto grad = boundary_gradient(s, x, e);
  const double h = 1e-6;
  for (std::size_t j = 0; j < s.size(); ++j) {
    Coords up = s, down = s;
    up[j] += h;
    down[j] -= h;
    const double fd = (boundary_objective(up, x, e) - boundary_objective(down, x, e)) / (2 * h);
    const double scale = std::max(1.0, std::abs(grad[j]));
    CHECK(std::abs(fd - grad[j]) <= 1e-6 * scale);
  }
}

TEST_CASE("grid oracle") {
  SUBCASE("two-swap instance") {
    const auto r = boundary_grid_oracle({1, 1, 0, 0}, {0, 0, 1, 1}, 0.75, 51);
    CHECK(r.min_ratio >= 1.0 / 9 - 1e-12);
    CHECK(r.min_ratio - 1.0 / 9 <= 2e-3);
    CHECK(r.resolution == doctest::Approx(0.02));
  }
  SUBCASE("single swap hits the closed form") {
    for (double alpha : {0.6, 0.75, 0.9}) {
      const auto r = boundary_grid_oracle({1, 0, 0}, {0, 0, 1}, alpha, 11);
      CHECK(std::abs(r.min_ratio - boundary_closed_form(alpha)) <= 1e-12);
    }
  }
  SUBCASE("without the constraint the minimum collapses") {
    const auto r = boundary_grid_oracle({1, 0}, {0, 1}, 0.75, 51, false);
    CHECK(r.min_ratio == 0.0);
  }
  SUBCASE("bad parameters") {
    CHECK_THROWS(boundary_grid_oracle({1, 0}, {0, 1}, 0.75, 3));
    CHECK_THROWS(boundary_grid_oracle({1, 0}, {1, 0}, 0.75, 11));
  }
}

TEST_CASE("certificate values") {
  const auto vb = voting_boundary(ApprovalSpec{3, 1}, 0.75);
  CHECK(vb.certificate_ok);
  CHECK(std::abs(vb.closed_form - 1.0 / 9) <= 1e-15);
  CHECK(vb.rows.size() == 6);
  CHECK_FALSE(vb.measured);
  const auto vb9 = voting_boundary(ApprovalSpec{3, 1}, 0.9);
  CHECK(std::abs(vb9.closed_form - 16.0 / 81) <= 1e-15);
}

TEST_CASE("measured boundary on an unrestricted voting game") {
  const auto g = build_k_approval_game(3, 1, 0.75, testing::symmetric_weights(3),
                                       {{1, 0, 0}, {0, 1, 0}, {0, 1, 0}});
  const auto e = enumerate_equilibria(g);
  REQUIRE_FALSE(e.empty());
  const auto vb = voting_boundary(g, e);
  REQUIRE(vb.measured);
  REQUIRE(vb.measured->global);
  CHECK(*vb.measured->global == 1.0);
  CHECK(*vb.measured->global >= vb.closed_form);
}
