#include "doctest.h"

#include <cmath>

#include "fsekit/potential.hpp"
#include "fsekit/weight.hpp"

using namespace fsekit;

TEST_CASE("square well evaluation") {
  auto p = Potential::square_well(-2.0, 1.0);
  CHECK(p(0.0) == -2.0);
  CHECK(p(3.0) == 0.0);
  CHECK(p(0.999) == -2.0);
  CHECK(p(-1.001) == 0.0);
  CHECK(Potential::zero()(17.3) == 0.0);
}

TEST_CASE("moment norms of the square well") {
  auto p = Potential::square_well(-2.0, 1.0);
  CHECK(p.moment_norm(0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(p.moment_norm(1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(p.moment_norm(2) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(Potential::zero().moment_norm(0) == 0.0);
  CHECK(Potential::zero().moment_norm(3) == 0.0);
}

TEST_CASE("birman-solomyak cell sum") {
  CHECK(Potential::zero().birman_solomyak() == 0.0);
  auto p = Potential::square_well(-2.0, 1.0);
  // Cells [-1,0] and [0,1] each hold mass 2.
  CHECK(p.birman_solomyak(0.5) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-10));

  // Brute-force cell sum for every compact preset.
  for (const auto& q : {Potential::gaussian(1.0, 0.5), Potential::poeschl_teller(2.0)}) {
    double brute = 0.0;
    const double R = q.support_radius();
    for (long j = static_cast<long>(std::floor(-R)); j < static_cast<long>(std::ceil(R)); ++j) {
      double cell = 0.0;
      const int nn = 4000;
      for (int i = 0; i < nn; ++i) {
        const double x = j + (i + 0.5) / nn;
        cell += std::abs(q(x)) / nn;
      }
      brute += std::sqrt(cell);
    }
    CHECK(q.birman_solomyak(0.5) == doctest::Approx(brute).epsilon(1e-5));
    CHECK(std::isfinite(q.birman_solomyak(0.5)));
  }
}

TEST_CASE("moment norm bounded by support box") {
  for (const auto& p : {Potential::square_well(-2.0, 1.0),
                        Potential::gaussian(0.7, 0.4),
                        Potential::poeschl_teller(2.0)}) {
    CHECK(p.moment_norm(0) <= 2.0 * p.support_radius() * p.sup_norm() + 1e-12);
  }
}

TEST_CASE("even presets evaluate evenly") {
  for (const auto& p : {Potential::square_well(-2.0, 1.0),
                        Potential::gaussian(1.0, 0.5),
                        Potential::poeschl_teller(2.0)}) {
    REQUIRE(p.even_symmetric());
    for (double x : {0.1, 0.45, 0.9, 1.7, 5.0})
      CHECK(p(x) == doctest::Approx(p(-x)).epsilon(1e-14));
  }
  CHECK_FALSE(Potential::square_well(-1.0, 0.5, 0.25).even_symmetric());
}

TEST_CASE("truncation tails are negligible") {
  auto g = Potential::gaussian(1.0, 0.5);
  auto pt = Potential::poeschl_teller(2.0);
  CHECK(std::abs(g(g.support_radius() * 1.0000001)) == 0.0);
  CHECK(std::abs(g(g.support_radius() * 0.999)) < 1e-10);
  CHECK(std::abs(pt(pt.support_radius() * 0.999)) < 1e-10);
}

TEST_CASE("table potential interpolates and clips") {
  auto p = Potential::table({-1.0, 0.0, 1.0}, {0.0, -2.0, 0.0});
  CHECK(p(0.0) == -2.0);
  CHECK(p(0.5) == doctest::Approx(-1.0));
  CHECK(p(2.0) == 0.0);
  CHECK(p.support_radius() == 1.0);
}

TEST_CASE("scaled and truncated wrappers") {
  auto p = Potential::square_well(-2.0, 1.0).scaled(0.5);
  CHECK(p(0.0) == -1.0);
  CHECK(p.moment_norm(0) == doctest::Approx(2.0).epsilon(1e-12));
  auto q = Potential::square_well(-2.0, 1.0).truncated(0.5);
  CHECK(q(0.75) == 0.0);
  CHECK(q(0.25) == -2.0);
  CHECK(q.support_radius() == 0.5);
}

TEST_CASE("negative part and signed integral") {
  auto p = Potential::square_well(-2.0, 1.0);
  CHECK(p.l1_negative() == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(p.integral() == doctest::Approx(-4.0).epsilon(1e-12));
  auto g = Potential::gaussian(1.0, 0.5);
  CHECK(g.l1_negative() == 0.0);
  CHECK(g.integral() == doctest::Approx(std::sqrt(2.0 * 3.14159265358979324) * 0.5).epsilon(1e-10));
}

TEST_CASE("weight derivative matches finite differences") {
  for (const auto& w : {WeightFunction::identity(), WeightFunction::power(2),
                        WeightFunction::power(3)}) {
    for (double x : {-1.3, 0.2, 0.9, 2.5}) {
      const double h = 1e-5;
      const double fd = (w.value(x + h) - w.value(x - h)) / (2.0 * h);
      CHECK(w.deriv(x) == doctest::Approx(fd).epsilon(1e-8));
    }
  }
}
