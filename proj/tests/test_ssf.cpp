#include "doctest.h"

#include <cmath>

#include "fsekit/errors.hpp"
#include "fsekit/ssf.hpp"

using namespace fsekit;

namespace {
const Potential well = Potential::square_well(-2.0, 1.0);
const Potential pt = Potential::poeschl_teller(2.0);
}

TEST_CASE("spectral shift of the zero potential vanishes") {
  SpectralShift ss(Potential::zero());
  for (double lam : {-3.0, -0.5, 0.7, 2.0, 50.0}) CHECK(ss.xi(lam) == 0.0);
  CHECK(fumi(ss, 2.0, WeightFunction::identity()) == 0.0);
}

TEST_CASE("negative-axis steps count bound states") {
  SpectralShift ss(pt);
  CHECK(ss.xi(-0.5) == -1.0);
  CHECK(ss.xi(-2.0) == 0.0);
  CHECK_THROWS_AS(ss.xi(0.0), Error);
  CHECK_THROWS_AS(ss.xi(-1.0 * ss.betas()[0] * ss.betas()[0]), Error);

  SpectralShift sw(well);
  REQUIRE(sw.betas().size() == 1);
  const double e = -sw.betas()[0] * sw.betas()[0];
  for (int i = 1; i < 20; ++i) {
    CHECK(sw.xi(e * (1.0 - i / 20.5)) == -1.0); // between the bound state and 0
    CHECK(sw.xi(e * (1.0 + i / 20.5)) == 0.0);  // below the bound state
  }
}

TEST_CASE("high-energy anchor leaves xi small") {
  for (const Potential& p : {well, Potential::gaussian(1.0, 0.5)}) {
    SpectralShift ss(p);
    CHECK(std::abs(ss.xi(0.99 * ss.lambda_max())) < 0.01);
  }
}

TEST_CASE("Birman-Krein identity on a coarse grid") {
  SpectralShift ss(well);
  for (int i = 1; i <= 20; ++i) {
    const double lam = 0.15 + (12.0 - 0.15) * i / 20.0;
    auto sc = scattering(well, cplx(std::sqrt(lam), 0.0));
    const cplx detS = sc.t * sc.t - sc.r1 * sc.r2;
    const cplx lhs = std::exp(-2.0 * pi * I_unit * ss.xi(lam));
    CHECK(std::abs(lhs - detS) < 1e-8);
  }
}

TEST_CASE("fumi: bound-state steps enter additively") {
  SpectralShift ss(well);
  const double nu = 2.0;
  auto f = WeightFunction::power(2);
  const double route_a = fumi(ss, nu, f);
  // Same continuum integral, steps reorganized against f(nu):
  // sum_j -(f(nu) - f(-beta_j^2)) + int_0^nu f'(lambda)(xi + n) dlambda
  auto integrand = [&](double lam) { return f.deriv(lam) * ss.xi(lam); };
  double cont = 0.0;
  const double a1 = nu / 64.0, a2 = nu / 8.0;
  cont += integrate_abs(integrand, 1e-12 * nu, a1, 1e-9, 9);
  cont += integrate_abs(integrand, a1, a2, 1e-9, 9);
  cont += integrate_abs(integrand, a2, nu, 1e-9, 9);
  const double n = static_cast<double>(ss.betas().size());
  double route_b = cont + n * (f.value(nu) - f.value(0.0));
  for (double b : ss.betas()) route_b -= f.value(nu) - f.value(-b * b);
  CHECK(route_a == doctest::Approx(route_b).epsilon(1e-10));
}

TEST_CASE("weak repulsive bump follows the first-order Fumi formula") {
  const Potential bump = Potential::gaussian(1.0, 0.5);
  const double nu = 1.0;
  const double lead = std::sqrt(nu) / pi * bump.integral();
  double prev_ratio = 0.0;
  for (double eps : {0.2, 0.1}) {
    const double v = fumi(bump.scaled(eps), nu, WeightFunction::identity());
    CHECK(v <= std::sqrt(nu) / pi * bump.moment_norm(0) * eps + 1e-9);
    const double ratio = v / (eps * lead);
    CHECK(ratio > prev_ratio); // approaches 1 from below as eps decreases
    CHECK(ratio < 1.0 + 1e-9);
    prev_ratio = ratio;
  }
}

TEST_CASE("contour form of the Fumi term") {
  SUBCASE("zero potential") {
    CHECK(fumi_contour(Potential::zero(), 2.0, 1.0, WeightFunction::identity()) == 0.0);
  }
  SUBCASE("square well cross-form agreement and b-independence") {
    ContourOptions co;
    co.nystrom_n = 350;
    const double nu = 2.0;
    const double b = well.moment_norm(0); // 2b > ||V||_1
    const double via_xi = fumi(well, nu, WeightFunction::identity());
    const double via_contour = fumi_contour(well, nu, b, WeightFunction::identity(), co);
    const double via_contour2 = fumi_contour(well, nu, 1.5 * b, WeightFunction::identity(), co);
    CHECK(std::abs(via_xi - via_contour) < 1e-5);
    CHECK(std::abs(via_contour - via_contour2) < 1e-5);
  }
}
