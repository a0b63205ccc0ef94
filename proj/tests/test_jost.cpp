#include "doctest.h"

#include <cmath>
#include <random>

#include "fsekit/errors.hpp"
#include "fsekit/jost.hpp"
#include "oracles.hpp"

using namespace fsekit;

namespace {
const Potential well = Potential::square_well(-2.0, 1.0);
const Potential pt = Potential::poeschl_teller(2.0);
}

TEST_CASE("free potential gives m == 1") {
  auto s = solve_jost(Potential::zero(), cplx(1.3, 0.2), +1);
  for (const auto& v : s.m) CHECK(std::abs(v - 1.0) == 0.0);
  CHECK(s.residual == 0.0);
  auto sc = scattering(Potential::zero(), 1.0);
  CHECK(sc.t == cplx(1.0, 0.0));
  CHECK(sc.r1 == cplx(0.0, 0.0));
  CHECK(sc.r2 == cplx(0.0, 0.0));
}

TEST_CASE("square well: Lippmann-Schwinger self-consistency") {
  JostOptions o;
  o.step = 0.002;
  auto s = solve_jost(well, cplx(1.0, 0.0), +1, o);
  CHECK(s.residual < 1e-10);
  // Paper bound |m_+| <= exp(||V||_1 / |k|).
  double mmax = 0.0;
  for (const auto& v : s.m) mmax = std::max(mmax, std::abs(v));
  CHECK(mmax <= std::exp(4.0 / 1.0));
}

TEST_CASE("zero-energy solution obeys the (1+|x|) bound") {
  auto s = solve_jost(well, cplx(0.0, 0.0), +1);
  const double bound_const = 2.0 * std::exp(well.moment_norm(0) + 2.0 * well.moment_norm(1));
  for (size_t i = 0; i < s.grid.size(); ++i)
    CHECK(std::abs(s.m[i]) <= bound_const * (1.0 + std::abs(s.grid[i])));
  CHECK(s.residual < 1e-8);
}

TEST_CASE("marching residual drops by at least x3 per step halving") {
  JostOptions coarse, fine;
  coarse.step = 0.02;
  coarse.richardson = false;
  coarse.residual_tol = 1.0; // measuring the raw-march defect itself
  fine.step = 0.01;
  fine.richardson = false;
  fine.residual_tol = 1.0;
  const double rc = solve_jost(well, cplx(1.0, 0.0), +1, coarse).residual;
  const double rf = solve_jost(well, cplx(1.0, 0.0), +1, fine).residual;
  CHECK(rc / rf >= 3.0);
}

TEST_CASE("square well transmission matches the exact matching oracle") {
  JostOptions o;
  o.step = 0.002;
  auto sc = scattering(well, cplx(1.0, 0.0), o);
  auto ex = oracles::square_well_exact(-2.0, 1.0, 0.0, cplx(1.0, 0.0));
  CHECK(std::abs(sc.t - ex.t) < 1e-8);
  CHECK(std::abs(sc.r1 - ex.r1) < 1e-8);
  CHECK(std::abs(sc.r2 - ex.r2) < 1e-8);
}

TEST_CASE("off-center square well against both oracles") {
  auto p = Potential::square_well(-1.5, 0.7, 0.4);
  auto sc = scattering(p, cplx(1.7, 0.0), {0.002});
  auto ex = oracles::square_well_exact(-1.5, 0.7, 0.4, cplx(1.7, 0.0));
  CHECK(std::abs(sc.t - ex.t) < 1e-8);
  CHECK(std::abs(sc.r1 - ex.r1) < 1e-8);
  CHECK(std::abs(sc.r2 - ex.r2) < 1e-8);
}

TEST_CASE("Poeschl-Teller is reflectionless") {
  auto sc = scattering(pt, cplx(1.0, 0.0));
  CHECK(std::abs(sc.r1) < 1e-6);
  CHECK(std::abs(sc.r2) < 1e-6);
  auto ode = oracles::ode_scattering(pt, cplx(1.0, 0.0), 2e-4);
  CHECK(std::abs(sc.t - ode.t) < 1e-6);
  CHECK(std::abs(sc.r1 - ode.r1) < 1e-6);
}

TEST_CASE("unitarity across presets and wavenumbers") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> uk(0.1, 10.0);
  for (const auto& p : {well, Potential::gaussian(1.0, 0.5), pt}) {
    for (int i = 0; i < 50; ++i) {
      auto sc = scattering(p, cplx(uk(rng), 0.0));
      CHECK(sc.unitarity_defect < 1e-8);
    }
  }
}

TEST_CASE("symmetry and conjugation of the amplitudes") {
  for (double k : {0.3, 1.0, 2.7}) {
    auto sc = scattering(well, cplx(k, 0.0), {0.002});
    CHECK(std::abs(sc.r1 - sc.r2) < 1e-8); // even potential
    auto scm = scattering(well, cplx(k, 0.0), {0.002});
    // t(-k) = conj t(k) realized through the + side at -k being the conjugate
    // equation; check via the exact oracle instead of a -k solve.
    auto ex = oracles::square_well_exact(-2.0, 1.0, 0.0, cplx(-k, 0.0));
    CHECK(std::abs(std::conj(scm.t) - ex.t) < 1e-8);
  }
}

TEST_CASE("wronskian route agrees with the quadrature route") {
  for (cplx k : {cplx(1.0, 0.0), cplx(0.5, 0.5), cplx(0.0, 0.8)}) {
    auto sc = scattering(well, k, {0.002});
    auto tw = transmission_wronskian(well, k, {0.002});
    CHECK(std::abs(sc.t - tw) < 1e-8 * std::max(1.0, std::abs(tw)));
  }
}

TEST_CASE("bound states: none for V = 0 or repulsive") {
  CHECK(bound_states(Potential::zero()).betas.empty());
  CHECK(bound_states(Potential::gaussian(1.0, 0.5)).betas.empty());
}

TEST_CASE("Poeschl-Teller bound state at beta = 1") {
  auto bs = bound_states(pt);
  REQUIRE(bs.betas.size() == 1);
  CHECK(bs.betas[0] == doctest::Approx(1.0).epsilon(1e-5));
  // Independent finite-difference oracle on a large box.
  auto fd = oracles::fd_bound_states(pt, 30.0, 2e-3);
  REQUIRE(fd.size() == 1);
  CHECK(-bs.betas[0] * bs.betas[0] == doctest::Approx(fd[0]).epsilon(1e-4));
}

TEST_CASE("square well bound state against FD oracle") {
  auto bs = bound_states(well);
  auto fd = oracles::fd_bound_states(well, 25.0, 2e-3);
  REQUIRE(bs.betas.size() == fd.size());
  for (size_t i = 0; i < fd.size(); ++i) {
    CHECK(-bs.betas[i] * bs.betas[i] == doctest::Approx(fd[fd.size() - 1 - i]).epsilon(1e-4));
    CHECK(bs.betas[i] <= 0.5 * well.l1_negative() + 1e-12);
  }
}

TEST_CASE("FDT representation of the transmission coefficient") {
  SUBCASE("V = 0") {
    auto r = fdt_transmission(Potential::zero(), cplx(0.0, 1.0));
    CHECK(std::abs(r.t - 1.0) == 0.0);
  }
  SUBCASE("square well at k = 0.7i vs wronskian route") {
    auto r = fdt_transmission(well, cplx(0.0, 0.7), 1e-6);
    auto tw = transmission_wronskian(well, cplx(0.0, 0.7), {0.002});
    CHECK(std::abs(r.t - tw) < 1e-4 * std::abs(tw));
  }
  SUBCASE("reflectionless potential reduces to the Blaschke factor") {
    auto r = fdt_transmission(pt, cplx(0.0, 2.0), 1e-6);
    auto tw = transmission_wronskian(pt, cplx(0.0, 2.0), {0.002});
    const cplx blaschke = (cplx(0.0, 2.0) + cplx(0.0, 1.0)) / (cplx(0.0, 2.0) - cplx(0.0, 1.0));
    CHECK(std::abs(r.t - blaschke) < 2e-4);
    CHECK(std::abs(r.t - tw) < 2e-4);
  }
}

TEST_CASE("errors: bad side and negative Im k") {
  CHECK_THROWS_AS(solve_jost(well, cplx(1.0, -0.5), +1), Error);
  CHECK_THROWS_AS(solve_jost(well, cplx(1.0, 0.0), 0), Error);
  CHECK_THROWS_AS(scattering(well, cplx(0.0, 0.0)), Error);
  CHECK_THROWS_AS(fdt_transmission(well, cplx(1.0, 0.0)), Error);
}
