#include "doctest.h"

#include <cmath>
#include <random>

#include "fsekit/boxspec.hpp"
#include "fsekit/errors.hpp"
#include "fsekit/fse.hpp"
#include "fsekit/ssf.hpp"

using namespace fsekit;

namespace {
const Potential well = Potential::square_well(-2.0, 1.0);
const auto idw = WeightFunction::identity();
}

TEST_CASE("free potential has zero finite size energy in every form") {
  for (const auto& bc : {BoundaryCondition::dirichlet(), BoundaryCondition::periodic(),
                         BoundaryCondition::robin(0.4, -0.2)}) {
    for (double phi : {0.0, 0.7, pi / 2}) {
      CHECK(fse_closed(Potential::zero(), bc, 2.0, phi, idw) == 0.0);
      CHECK(fse_integral(Potential::zero(), bc, 2.0, phi, idw) == 0.0);
    }
  }
}

TEST_CASE("closed form equals the s-integral across a (bc, phi) sweep") {
  const std::vector<BoundaryCondition> bcs = {
      BoundaryCondition::dirichlet(), BoundaryCondition::neumann(),
      BoundaryCondition::periodic(), BoundaryCondition::robin(0.8, 0.8),
      BoundaryCondition::robin(-0.5, 1.2)};
  const std::vector<double> phis = {0.0, 0.5 * pi};
  for (const auto& bc : bcs)
    for (double phi : phis) {
      const double a = fse_closed(well, bc, 2.0, phi, idw);
      const double b = fse_integral(well, bc, 2.0, phi, idw);
      CHECK(std::abs(a - b) < 1e-6);
    }
}

TEST_CASE("phase periodicity of the closed form") {
  const double a = fse_closed(well, BoundaryCondition::dirichlet(), 2.0, 0.3, idw);
  const double b = fse_closed(well, BoundaryCondition::dirichlet(), 2.0, 0.3 + 2.0 * pi, idw);
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("arccosh trace identity") {
  SUBCASE("H2 = 0 gives zero") {
    Eigen::MatrixXcd H1 = 1.5 * Eigen::MatrixXcd::Identity(2, 2);
    Eigen::MatrixXcd H2 = Eigen::MatrixXcd::Zero(2, 2);
    CHECK(arccosh_closed_form(H1, H2) == 0.0);
    CHECK(std::abs(arccosh_quadrature(H1, H2)) < 1e-12);
  }
  SUBCASE("scalar case") {
    Eigen::MatrixXcd H1 = 1.5 * Eigen::MatrixXcd::Identity(1, 1);
    Eigen::MatrixXcd H2 = 0.3 * Eigen::MatrixXcd::Identity(1, 1);
    CHECK(std::abs(arccosh_closed_form(H1, H2) - arccosh_quadrature(H1, H2)) < 1e-8);
  }
  SUBCASE("random 2x2 admissible pairs") {
    std::mt19937 rng(4242);
    std::normal_distribution<double> nd;
    int done = 0;
    while (done < 20) {
      Eigen::Matrix2cd G1, G2;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          G1(i, j) = cplx(nd(rng), nd(rng));
          G2(i, j) = cplx(nd(rng), nd(rng));
        }
      Eigen::MatrixXcd H1 = G1 * G1.adjoint() + 0.25 * Eigen::Matrix2cd::Identity();
      Eigen::MatrixXcd H2 = 0.5 * (G2 + G2.adjoint());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H1 + H2);
      if (es.eigenvalues().minCoeff() < 0.2) continue;
      ++done;
      CHECK(std::abs(arccosh_closed_form(H1, H2) - arccosh_quadrature(H1, H2)) < 1e-8);
    }
  }
  SUBCASE("positivity is enforced") {
    Eigen::MatrixXcd H1 = -0.5 * Eigen::MatrixXcd::Identity(2, 2);
    CHECK_THROWS_AS(arccosh_closed_form(H1, Eigen::MatrixXcd::Zero(2, 2)),
                    NotPositiveDefinite);
  }
}

TEST_CASE("finite size energy against the box sequence (eta = 0, coarse)") {
  // L (E_L + nu xi_L - Fumi) along the eta-fixed sequence approaches the
  // closed-form coefficient; coarse check here, the acceptance suite runs the
  // full Richardson version.
  const double nu = 2.0;
  auto bc = BoundaryCondition::dirichlet();
  const double fumi_val = fumi(well, nu, idw);
  const double target = fse_closed(well, bc, nu, 0.0, idw);
  auto run = [&](int n) {
    const double L = pi * n / std::sqrt(nu);
    // nu sits exactly on a free level along this sequence; counting at a
    // hair above it leaves E_L + nu xi_L unchanged.
    auto d = energy_difference(well, bc, L, nu + 1e-7, idw);
    return L * (d.E_L + nu * d.xi_L - fumi_val);
  };
  const double r1 = run(24), r2 = run(48);
  const double extrap = 2.0 * r2 - r1;
  CHECK(std::abs(extrap - target) < 0.05 * std::max(std::abs(target), 0.05));
}
