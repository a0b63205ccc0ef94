#pragma once
#include <Eigen/Dense>
#include <vector>

#include "fsekit/boundary.hpp"
#include "fsekit/jost.hpp"
#include "fsekit/potential.hpp"

namespace fsekit {

/// Symmetrized Nystrom discretization of a Birman-Schwinger operator:
/// M_ij = sqrt(w_i) sqrt|V(x_i)| R(z; x_i, x_j) sqrt|V(x_j)| J(x_j) sqrt(w_j)
/// on Gauss-Legendre panels aligned with the potential's breakpoints.
struct DiscretizedKernel {
  cplx z;
  int side = +1;            // boundary value R^{+-}(nu) when z sits on the cut
  std::vector<double> nodes;
  std::vector<double> weights;
  Eigen::MatrixXcd matrix;
};

/// K_inf(z) = sqrt|V| R_inf(z) sqrt|V| J with the free-line Green function.
/// For z on the positive real axis `side` picks the limit from above (+1) or
/// below (-1); elsewhere the Im >= 0 square-root branch is used.
DiscretizedKernel nystrom_k_infinity(const Potential& p, cplx z, int side, int n);

/// det(id - matrix) by dense LU with partial pivoting.
cplx fredholm_det(const DiscretizedKernel& kern);

/// Determinant of id - K_inf(z) at resolution n, with the O(N^-2) trapezoid
/// term removed by combining the n and n/2 grids.
cplx fredholm_det_n(const Potential& p, cplx z, int side, int n);

struct PairCheck {
  cplx lhs, rhs;
  double defect;
};

/// Jost-Pais: 1/t(k) against det(id - K_inf(k^2)) at side +.
PairCheck jost_pais_check(const Potential& p, double k, int n,
                          const JostOptions& jopts = {});

/// Scalar and 2x2 data of the rank-two resolvent correction D_L(z).
struct Rank2Correction {
  cplx d_L;                 // e^{2i sqrt(z) L}
  Eigen::Matrix2cd G_L;     // (d_L id + U(z) sigma_x)^{-1}
};
Rank2Correction rank2_correction(const BoundaryCondition& bc, cplx z, double L);

/// 2x2 T-matrix S(z) - id of the (truncated) potential from the Jost route,
/// analytically continued to Im sqrt(z) >= 0.
Eigen::Matrix2cd tmatrix_jost(const Potential& p, cplx z, const JostOptions& jopts = {});

/// Factorization det(id-K_L) = det(id-K_inf,L) det(id + d_L T_L G_L):
/// lhs assembles K_L = K_inf,L - sqrt|V| D_L sqrt|V| J on the Nystrom grid,
/// rhs multiplies the Nystrom determinant by the 2x2 factor built from the
/// Jost-route T-matrix.  Throws SpectralCollision when a factor degenerates.
PairCheck factorization_check(const Potential& p, const BoundaryCondition& bc,
                              cplx z, double L, int n, const JostOptions& jopts = {});

struct ContourOptions {
  int nystrom_n = 400;
  int panels_top = 6;       // on the (t + ib)^2 leg
  int panels_vertical = 7;  // geometric toward s = 0 on the (sqrt(nu) + is)^2 leg
  int gl_points = 12;
};

/// One quadrature/evaluation node on the upper half of the Fermi contour.
struct ContourNode {
  cplx z;
  cplx dzw;      // oriented quadrature weight (from z = -b^2 towards z = nu)
  cplx logdet;   // ln det(id - K_inf(z)); imaginary part phase-continuous
};

/// Samples ln det(id - K_inf(z)) along the upper half of Gamma_{nu,b},
/// ordered from z = -b^2 to z -> nu + i0, phase anchored to 0 at the negative
/// real axis.  Zero-weight nodes may be inserted for the unwrap.
/// The lower half follows by conjugation.  Requires 2b > ||V||_1.
std::vector<ContourNode> logdet_along_contour(const Potential& p, double nu, double b,
                                              const ContourOptions& opts = {});

} // namespace fsekit
