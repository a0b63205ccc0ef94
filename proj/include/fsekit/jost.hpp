#pragma once
#include <Eigen/Dense>
#include <vector>

#include "fsekit/numerics.hpp"
#include "fsekit/potential.hpp"

namespace fsekit {

struct JostOptions {
  double step = 0.0;         // marching step; 0 selects the default
  bool richardson = true;    // combine h and h/2 marches to fourth order
  double margin = 1.0;       // grid extension beyond the support
  double residual_tol = 1e-6;
};

/// Solution m_side(k; x) of the modified Lippmann-Schwinger equation,
/// m_+(k;x) = 1 + int_x^inf D_k(y-x) V(y) m_+(k;y) dy (and mirrored for -).
/// psi_side(k;x) = exp(side * i k x) * m_side(k;x) is the Jost solution.
struct JostSolution {
  cplx k;
  int side;                  // +1 or -1
  std::vector<double> grid;  // ascending, support plus margins
  std::vector<cplx> m;
  std::vector<cplx> dm;      // dm/dx
  double residual;           // max Lippmann-Schwinger defect over sampled nodes

  cplx m_at(double x) const;                 // linear interpolation
  cplx psi_at(double x) const;
  cplx dpsi_at(double x) const;
};

/// Marches the Volterra equation for m_side(k; .).  Im k >= 0 required.
JostSolution solve_jost(const Potential& p, cplx k, int side,
                        const JostOptions& opts = {});

struct ScatteringData {
  cplx k;
  cplx t, r1, r2;
  double unitarity_defect;   // max-norm of S* S - id; NaN off the real axis
};

/// Transmission/reflection amplitudes from the Jost solutions via the
/// quadrature formulas 1/t = 1 - (2ik)^{-1} (e1, J f1) etc.
/// Reflections are meaningful for real k; all entries continue analytically
/// to Im k >= 0 for compactly supported potentials.
ScatteringData scattering(const Potential& p, cplx k, const JostOptions& opts = {});

Eigen::Matrix2cd smatrix(const ScatteringData& s);
Eigen::Matrix2cd tmatrix(const ScatteringData& s);

/// t(k) from the Wronskian of the two Jost solutions, 2ik / W[psi_-, psi_+].
cplx transmission_wronskian(const Potential& p, cplx k, const JostOptions& opts = {});

/// 1/t(k) = 1 - (2ik)^{-1} int V m_+(k;.) by quadrature; single-sided solve.
cplx one_over_transmission(const Potential& p, cplx k, const JostOptions& opts = {});

struct BoundStateList {
  std::vector<double> betas; // ascending; eigenvalues are -beta^2
};

/// Roots of beta -> 1/t(i beta) on (0, ||V_-||_1 / 2] by bracketing/bisection.
BoundStateList bound_states(const Potential& p, const JostOptions& opts = {});

struct FdtResult {
  cplx t;
  double tail_estimate;      // estimated truncation error of the ln|t| integral
};

/// Faddeev-Deift-Trubowitz representation of t(k) for Im k > 0:
/// exp[(1/pi i) int ln|t(u)|/(u-k) du] times the Blaschke product over the
/// bound states.
FdtResult fdt_transmission(const Potential& p, cplx k, double tol = 1e-6,
                           const JostOptions& opts = {});

} // namespace fsekit
