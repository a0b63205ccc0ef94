#pragma once
#include <vector>

#include "fsekit/boxspec.hpp"
#include "fsekit/jost.hpp"
#include "fsekit/potential.hpp"
#include "fsekit/weight.hpp"

namespace fsekit {

/// Half-line problem on [0, infinity): boundary condition a u(0) = b u'(0) at
/// the origin (a conj(b) real, |a|^2 + |b|^2 = 1) and the scalar pair (A, B)
/// with A u(L) + B u'(L) = 0 at the far end of the box [0, L].
struct HalfLineBC {
  cplx a{1.0, 0.0}, b{0.0, 0.0};
  cplx A{1.0, 0.0}, B{0.0, 0.0};

  static HalfLineBC dirichlet_dirichlet() { return {}; }
  void validate() const;
};

/// Scalar scattering matrix S(k) at real k > 0 from the Jost solution values
/// at the origin; |S| = 1.  The potential must be supported in [0, infinity).
cplx halfline_smatrix(const Potential& p, const HalfLineBC& hbc, double k,
                      const JostOptions& opts = {});

struct HalfLineShiftOptions {
  double lambda_max = 0.0;
  int grid_points = 320;
  JostOptions jost;
};

/// Spectral shift function of the half-line pair, bound-state steps below
/// zero and -arg S/(2 pi) unwrapped from a high-energy anchor above.
class HalfLineShift {
public:
  HalfLineShift(const Potential& p, const HalfLineBC& hbc,
                const HalfLineShiftOptions& opts = {});

  double xi(double lambda) const;
  const std::vector<double>& betas() const { return betas_; }

private:
  Potential p_;
  HalfLineBC hbc_;
  JostOptions jost_;
  std::vector<double> betas_;
  std::vector<double> kgrid_, theta_; // unwrapped arg S along descending k
};

double halfline_fumi(const HalfLineShift& ss, double nu, const WeightFunction& f);

/// Finite size energy of the half-line box along the eta-sequence
/// L sqrt(nu) = pi (N + eta):
/// (sqrt(nu)/4pi) f'(nu) [arccos^2(Re(W* S)) - arccos^2(Re W)] with
/// W = -e^{-2 pi i eta} (ia + sqrt(nu) b)/(ia - sqrt(nu) b)
///                      (iA + sqrt(nu) B)/(iA - sqrt(nu) B).
double halfline_fse(const Potential& p, const HalfLineBC& hbc, double nu, double eta,
                    const WeightFunction& f, const JostOptions& opts = {});

/// xi^2 + (1 - 2 eta + 2 theta) xi, the scalar expansion of the arccos^2
/// difference for unimodular W and S.
double gebert_coefficient(double xi_nu, double eta, double theta);

/// Eigenvalues of the half-line box operator (free when p is zero).
std::vector<double> halfline_spectrum(const Potential& p, const HalfLineBC& hbc,
                                      double L, double cutoff,
                                      const SpectrumOptions& opts = {});

EnergyDecomposition halfline_energy_difference(const Potential& p, const HalfLineBC& hbc,
                                               double L, double nu, const WeightFunction& f,
                                               const SpectrumOptions& opts = {});

} // namespace fsekit
