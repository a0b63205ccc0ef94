#pragma once
#include <vector>

#include "fsekit/boundary.hpp"
#include "fsekit/potential.hpp"
#include "fsekit/weight.hpp"

namespace fsekit {

struct SpectrumOptions {
  double scan_factor = 8.0;  // scan resolution pi/(scan_factor L) in sqrt(lambda)
  double ode_reltol = 1e-10;
  double rank_tol = 1e-8;    // degenerate roots: second singular value threshold
};

/// Eigenvalues of H_L (or H_{V,L}) up to a cutoff, ascending, each value
/// repeated according to its multiplicity (at most two).
struct BoxSpectrum {
  double L = 0.0;
  BoundaryCondition bc;
  double cutoff = 0.0;
  bool perturbed = false;
  std::vector<double> eigenvalues;

  long count_below(double nu) const;
  double sum_f_below(double nu, const WeightFunction& f) const;
};

/// Spectrum of the free box operator from the secular equation
/// det(e^{2iL sqrt(lambda)} id + U(lambda) sigma_x) = 0, plus an explicit
/// lambda = 0 zero-mode check and a search on the negative axis.
BoxSpectrum free_spectrum(const BoundaryCondition& bc, double L, double cutoff,
                          const SpectrumOptions& opts = {});

/// Spectrum of H_L + V by transfer-matrix shooting: the fundamental system is
/// propagated across [-L, L] (adaptive embedded RK inside the support, exact
/// free steps outside) and the roots of det(A Gamma_1 - B Gamma_2) located.
BoxSpectrum perturbed_spectrum(const Potential& p, const BoundaryCondition& bc,
                               double L, double cutoff,
                               const SpectrumOptions& opts = {});

struct EnergyDecomposition {
  double E_L = 0.0;  // sum f(mu <= nu) - sum f(lambda <= nu)
  long M = 0;        // # perturbed eigenvalues <= nu
  long N = 0;        // # free eigenvalues <= nu
  long xi_L = 0;     // N - M (Lifshitz)
};

EnergyDecomposition energy_difference(const BoxSpectrum& pert, const BoxSpectrum& free_sp,
                                      double nu, const WeightFunction& f);
EnergyDecomposition energy_difference(const Potential& p, const BoundaryCondition& bc,
                                      double L, double nu, const WeightFunction& f,
                                      const SpectrumOptions& opts = {});

/// Micro-canonical energy difference sum_{k<=N} (mu_k - lambda_k).
double microcanonical(const Potential& p, const BoundaryCondition& bc, double L,
                      int n_particles, const SpectrumOptions& opts = {});

} // namespace fsekit
