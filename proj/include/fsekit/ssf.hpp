#pragma once
#include <vector>

#include "fsekit/detkit.hpp"
#include "fsekit/jost.hpp"
#include "fsekit/potential.hpp"
#include "fsekit/weight.hpp"

namespace fsekit {

struct SpectralShiftOptions {
  double lambda_max = 0.0;  // 0: automatic, 400 max(1, ||V||_1^2)
  int grid_points = 320;
  JostOptions jost;
};

/// Spectral shift function of (H + V, H) on the line.  Below zero it counts
/// bound states; on the continuum it is -arg t / pi with the branch unwrapped
/// continuously down from a high-energy anchor where xi -> 0.
class SpectralShift {
public:
  explicit SpectralShift(const Potential& p, const SpectralShiftOptions& opts = {});

  double xi(double lambda) const;
  const std::vector<double>& betas() const { return betas_; }
  double lambda_max() const { return kgrid_.front() * kgrid_.front(); }
  const Potential& potential() const { return p_; }

  /// (lambda, xi) samples of the continuum grid used for the unwrap.
  std::vector<std::pair<double, double>> grid() const;

private:
  double theta_interp(double k) const; // unwrapped arg t at wavenumber k

  Potential p_;
  JostOptions jost_;
  std::vector<double> betas_;
  std::vector<double> kgrid_;  // descending
  std::vector<double> theta_;  // unwrapped arg t(k) along kgrid_
};

/// Fumi term int_{-inf}^nu f'(lambda) xi(lambda) d lambda: exact bound-state
/// steps plus adaptive quadrature over (0, nu].
double fumi(const SpectralShift& ss, double nu, const WeightFunction& f);
double fumi(const Potential& p, double nu, const WeightFunction& f,
            const SpectralShiftOptions& opts = {});

/// Same quantity from the contour representation
/// -(2 pi i)^{-1} oint f'(z) ln det(id - K_inf(z)) dz over Gamma_{nu,b};
/// requires 2b > ||V||_1.
double fumi_contour(const Potential& p, double nu, double b, const WeightFunction& f,
                    const ContourOptions& opts = {});

} // namespace fsekit
