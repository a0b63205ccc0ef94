#pragma once
// Internal shooting/rootscan machinery shared by the whole-line and half-line
// box-spectrum solvers.  Not installed.
#include <functional>
#include <vector>

#include "fsekit/potential.hpp"

namespace fsekit::internal {

double golden_min(const std::function<double(double)>& f, double a, double b, double xtol);

/// Roots of a continuous real function sampled on a uniform grid, repeated
/// according to zero order (sign changes simple, touching dips double or a
/// split pair of simple roots).
std::vector<double> scan_roots(const std::function<double(double)>& g,
                               double a, double b, int n, double xtol);

/// cos(sqrt(lambda) d) and sin(sqrt(lambda) d)/sqrt(lambda), analytic in
/// lambda through 0.
void free_cs(double lambda, double d, double& c, double& s);

struct ShootState {
  double u, du;
  double logscale = 0.0;
  void renorm();
};

/// Exact propagation across a V = 0 stretch, log-scaled against overflow.
void free_step(double lambda, double a, double b, ShootState& s);

/// Dormand-Prince 5(4) for u'' = (V - lambda) u over one smooth segment.
void dopri_step_segment(const Potential& p, double lambda, double a, double b,
                        ShootState& st, double reltol);

/// Segment boundaries (support edges, interior breakpoints) clipped to [a, b].
std::vector<double> segment_cuts(const Potential& p, double a, double b);

/// Propagate (u, du) from cuts.front() to cuts.back().
ShootState shoot(const Potential& p, const std::vector<double>& cuts, double lambda,
                 double u0, double du0, double reltol);

} // namespace fsekit::internal
