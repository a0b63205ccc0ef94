#pragma once
#include <complex>
#include <functional>
#include <vector>

namespace fsekit {

using cplx = std::complex<double>;
inline constexpr cplx I_unit{0.0, 1.0};
inline constexpr double pi = 3.14159265358979323846;

/// Square root of z with Im >= 0 (principal branch flipped into the closed
/// upper half-plane).  On the positive real axis this is the limit from above.
inline cplx sqrt_upper(cplx z) {
  cplx w = std::sqrt(z);
  if (w.imag() < 0.0) w = -w;
  return w;
}

struct GaussRule {
  std::vector<double> x; // nodes on [-1, 1], ascending
  std::vector<double> w;
};

/// n-point Gauss-Legendre rule, computed by Newton iteration on P_n and cached.
const GaussRule& gauss_legendre(int n);

/// Nodes/weights of the n-point rule mapped to [a, b].
void gauss_legendre_on(int n, double a, double b,
                       std::vector<double>& nodes, std::vector<double>& weights);

/// Adaptive Gauss-Kronrod integration, absolute tolerance `tol`.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12, int max_depth = 15);
cplx integrate_c(const std::function<cplx(double)>& f, double a, double b,
                 double tol = 1e-12, int max_depth = 15);

/// Absolute-tolerance, depth-capped adaptive panels (nested GL 10/21).
/// Meant for expensive integrands where the error floor is set by the
/// evaluation noise rather than by machine epsilon.
double integrate_abs(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, int max_depth = 10);
cplx integrate_abs_c(const std::function<cplx(double)>& f, double a, double b,
                     double abs_tol, int max_depth = 10);

/// Least-squares slope/intercept of y against x.
struct LineFit { double slope, intercept; };
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Bisection for a sign change of f on [a, b]; f(a), f(b) must differ in sign.
double bisect(const std::function<double(double)>& f, double a, double b,
              double xtol, int max_iter = 200);

} // namespace fsekit
