#include "fsekit/fse.hpp"

#include <cmath>

#include "fsekit/errors.hpp"

namespace fsekit {

namespace {

const Eigen::Matrix2cd sigma_x = (Eigen::Matrix2cd() << 0.0, 1.0, 1.0, 0.0).finished();

Eigen::Matrix2cd herm_part(const Eigen::Matrix2cd& M) {
  return 0.5 * (M + M.adjoint());
}

// Eigenvalues of a 2x2 Hermitian matrix, ascending.
std::array<double, 2> eig2(const Eigen::Matrix2cd& H) {
  const double m = 0.5 * (H(0, 0).real() + H(1, 1).real());
  const double d = 0.5 * (H(0, 0).real() - H(1, 1).real());
  const double r = std::sqrt(d * d + std::norm(H(0, 1)));
  return {m - r, m + r};
}

double clamp_unit(double x, double tol) {
  if (x > 1.0) {
    if (x - 1.0 > tol)
      throw EigenvalueOutOfRange("fse: eigenvalue beyond [-1,1] signals unitarity loss");
    return 1.0;
  }
  if (x < -1.0) {
    if (-1.0 - x > tol)
      throw EigenvalueOutOfRange("fse: eigenvalue beyond [-1,1] signals unitarity loss");
    return -1.0;
  }
  return x;
}

struct FsePair {
  std::array<double, 2> h0;     // eigenvalues of Re(e^{i phi} sx U*)
  std::array<double, 2> hplus;  // eigenvalues of Re(e^{i phi} sx U* S)
};

FsePair fse_matrices(const Potential& p, const BoundaryCondition& bc, double nu,
                     double phi, const FseOptions& opts) {
  if (nu <= 0.0) throw Error("fse: nu > 0 required");
  const Eigen::Matrix2cd U = u_matrix(bc, cplx(nu, 0.0));
  const cplx e = std::exp(I_unit * phi);
  Eigen::Matrix2cd S = Eigen::Matrix2cd::Identity();
  if (!p.is_zero()) S = smatrix(scattering(p, cplx(std::sqrt(nu), 0.0), opts.jost));
  FsePair out;
  out.h0 = eig2(herm_part(e * sigma_x * U.adjoint()));
  out.hplus = eig2(herm_part(e * sigma_x * U.adjoint() * S));
  for (double* v : {&out.h0[0], &out.h0[1], &out.hplus[0], &out.hplus[1]})
    *v = clamp_unit(*v, opts.clamp_tol);
  return out;
}

// int_0^delta ln(cosh s + e) ds, stable for e -> -1 where the integrand has
// an integrable logarithmic singularity at s = 0.
double log_piece_near_zero(double e, double delta) {
  if (e > -1.0 + 1e-9) {
    return integrate([&](double s) { return std::log(std::cosh(s) + e); }, 0.0, delta,
                     1e-12);
  }
  // cosh s - 1 = 2 sinh^2(s/2): ln = ln 2 + 2 ln sinh(s/2); split off ln(s/2).
  const double analytic = delta * std::log(2.0) +
                          2.0 * (delta * std::log(0.5 * delta) - delta);
  const double smooth = integrate(
      [&](double s) {
        const double half = 0.5 * s;
        const double ratio = half < 1e-6 ? 1.0 + half * half / 6.0 : std::sinh(half) / half;
        return 2.0 * std::log(ratio);
      },
      0.0, delta, 1e-12);
  return analytic + smooth;
}

} // namespace

double fse_closed(const Potential& p, const BoundaryCondition& bc, double nu,
                  double phi, const WeightFunction& f, const FseOptions& opts) {
  const FsePair m = fse_matrices(p, bc, nu, phi, opts);
  double tr = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double ap = std::acos(m.hplus[i]);
    const double a0 = std::acos(m.h0[i]);
    tr += ap * ap - a0 * a0;
  }
  return std::sqrt(nu) / (4.0 * pi) * f.deriv(nu) * tr;
}

double fse_integral(const Potential& p, const BoundaryCondition& bc, double nu,
                    double phi, const WeightFunction& f, const FseOptions& opts) {
  const FsePair m = fse_matrices(p, bc, nu, phi, opts);
  // ln det[id + (cosh s + H0)^{-1} H_T] = sum_i ln(cosh s + b_i) - ln(cosh s + a_i)
  // through det(cosh s + H0 + H_T)/det(cosh s + H0); H0 + H_T = H_plus.
  double scale = 0.0;
  for (int i = 0; i < 2; ++i)
    scale = std::max({scale, std::abs(m.hplus[i] - m.h0[i])});
  if (scale == 0.0) return 0.0;

  const double delta = 0.25;
  double integral = 0.0;
  for (int i = 0; i < 2; ++i) {
    integral += log_piece_near_zero(m.hplus[i], delta);
    integral -= log_piece_near_zero(m.h0[i], delta);
  }
  auto integrand = [&](double s) {
    const double c = std::cosh(s);
    double v = 0.0;
    for (int i = 0; i < 2; ++i)
      v += std::log(c + m.hplus[i]) - std::log(c + m.h0[i]);
    return v;
  };
  // Exponential decay: stop when the integrand is below 1e-14.
  double T = delta;
  while (std::abs(integrand(T)) > 1e-14 && T < 80.0) T += 4.0;
  integral += integrate(integrand, delta, T, 1e-13);

  return -std::sqrt(nu) / (2.0 * pi) * f.deriv(nu) * integral;
}

double arccosh_closed_form(const Eigen::MatrixXcd& H1, const Eigen::MatrixXcd& H2) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es1(H1), es12(H1 + H2);
  if (es1.eigenvalues().minCoeff() <= 0.0 || es12.eigenvalues().minCoeff() <= 0.0)
    throw NotPositiveDefinite("arccosh_closed_form: need H1 > 0 and H1 + H2 > 0");
  auto acosh_sq = [](double x) {
    if (x >= 1.0) {
      const double v = std::acosh(x);
      return v * v;
    }
    const double v = std::acos(std::max(x, -1.0));
    return -v * v;
  };
  double tr = 0.0;
  for (int i = 0; i < H1.rows(); ++i) {
    tr += acosh_sq(es12.eigenvalues()(i) - 1.0);
    tr -= acosh_sq(es1.eigenvalues()(i) - 1.0);
  }
  return 0.5 * tr;
}

double arccosh_quadrature(const Eigen::MatrixXcd& H1, const Eigen::MatrixXcd& H2,
                          double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es1(H1), es12(H1 + H2);
  if (es1.eigenvalues().minCoeff() <= 0.0 || es12.eigenvalues().minCoeff() <= 0.0)
    throw NotPositiveDefinite("arccosh_quadrature: need H1 > 0 and H1 + H2 > 0");
  auto integrand = [&](double t) {
    const double ft = std::cosh(t) - 1.0;
    double v = 0.0;
    for (int i = 0; i < H1.rows(); ++i)
      v += std::log(ft + es12.eigenvalues()(i)) - std::log(ft + es1.eigenvalues()(i));
    return v;
  };
  double T = 5.0;
  while (std::abs(integrand(T)) > 1e-14 && T < 80.0) T += 4.0;
  return integrate(integrand, 0.0, T, tol);
}

} // namespace fsekit
