#pragma once
#include <Eigen/Dense>

#include "fsekit/boundary.hpp"
#include "fsekit/jost.hpp"
#include "fsekit/weight.hpp"

namespace fsekit {

struct FseOptions {
  JostOptions jost;
  double clamp_tol = 1e-8;  // unitarity-loss guard before arccos clamping
};

/// Finite size energy in closed form,
/// (sqrt(nu)/4pi) f'(nu) tr[arccos^2(Re(e^{i phi} sx U* S)) - arccos^2(Re(e^{i phi} sx U*))],
/// with phi the limit phase of e^{2iL sqrt(nu)} along the length sequence
/// (phi = pi eta) and Re(M) = (M + M*)/2 applied spectrally.
double fse_closed(const Potential& p, const BoundaryCondition& bc, double nu,
                  double phi, const WeightFunction& f, const FseOptions& opts = {});

/// The same quantity as the s-integral
/// -(sqrt(nu)/2pi) f'(nu) int_0^inf ln det[id + (cosh s + H0)^{-1} H_T] ds.
double fse_integral(const Potential& p, const BoundaryCondition& bc, double nu,
                    double phi, const WeightFunction& f, const FseOptions& opts = {});

/// (1/2) tr[arcosh^2(H1 + H2 - id) - arcosh^2(H1 - id)] for self-adjoint
/// matrices with H1 > 0 and H1 + H2 > 0; arcosh extended into [-1, 1] by
/// arcosh(x) = +- i arccos(x) (the square is real).
double arccosh_closed_form(const Eigen::MatrixXcd& H1, const Eigen::MatrixXcd& H2);

/// Quadrature twin: int_0^T ln det(id + (f(t) id + H1)^{-1} H2) dt with
/// f(t) = cosh(t) - 1, truncated when the integrand falls below 1e-14.
double arccosh_quadrature(const Eigen::MatrixXcd& H1, const Eigen::MatrixXcd& H2,
                          double tol = 1e-10);

} // namespace fsekit
