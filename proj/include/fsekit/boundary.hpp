#pragma once
#include <Eigen/Dense>
#include <string>

#include "fsekit/numerics.hpp"

namespace fsekit {

/// Self-adjoint boundary conditions of -d^2/dx^2 on [-L, L], encoded by the
/// pair (A, B) acting on the traces Gamma_1 = (u(L), u(-L)) and
/// Gamma_2 = (-u'(L), u'(-L)) through A Gamma_1 - B Gamma_2 = 0.
/// Requires A B* = B A* and rank(A|B) = 2.
struct BoundaryCondition {
  Eigen::Matrix2cd A, B;
  std::string name = "custom";

  static BoundaryCondition dirichlet();
  static BoundaryCondition neumann();
  static BoundaryCondition periodic();
  /// kappa_R u(L) + u'(L) = 0 and kappa_L u(-L) - u'(-L) = 0.
  static BoundaryCondition robin(double kappa_R, double kappa_L);
  static BoundaryCondition general(const Eigen::Matrix2cd& A, const Eigen::Matrix2cd& B);
  static BoundaryCondition preset(const std::string& name);

  bool is_real() const;
  /// Throws ConfigError unless A B* = B A* and rank(A|B) = 2.
  void validate(double tol = 1e-10) const;
  /// Numerical estimate of the form-bound constant c with
  /// |(Gamma_1 u, Gamma_2 u)| <= c (|u(L)|^2 + |u(-L)|^2); here ||B^+ A||_2.
  double form_bound_constant() const;
};

/// Boundary condition scattering matrix U(z) = (iA - sqrt(z) B)^{-1} (iA + sqrt(z) B)
/// with the Im >= 0 branch of the square root.  Unitary for real sqrt(z).
/// Throws SingularPencil at the finitely many exceptional imaginary sqrt(z).
Eigen::Matrix2cd u_matrix(const BoundaryCondition& bc, cplx z);

} // namespace fsekit
