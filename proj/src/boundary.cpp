#include "fsekit/boundary.hpp"

#include "fsekit/errors.hpp"

namespace fsekit {

BoundaryCondition BoundaryCondition::dirichlet() {
  BoundaryCondition bc;
  bc.A = Eigen::Matrix2cd::Identity();
  bc.B = Eigen::Matrix2cd::Zero();
  bc.name = "dirichlet";
  return bc;
}

BoundaryCondition BoundaryCondition::neumann() {
  BoundaryCondition bc;
  bc.A = Eigen::Matrix2cd::Zero();
  bc.B = Eigen::Matrix2cd::Identity();
  bc.name = "neumann";
  return bc;
}

BoundaryCondition BoundaryCondition::periodic() {
  BoundaryCondition bc;
  bc.A << 1.0, -1.0, 0.0, 0.0;
  bc.B << 0.0, 0.0, 1.0, 1.0;
  bc.name = "periodic";
  return bc;
}

BoundaryCondition BoundaryCondition::robin(double kappa_R, double kappa_L) {
  // kappa_R u(L) + u'(L) = 0 and kappa_L u(-L) - u'(-L) = 0: the form
  // (Gamma_1 u, Gamma_2 u) equals kappa_R |u(L)|^2 + kappa_L |u(-L)|^2.
  BoundaryCondition bc;
  bc.A << kappa_R, 0.0, 0.0, kappa_L;
  bc.B = Eigen::Matrix2cd::Identity();
  bc.name = "robin";
  return bc;
}

BoundaryCondition BoundaryCondition::general(const Eigen::Matrix2cd& A,
                                             const Eigen::Matrix2cd& B) {
  BoundaryCondition bc;
  bc.A = A;
  bc.B = B;
  bc.validate();
  return bc;
}

BoundaryCondition BoundaryCondition::preset(const std::string& name) {
  if (name == "dirichlet") return dirichlet();
  if (name == "neumann") return neumann();
  if (name == "periodic") return periodic();
  if (name == "robin") return robin(1.0, 1.0);
  throw ConfigError("unknown boundary-condition preset: " + name);
}

bool BoundaryCondition::is_real() const {
  return A.imag().cwiseAbs().maxCoeff() < 1e-14 &&
         B.imag().cwiseAbs().maxCoeff() < 1e-14;
}

void BoundaryCondition::validate(double tol) const {
  const double scale = std::max(1.0, std::max(A.norm(), B.norm()));
  const Eigen::Matrix2cd herm = A * B.adjoint() - B * A.adjoint();
  if (herm.cwiseAbs().maxCoeff() > tol * scale * scale)
    throw ConfigError("boundary condition violates A B* = B A*");
  Eigen::Matrix<cplx, 2, 4> AB;
  AB << A, B;
  Eigen::JacobiSVD<Eigen::Matrix<cplx, 2, 4>> svd(AB);
  if (svd.singularValues()(1) < tol * scale)
    throw ConfigError("boundary condition violates rank(A|B) = 2");
}

double BoundaryCondition::form_bound_constant() const {
  if (B.cwiseAbs().maxCoeff() < 1e-14) return 0.0;
  const Eigen::Matrix2cd Bp = B.completeOrthogonalDecomposition().pseudoInverse();
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(Bp * A);
  return svd.singularValues()(0);
}

Eigen::Matrix2cd u_matrix(const BoundaryCondition& bc, cplx z) {
  if (z == cplx{0.0, 0.0}) throw Error("u_matrix: z != 0 required");
  const cplx w = sqrt_upper(z);
  const Eigen::Matrix2cd P = I_unit * bc.A - w * bc.B;
  const Eigen::Matrix2cd Q = I_unit * bc.A + w * bc.B;
  const double scale = std::max(1.0, P.norm());
  if (std::abs(P.determinant()) < 1e-13 * scale * scale)
    throw SingularPencil("u_matrix: iA - sqrt(z) B is singular at this z");
  return P.inverse() * Q;
}

} // namespace fsekit
