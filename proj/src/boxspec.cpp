#include "fsekit/boxspec.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "fsekit/errors.hpp"
#include "shooting.hpp"

namespace fsekit {

namespace {

using Mat2 = Eigen::Matrix2cd;

const Mat2 sigma_x = (Mat2() << 0.0, 1.0, 1.0, 0.0).finished();

// Gap-triggered rescans: near-degenerate pairs sit below the base scan
// resolution when the even/odd phase shifts differ by about pi.
void rescan_suspicious_gaps(const std::function<double(double)>& g,
                            std::vector<double>& roots, double xtol) {
  for (int round = 0; round < 2; ++round) {
    if (roots.size() < 4) return;
    std::sort(roots.begin(), roots.end());
    std::vector<double> gaps;
    for (size_t i = 1; i < roots.size(); ++i) {
      const double d = roots[i] - roots[i - 1];
      if (d > xtol * 1e3) gaps.push_back(d);
    }
    if (gaps.size() < 3) return;
    std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
    const double med = gaps[gaps.size() / 2];
    std::vector<double> extra;
    for (size_t i = 1; i < roots.size(); ++i) {
      const double a = roots[i - 1], b = roots[i];
      if (b - a > 1.7 * med) {
        const double pad = 100 * xtol + 1e-9 * (b - a);
        for (double r : internal::scan_roots(g, a + pad, b - pad, 96, xtol))
          extra.push_back(r);
      }
    }
    if (extra.empty()) return;
    roots.insert(roots.end(), extra.begin(), extra.end());
  }
}

// ---------------------------------------------------------------------------
// free spectrum via the boundary secular matrix
// ---------------------------------------------------------------------------

// N(w) = e^{iwL}(A + iwB) + e^{-iwL}(A - iwB) sigma_x; det N = 0 at the
// nonzero eigenvalues lambda = w^2.  For real w > 0 the normalization
// rho(w) = -i det(iA - wB) sqrt(det U) makes det N / rho real.
struct FreeSecular {
  const BoundaryCondition& bc;
  double L;

  Mat2 N(cplx w) const {
    const cplx ep = std::exp(I_unit * w * L);
    const cplx em = 1.0 / ep;
    return ep * (bc.A + I_unit * w * bc.B) + em * ((bc.A - I_unit * w * bc.B) * sigma_x);
  }

  // Scaled negative-axis secular matrix, e^{-2 kappa L} (A - kappa B) + (A + kappa B) sigma_x.
  Mat2 N_neg(double kappa) const {
    const double q = std::exp(-2.0 * kappa * L);
    return q * bc.A - q * kappa * bc.B + (bc.A + kappa * bc.B) * sigma_x;
  }

  cplx u_branch(double w, cplx u_ref) const {
    const cplx dU = (I_unit * bc.A + w * bc.B).determinant() /
                    (I_unit * bc.A - w * bc.B).determinant();
    cplx u = std::sqrt(dU);
    if (std::abs(u - u_ref) > std::abs(-u - u_ref)) u = -u;
    return u;
  }

  double G(double w, cplx u) const {
    const cplx rho = -I_unit * (I_unit * bc.A - w * bc.B).determinant() * u;
    return (N(w).determinant() / rho).real();
  }

  double nscale(double w) const {
    return 2.0 * (bc.A.norm() + (1.0 + std::abs(w)) * bc.B.norm()) + 1e-300;
  }

  int multiplicity(const Mat2& M, double scale, double rank_tol) const {
    Eigen::JacobiSVD<Mat2> svd(M);
    const double s0 = svd.singularValues()(0);
    const double s1 = svd.singularValues()(1);
    if (s0 < rank_tol * scale) return 2;
    if (s1 < rank_tol * scale * 10) return 1;
    return 0;
  }
};

// Multiplicity of lambda = 0 from the {1, x} solution basis.
int zero_mode_multiplicity(const BoundaryCondition& bc, double L, double rank_tol) {
  Mat2 Y1, Y2;
  Y1 << 1.0, L, 1.0, -L;
  Y2 << 0.0, -1.0, 0.0, 1.0;
  const Mat2 M0 = bc.A * Y1 - bc.B * Y2;
  Eigen::JacobiSVD<Mat2> svd(M0);
  const double scale = std::max(1.0, bc.A.norm() * (1.0 + L) + bc.B.norm());
  int mult = 0;
  for (int i = 0; i < 2; ++i)
    if (svd.singularValues()(i) < rank_tol * 1e-2 * scale) ++mult;
  return mult;
}

void check_gaps(const std::vector<double>& ws, double L) {
  std::vector<double> distinct;
  for (double w : ws)
    if (distinct.empty() || w - distinct.back() > 1e-9) distinct.push_back(w);
  for (size_t i = 1; i < distinct.size(); ++i) {
    if (distinct[i] - distinct[i - 1] > 2.0 * pi / L * 1.05) {
      std::ostringstream msg;
      msg << "eigenvalue gap " << distinct[i] - distinct[i - 1]
          << " in sqrt(lambda) exceeds twice the free spacing bound " << pi / L;
      throw MissedRootSuspected(msg.str());
    }
  }
}

} // namespace

long BoxSpectrum::count_below(double nu) const {
  return std::upper_bound(eigenvalues.begin(), eigenvalues.end(), nu) -
         eigenvalues.begin();
}

double BoxSpectrum::sum_f_below(double nu, const WeightFunction& f) const {
  double s = 0.0;
  for (double e : eigenvalues) {
    if (e > nu) break;
    s += f.value(e);
  }
  return s;
}

BoxSpectrum free_spectrum(const BoundaryCondition& bc, double L, double cutoff,
                          const SpectrumOptions& opts) {
  if (L <= 0) throw Error("free_spectrum: L > 0 required");
  bc.validate();
  BoxSpectrum out;
  out.L = L;
  out.bc = bc;
  out.cutoff = cutoff;
  out.perturbed = false;

  FreeSecular sec{bc, L};

  // Negative eigenvalues, bounded via the form constant c.
  const double c = bc.form_bound_constant();
  if (c > 0.0) {
    const double lam_min = c * (1.0 / L + 4.0 / (c + 1.0));
    const double kmax = 1.5 * std::sqrt(lam_min) + 0.1;
    if (bc.is_real()) {
      auto g = [&](double kappa) { return sec.N_neg(kappa).determinant().real(); };
      for (double r : internal::scan_roots(g, 1e-8, kmax, 256, 1e-13))
        out.eigenvalues.push_back(-r * r);
    } else {
      auto g = [&](double kappa) { return std::abs(sec.N_neg(kappa).determinant()); };
      const int n = 256;
      const double h = (kmax - 1e-8) / n;
      for (int i = 1; i < n; ++i) {
        const double k0 = 1e-8 + h * i;
        const double gm = g(k0), gl = g(k0 - h), gr = g(k0 + h);
        if (gm < gl && gm <= gr && gm < 0.25 * std::max(gl, gr)) {
          const double r = internal::golden_min(g, k0 - h, k0 + h, 1e-13);
          const int m = sec.multiplicity(sec.N_neg(r), sec.nscale(r), opts.rank_tol);
          for (int j = 0; j < m; ++j) out.eigenvalues.push_back(-r * r);
        }
      }
    }
  }

  // lambda = 0.
  const int m0 = zero_mode_multiplicity(bc, L, opts.rank_tol);
  for (int m = 0; m < m0; ++m) out.eigenvalues.push_back(0.0);

  // Positive eigenvalues.
  if (cutoff > 0.0) {
    const double wmax = std::sqrt(cutoff);
    const double step = pi / (opts.scan_factor * L);
    const double wlo = std::min(1e-6, 0.1 * step);
    const int n = std::max(8, static_cast<int>(std::ceil((wmax - wlo) / step)));

    // Track the sqrt(det U) branch along the scan; inside the root-finders the
    // branch is frozen to its local value.
    cplx u = std::sqrt((I_unit * bc.A + wlo * bc.B).determinant() /
                       (I_unit * bc.A - wlo * bc.B).determinant());
    std::vector<cplx> us(n + 1);
    for (int i = 0; i <= n; ++i) {
      const double w = wlo + (wmax - wlo) * i / n;
      u = sec.u_branch(w, u);
      us[i] = u;
    }
    auto u_at = [&](double w) {
      const double t = (w - wlo) / (wmax - wlo) * n;
      const int i = std::min(n, std::max(0, static_cast<int>(std::lround(t))));
      return us[i];
    };
    auto g = [&](double w) { return sec.G(w, sec.u_branch(w, u_at(w))); };
    std::vector<double> ws = internal::scan_roots(g, wlo, wmax, n, 1e-13);
    rescan_suspicious_gaps(g, ws, 1e-13);
    std::sort(ws.begin(), ws.end());
    check_gaps(ws, L);
    for (double w : ws)
      if (w * w <= cutoff) out.eigenvalues.push_back(w * w);
  }

  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  return out;
}

// ---------------------------------------------------------------------------
// perturbed spectrum: transfer-matrix shooting
// ---------------------------------------------------------------------------

namespace {

struct Shooter {
  const Potential& p;
  double L;
  std::vector<double> cuts; // segment boundaries in [-L, L]
  double reltol;

  Shooter(const Potential& pot, double boxL, double rtol) : p(pot), L(boxL), reltol(rtol) {
    const double R = p.support_radius();
    std::vector<double> c{-L, L};
    if (R > 0.0) {
      if (-R > -L) c.push_back(-R);
      if (R < L) c.push_back(R);
      for (double b : p.breakpoints())
        if (b > -L && b < L) c.push_back(b);
    }
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-14; }),
            c.end());
    cuts = std::move(c);
  }

  internal::ShootState run(double lambda, double u0, double du0) const {
    internal::ShootState s{u0, du0, 0.0};
    const double R = p.support_radius();
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double a = cuts[i], b = cuts[i + 1];
      const double mid = 0.5 * (a + b);
      const bool in_support = !p.is_zero() && std::abs(mid) <= R && p.sup_norm() > 0.0;
      if (in_support)
        internal::dopri_step_segment(p, lambda, a, b, s, reltol);
      else
        internal::free_step(lambda, a, b, s);
    }
    return s;
  }

  // Scaled secular matrix det(A Gamma_1 - B Gamma_2) with both fundamental
  // columns normalized by their accumulated growth factors; the decayed
  // initial-value parts are clipped against exp underflow.  Fine for rank
  // classification, not for deep-tunneling root scans (see secular_det).
  Mat2 secular(const BoundaryCondition& bc, double lambda) const {
    const internal::ShootState s1 = run(lambda, 1.0, 0.0);
    const internal::ShootState s2 = run(lambda, 0.0, 1.0);
    const double f1 = std::exp(-std::min(s1.logscale, 700.0));
    const double f2 = std::exp(-std::min(s2.logscale, 700.0));
    Mat2 Y1, Y2;
    Y1 << s1.u, s2.u, f1, 0.0;
    Y2 << -s1.du, -s2.du, 0.0, f2;
    return bc.A * Y1 - bc.B * Y2;
  }

  // det(A Gamma_1 - B Gamma_2) up to a positive factor, evaluated by
  // multilinear expansion in the two column scales so that e^{-logscale}
  // never underflows the informative terms:
  //   det M = detL + e^{-l1} D1 + e^{-l2} D2 + e^{-l1-l2} det0.
  cplx secular_det(const BoundaryCondition& bc, double lambda) const {
    const internal::ShootState s1 = run(lambda, 1.0, 0.0);
    const internal::ShootState s2 = run(lambda, 0.0, 1.0);
    // L-end part of column j: u_j(L) A(:,0) + du_j(L) B(:,0); the -L part
    // carries the factor e^{-logscale_j}: u0_j A(:,1) - du0_j B(:,1).
    const Eigen::Vector2cd mL1 = s1.u * bc.A.col(0) + s1.du * bc.B.col(0);
    const Eigen::Vector2cd mL2 = s2.u * bc.A.col(0) + s2.du * bc.B.col(0);
    const Eigen::Vector2cd m01 = bc.A.col(1);  // u0 = 1, du0 = 0
    const Eigen::Vector2cd m02 = -bc.B.col(1); // u0 = 0, du0 = 1
    auto det2 = [](const Eigen::Vector2cd& a, const Eigen::Vector2cd& b) {
      return a(0) * b(1) - a(1) * b(0);
    };
    const cplx coeff[4] = {det2(mL1, mL2), det2(m01, mL2), det2(mL1, m02),
                           det2(m01, m02)};
    const double expo[4] = {0.0, -s1.logscale, -s2.logscale,
                            -s1.logscale - s2.logscale};
    double emax = -1e300;
    for (int i = 0; i < 4; ++i)
      if (std::abs(coeff[i]) > 1e-290) emax = std::max(emax, expo[i]);
    if (emax == -1e300) return cplx{0.0, 0.0};
    cplx acc{0.0, 0.0};
    for (int i = 0; i < 4; ++i)
      acc += coeff[i] * std::exp(std::max(expo[i] - emax, -700.0));
    return acc;
  }
};

} // namespace

BoxSpectrum perturbed_spectrum(const Potential& p, const BoundaryCondition& bc,
                               double L, double cutoff, const SpectrumOptions& opts) {
  if (L <= 0) throw Error("perturbed_spectrum: L > 0 required");
  bc.validate();
  BoxSpectrum out;
  out.L = L;
  out.bc = bc;
  out.cutoff = cutoff;
  out.perturbed = true;

  const Shooter sh(p, L, opts.ode_reltol);

  const double c = bc.form_bound_constant();
  const double lam_floor = p.sup_norm() + c * (1.0 / L + 4.0 / (c + 1.0));
  const double kmax = std::sqrt(lam_floor) + 0.5;

  // One continuous scan in zeta with lambda = zeta |zeta| covers the negative
  // axis, the origin and the positive axis.
  auto lam_of = [](double z) { return z * std::abs(z); };
  const double zmax = std::sqrt(std::max(cutoff, 0.0));
  const double step = pi / (opts.scan_factor * L);
  const double zmin = -kmax;
  const int n = std::max(16, static_cast<int>(std::ceil((zmax - zmin) / step)));

  double nref = 1e-12;
  for (int i = 1; i <= 5; ++i) {
    const double z = zmin + (zmax - zmin) * (i - 0.37) / 5.0;
    nref = std::max(nref, sh.secular(bc, lam_of(z)).norm());
  }

  std::vector<double> zs;
  if (bc.is_real()) {
    auto g = [&](double z) { return sh.secular_det(bc, lam_of(z)).real(); };
    zs = internal::scan_roots(g, zmin, zmax, n, 1e-13);
    // Re-examine the positive part for sub-resolution pairs.
    std::vector<double> pos;
    for (double z : zs)
      if (z > 0) pos.push_back(z);
    const size_t before = pos.size();
    rescan_suspicious_gaps(g, pos, 1e-13);
    if (pos.size() != before) {
      zs.erase(std::remove_if(zs.begin(), zs.end(), [](double z) { return z > 0; }),
               zs.end());
      zs.insert(zs.end(), pos.begin(), pos.end());
    }
  } else {
    auto g = [&](double z) { return std::abs(sh.secular(bc, lam_of(z)).determinant()); };
    std::vector<double> xs(n + 1), gs(n + 1);
    for (int i = 0; i <= n; ++i) {
      xs[i] = zmin + (zmax - zmin) * i / n;
      gs[i] = g(xs[i]);
    }
    for (int i = 1; i < n; ++i) {
      if (gs[i] < gs[i - 1] && gs[i] <= gs[i + 1] && gs[i] < 0.25 * std::max(gs[i - 1], gs[i + 1])) {
        const double r = internal::golden_min(g, xs[i - 1], xs[i + 1], 1e-13);
        Eigen::JacobiSVD<Mat2> svd(sh.secular(bc, lam_of(r)));
        const double s0 = svd.singularValues()(0);
        const double s1 = svd.singularValues()(1);
        const double scale = std::max(nref, s0);
        int m = 0;
        if (s0 < opts.rank_tol * scale) m = 2;
        else if (s1 < opts.rank_tol * scale * 10) m = 1;
        for (int j = 0; j < m; ++j) zs.push_back(r);
      }
    }
  }

  std::sort(zs.begin(), zs.end());
  std::vector<double> ws;
  for (double z : zs) {
    const double lam = lam_of(z);
    if (lam <= cutoff) out.eigenvalues.push_back(lam);
    if (z > 0) ws.push_back(z);
  }
  check_gaps(ws, L);
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  return out;
}

EnergyDecomposition energy_difference(const BoxSpectrum& pert, const BoxSpectrum& free_sp,
                                      double nu, const WeightFunction& f) {
  const double tol = 1e-9 * std::max(1.0, std::abs(nu));
  for (const BoxSpectrum* sp : {&pert, &free_sp})
    for (double e : sp->eigenvalues)
      if (std::abs(e - nu) < tol)
        throw NuOnEigenvalue("energy_difference: nu collides with an eigenvalue");
  EnergyDecomposition d;
  d.M = pert.count_below(nu);
  d.N = free_sp.count_below(nu);
  d.xi_L = d.N - d.M;
  d.E_L = pert.sum_f_below(nu, f) - free_sp.sum_f_below(nu, f);
  return d;
}

EnergyDecomposition energy_difference(const Potential& p, const BoundaryCondition& bc,
                                      double L, double nu, const WeightFunction& f,
                                      const SpectrumOptions& opts) {
  const BoxSpectrum pert = perturbed_spectrum(p, bc, L, nu * 1.000001 + 0.1, opts);
  const BoxSpectrum fr = free_spectrum(bc, L, nu * 1.000001 + 0.1, opts);
  return energy_difference(pert, fr, nu, f);
}

double microcanonical(const Potential& p, const BoundaryCondition& bc, double L,
                      int n_particles, const SpectrumOptions& opts) {
  if (n_particles < 1) throw Error("microcanonical: need n_particles >= 1");
  double cutoff = std::pow(pi * (n_particles + 2) / (2.0 * L), 2) + p.sup_norm() + 1.0;
  for (int attempt = 0; attempt < 6; ++attempt) {
    const BoxSpectrum pert = perturbed_spectrum(p, bc, L, cutoff, opts);
    const BoxSpectrum fr = free_spectrum(bc, L, cutoff, opts);
    if (static_cast<int>(pert.eigenvalues.size()) >= n_particles &&
        static_cast<int>(fr.eigenvalues.size()) >= n_particles) {
      double s = 0.0;
      for (int k = 0; k < n_particles; ++k)
        s += pert.eigenvalues[k] - fr.eigenvalues[k];
      return s;
    }
    cutoff *= 1.6;
  }
  throw InsufficientSpectrum("microcanonical: could not collect enough eigenvalues");
}

} // namespace fsekit
