#include "fsekit/halfline.hpp"

#include <algorithm>
#include <cmath>

#include "fsekit/errors.hpp"
#include "shooting.hpp"

namespace fsekit {

namespace {

double wrap_pi(double x) { return x - 2.0 * pi * std::round(x / (2.0 * pi)); }

void check_support(const Potential& p) {
  const double R = p.support_radius();
  for (double x : {-1e-6, -0.1, -0.3 * R - 0.01, -0.9 * R})
    if (std::abs(p(x)) > 1e-9)
      throw SupportViolation("half-line potential must vanish on x < 0");
}

// Jost solution values at the origin; psi(-k; 0) follows by conjugation.
void jost_at_origin(const Potential& p, double k, const JostOptions& opts,
                    cplx& psi0, cplx& dpsi0) {
  const JostSolution m = solve_jost(p, cplx(k, 0.0), +1, opts);
  const auto it = std::lower_bound(m.grid.begin(), m.grid.end(), -1e-12);
  const size_t i = std::min<size_t>(it - m.grid.begin(), m.grid.size() - 1);
  psi0 = m.m[i];
  dpsi0 = I_unit * k * m.m[i] + m.dm[i];
}

} // namespace

void HalfLineBC::validate() const {
  if (std::abs((a * std::conj(b)).imag()) > 1e-12)
    throw ConfigError("half-line origin condition needs a conj(b) real");
  if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-10)
    throw ConfigError("half-line origin condition needs |a|^2 + |b|^2 = 1");
  if (std::abs(A) + std::abs(B) < 1e-12)
    throw ConfigError("half-line far condition needs (A, B) != 0");
}

cplx halfline_smatrix(const Potential& p, const HalfLineBC& hbc, double k,
                      const JostOptions& opts) {
  if (k <= 0.0) throw Error("halfline_smatrix: k > 0 required");
  hbc.validate();
  check_support(p);
  if (p.is_zero()) return cplx{1.0, 0.0};
  cplx psi0, dpsi0;
  jost_at_origin(p, k, opts, psi0, dpsi0);
  const cplx c = (I_unit * hbc.a + k * hbc.b) / (I_unit * hbc.a - k * hbc.b);
  const cplx num = hbc.a * std::conj(psi0) - hbc.b * std::conj(dpsi0);
  const cplx den = hbc.a * psi0 - hbc.b * dpsi0;
  return c * num / den;
}

HalfLineShift::HalfLineShift(const Potential& p, const HalfLineBC& hbc,
                             const HalfLineShiftOptions& opts)
    : p_(p), hbc_(hbc), jost_(opts.jost) {
  hbc_.validate();
  check_support(p_);

  // Bound states: zeros of a psi(i beta; 0) - b psi'(i beta; 0).
  const double beta_max = 0.5 * p_.l1_negative();
  if (beta_max > 0.0) {
    auto g = [&](double beta) {
      const JostSolution m = solve_jost(p_, cplx(0.0, beta), +1, jost_);
      const auto it = std::lower_bound(m.grid.begin(), m.grid.end(), -1e-12);
      const size_t i = std::min<size_t>(it - m.grid.begin(), m.grid.size() - 1);
      const cplx psi0 = m.m[i];
      const cplx dpsi0 = -beta * m.m[i] + m.dm[i];
      return (hbc_.a * psi0 - hbc_.b * dpsi0).real();
    };
    const double blo = 1e-7 * std::max(1.0, beta_max);
    double b0 = blo, g0 = g(b0);
    const int n = 256;
    for (int i = 1; i <= n; ++i) {
      const double b1 = blo + (beta_max * 1.0000001 - blo) * i / n;
      const double g1 = g(b1);
      if ((g0 > 0) != (g1 > 0))
        betas_.push_back(bisect(g, b0, b1, 1e-12 * std::max(1.0, beta_max)));
      b0 = b1;
      g0 = g1;
    }
  }

  const double v1 = p_.moment_norm(0);
  const double lmax = opts.lambda_max > 0.0 ? opts.lambda_max
                                            : 400.0 * std::max(1.0, v1 * v1);
  const double kmax = std::sqrt(lmax);
  const double kmin = std::min(0.05, kmax * 1e-4);
  if (p_.is_zero()) {
    kgrid_ = {kmax, kmin};
    theta_ = {0.0, 0.0};
    return;
  }
  const int n = std::max(32, opts.grid_points);
  kgrid_.resize(n);
  const double ratio = std::pow(kmin / kmax, 1.0 / (n - 1));
  for (int i = 0; i < n; ++i) kgrid_[i] = kmax * std::pow(ratio, i);

  auto arg_s = [&](double k) { return std::arg(halfline_smatrix(p_, hbc_, k, jost_)); };
  theta_.resize(kgrid_.size());
  theta_[0] = arg_s(kgrid_[0]);
  if (std::abs(theta_[0]) > 0.5 * pi)
    throw BranchAnchorTooLow("HalfLineShift: arg S at the anchor is not small");
  for (size_t i = 1; i < kgrid_.size();) {
    const double pa = arg_s(kgrid_[i]);
    const double gap = wrap_pi(pa - theta_[i - 1]);
    if (std::abs(gap) <= 0.5 * pi) {
      theta_[i] = theta_[i - 1] + gap;
      ++i;
      continue;
    }
    if (kgrid_[i - 1] - kgrid_[i] < 1e-9 * kgrid_[i - 1])
      throw BranchAnchorTooLow("HalfLineShift: phase step exceeds pi under refinement");
    kgrid_.insert(kgrid_.begin() + i, std::sqrt(kgrid_[i - 1] * kgrid_[i]));
    theta_.insert(theta_.begin() + i, 0.0);
  }
}

double HalfLineShift::xi(double lambda) const {
  if (lambda == 0.0) throw Error("halfline xi: lambda != 0 required");
  if (lambda < 0.0) {
    int count = 0;
    for (double b : betas_) {
      if (std::abs(lambda + b * b) < 1e-9 * std::max(1.0, b * b))
        throw Error("halfline xi: lambda sits on a bound-state jump");
      if (-b * b <= lambda) ++count;
    }
    return -static_cast<double>(count);
  }
  if (p_.is_zero()) return 0.0;
  const double k = std::sqrt(lambda);
  const double pa = std::arg(halfline_smatrix(p_, hbc_, k, jost_));
  double ref;
  if (k >= kgrid_.front()) ref = theta_.front() * kgrid_.front() / k;
  else if (k <= kgrid_.back()) ref = theta_.back();
  else {
    auto it = std::lower_bound(kgrid_.begin(), kgrid_.end(), k, std::greater<double>());
    const size_t i = static_cast<size_t>(it - kgrid_.begin());
    const double t = (kgrid_[i - 1] - k) / (kgrid_[i - 1] - kgrid_[i]);
    ref = (1.0 - t) * theta_[i - 1] + t * theta_[i];
  }
  const double theta = pa + 2.0 * pi * std::round((ref - pa) / (2.0 * pi));
  return -theta / (2.0 * pi);
}

double halfline_fumi(const HalfLineShift& ss, double nu, const WeightFunction& f) {
  if (nu <= 0.0) throw Error("halfline_fumi: nu > 0 required");
  double steps = 0.0;
  for (double b : ss.betas()) steps += f.value(-b * b);
  steps -= static_cast<double>(ss.betas().size()) * f.value(0.0);
  auto integrand = [&](double lam) { return f.deriv(lam) * ss.xi(lam); };
  const double a1 = nu / 64.0, a2 = nu / 8.0;
  double cont = integrate_abs(integrand, 1e-12 * nu, a1, 1e-9, 9);
  cont += integrate_abs(integrand, a1, a2, 1e-9, 9);
  cont += integrate_abs(integrand, a2, nu, 1e-9, 9);
  return steps + cont;
}

double halfline_fse(const Potential& p, const HalfLineBC& hbc, double nu, double eta,
                    const WeightFunction& f, const JostOptions& opts) {
  if (nu <= 0.0) throw Error("halfline_fse: nu > 0 required");
  hbc.validate();
  check_support(p);
  const double k = std::sqrt(nu);
  const cplx S = halfline_smatrix(p, hbc, k, opts);
  const cplx W = -std::exp(-2.0 * pi * I_unit * eta) *
                 (I_unit * hbc.a + k * hbc.b) / (I_unit * hbc.a - k * hbc.b) *
                 (I_unit * hbc.A + k * hbc.B) / (I_unit * hbc.A - k * hbc.B);
  auto clamp = [](double x) { return std::min(1.0, std::max(-1.0, x)); };
  const double ap = std::acos(clamp((std::conj(W) * S).real()));
  const double a0 = std::acos(clamp(W.real()));
  return std::sqrt(nu) / (4.0 * pi) * f.deriv(nu) * (ap * ap - a0 * a0);
}

double gebert_coefficient(double xi_nu, double eta, double theta) {
  return xi_nu * xi_nu + (1.0 - 2.0 * eta + 2.0 * theta) * xi_nu;
}

std::vector<double> halfline_spectrum(const Potential& p, const HalfLineBC& hbc,
                                      double L, double cutoff, const SpectrumOptions& opts) {
  if (L <= 0) throw Error("halfline_spectrum: L > 0 required");
  hbc.validate();
  check_support(p);

  const auto cuts = internal::segment_cuts(p, 0.0, L);
  const double u0 = std::real(std::conj(hbc.b));
  const double du0 = std::real(std::conj(hbc.a));

  auto g = [&](double z) {
    const double lam = z * std::abs(z);
    const internal::ShootState s =
        internal::shoot(p, cuts, lam, u0, du0, opts.ode_reltol);
    return (hbc.A.real() * s.u + hbc.B.real() * s.du);
  };

  // One continuous scan across lambda = 0 exactly as on the whole line.
  const double kmax = std::sqrt(p.sup_norm() + 1.0) + 0.5;
  const double zmax = std::sqrt(std::max(cutoff, 0.0));
  const double step = pi / (2.0 * opts.scan_factor * L); // free spacing pi/L
  const int n = std::max(16, static_cast<int>(std::ceil((zmax + kmax) / step)));

  std::vector<double> out;
  for (double z : internal::scan_roots(g, -kmax, zmax, n, 1e-13)) {
    const double lam = z * std::abs(z);
    if (lam <= cutoff) out.push_back(lam);
  }
  std::sort(out.begin(), out.end());
  return out;
}

EnergyDecomposition halfline_energy_difference(const Potential& p, const HalfLineBC& hbc,
                                               double L, double nu, const WeightFunction& f,
                                               const SpectrumOptions& opts) {
  const double cutoff = nu * 1.000001 + 0.1;
  const auto pert = halfline_spectrum(p, hbc, L, cutoff, opts);
  const auto fr = halfline_spectrum(Potential::zero(), hbc, L, cutoff, opts);
  const double tol = 1e-9 * std::max(1.0, std::abs(nu));
  for (const auto* sp : {&pert, &fr})
    for (double e : *sp)
      if (std::abs(e - nu) < tol)
        throw NuOnEigenvalue("halfline_energy_difference: nu collides with an eigenvalue");
  EnergyDecomposition d;
  for (double e : pert)
    if (e <= nu) {
      ++d.M;
      d.E_L += f.value(e);
    }
  for (double e : fr)
    if (e <= nu) {
      ++d.N;
      d.E_L -= f.value(e);
    }
  d.xi_L = d.N - d.M;
  return d;
}

} // namespace fsekit
