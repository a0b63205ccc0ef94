#include "fsekit/ssf.hpp"

#include <algorithm>
#include <cmath>

#include "fsekit/errors.hpp"

namespace fsekit {

namespace {

double wrap_pi(double x) { return x - 2.0 * pi * std::round(x / (2.0 * pi)); }

} // namespace

SpectralShift::SpectralShift(const Potential& p, const SpectralShiftOptions& opts)
    : p_(p), jost_(opts.jost) {
  betas_ = bound_states(p_, jost_).betas;

  const double v1 = p_.moment_norm(0);
  const double lmax = opts.lambda_max > 0.0
                          ? opts.lambda_max
                          : 400.0 * std::max(1.0, v1 * v1);
  const double kmax = std::sqrt(lmax);
  const double kmin = std::min(0.05, kmax * 1e-4);

  if (p_.is_zero()) {
    kgrid_ = {kmax, kmin};
    theta_ = {0.0, 0.0};
    return;
  }

  // Geometric wavenumber grid, descending from the anchor.
  const int n = std::max(32, opts.grid_points);
  kgrid_.resize(n);
  const double ratio = std::pow(kmin / kmax, 1.0 / (n - 1));
  for (int i = 0; i < n; ++i) kgrid_[i] = kmax * std::pow(ratio, i);

  auto arg_t = [&](double k) {
    return -std::arg(one_over_transmission(p_, cplx(k, 0.0), jost_));
  };

  theta_.resize(kgrid_.size());
  theta_[0] = arg_t(kgrid_[0]);
  if (std::abs(theta_[0]) > 0.5 * pi)
    throw BranchAnchorTooLow("SpectralShift: arg t at the anchor is not small");

  for (size_t i = 1; i < kgrid_.size();) {
    const double pa = arg_t(kgrid_[i]);
    const double gap = wrap_pi(pa - theta_[i - 1]);
    if (std::abs(gap) <= 0.5 * pi) {
      theta_[i] = theta_[i - 1] + gap;
      ++i;
      continue;
    }
    if (kgrid_[i - 1] - kgrid_[i] < 1e-9 * kgrid_[i - 1])
      throw BranchAnchorTooLow("SpectralShift: phase step exceeds pi under maximal refinement");
    kgrid_.insert(kgrid_.begin() + i, std::sqrt(kgrid_[i - 1] * kgrid_[i]));
    theta_.insert(theta_.begin() + i, 0.0);
  }
}

double SpectralShift::theta_interp(double k) const {
  if (k >= kgrid_.front()) return theta_.front() * kgrid_.front() / k;
  if (k <= kgrid_.back()) return theta_.back();
  // kgrid_ is descending.
  auto it = std::lower_bound(kgrid_.begin(), kgrid_.end(), k, std::greater<double>());
  const size_t i = static_cast<size_t>(it - kgrid_.begin());
  const double t = (kgrid_[i - 1] - k) / (kgrid_[i - 1] - kgrid_[i]);
  return (1.0 - t) * theta_[i - 1] + t * theta_[i];
}

double SpectralShift::xi(double lambda) const {
  if (lambda == 0.0) throw Error("xi: lambda != 0 required");
  if (lambda < 0.0) {
    int count = 0;
    for (double b : betas_) {
      if (std::abs(lambda + b * b) < 1e-9 * std::max(1.0, b * b))
        throw Error("xi: lambda sits on a bound-state jump");
      if (-b * b <= lambda) ++count;
    }
    return -static_cast<double>(count);
  }
  if (p_.is_zero()) return 0.0;
  const double k = std::sqrt(lambda);
  const double pa = -std::arg(one_over_transmission(p_, cplx(k, 0.0), jost_));
  const double ref = theta_interp(k);
  const double theta = pa + 2.0 * pi * std::round((ref - pa) / (2.0 * pi));
  return -theta / pi;
}

std::vector<std::pair<double, double>> SpectralShift::grid() const {
  std::vector<std::pair<double, double>> g;
  g.reserve(kgrid_.size());
  for (size_t i = kgrid_.size(); i-- > 0;)
    g.emplace_back(kgrid_[i] * kgrid_[i], -theta_[i] / pi);
  return g;
}

double fumi(const SpectralShift& ss, double nu, const WeightFunction& f) {
  if (nu <= 0.0) throw Error("fumi: nu > 0 required");
  // Bound-state steps: integral over (-inf, 0) of f' xi is exactly
  // sum_j f(-beta_j^2) - n f(0).
  double steps = 0.0;
  for (double b : ss.betas()) steps += f.value(-b * b);
  steps -= static_cast<double>(ss.betas().size()) * f.value(0.0);

  if (ss.potential().is_zero()) return steps;

  auto integrand = [&](double lam) { return f.deriv(lam) * ss.xi(lam); };
  // Graded toward 0 for the possible threshold behaviour of xi.
  double cont = 0.0;
  const double a1 = nu / 64.0, a2 = nu / 8.0;
  cont += integrate_abs(integrand, 1e-12 * nu, a1, 1e-9, 9);
  cont += integrate_abs(integrand, a1, a2, 1e-9, 9);
  cont += integrate_abs(integrand, a2, nu, 1e-9, 9);
  return steps + cont;
}

double fumi(const Potential& p, double nu, const WeightFunction& f,
            const SpectralShiftOptions& opts) {
  SpectralShift ss(p, opts);
  return fumi(ss, nu, f);
}

double fumi_contour(const Potential& p, double nu, double b, const WeightFunction& f,
                    const ContourOptions& opts) {
  if (nu <= 0.0) throw Error("fumi_contour: nu > 0 required");
  const auto nodes = logdet_along_contour(p, nu, b, opts);
  cplx acc{0.0, 0.0};
  for (const ContourNode& nd : nodes) acc += f.df(nd.z) * nd.logdet * nd.dzw;
  // The conjugation-symmetric lower half contributes the complex conjugate
  // with reversed orientation, so the full contour integral is 2i Im(acc).
  return acc.imag() / pi;
}

} // namespace fsekit
