#include "fsekit/jost.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "fsekit/errors.hpp"

namespace fsekit {

namespace {

double default_step(const Potential& p, cplx k) {
  const double vmax = std::max(p.sup_norm(), 1.0);
  const double kmag = std::max(std::abs(k), 1.0);
  double h = std::min({0.01 / vmax, 0.05 / kmag, 0.01});
  // The Richardson-extrapolated march error grows like h^4 / k^2 at small k.
  const double klow = std::abs(k);
  if (klow > 0.0 && klow < 1.0) h *= std::pow(std::max(klow, 0.01), 0.75);
  return h;
}

// Piecewise-uniform grid whose segment boundaries sit on the support edges
// and on every interior jump/kink of V.  Each segment carries an even number
// of intervals so Simpson panels never straddle a boundary.  The potential is
// sampled one-sidedly per cell (va: limit from above a node, vb: from below),
// which keeps the trapezoidal march second order across jumps.
struct MarchGrid {
  std::vector<double> x;
  std::vector<double> va, vb;
  std::vector<size_t> seg; // segment start indices, plus n-1 as sentinel
};

MarchGrid make_grid(const Potential& p, double margin, double step) {
  const double R = p.support_radius();
  std::vector<double> bounds;
  if (R == 0.0) {
    const double M = std::max(margin, 0.5);
    bounds = {-M, M};
  } else {
    bounds.push_back(-R - std::max(margin, 0.0));
    if (margin > 0.0) bounds.push_back(-R);
    for (double b : p.breakpoints()) bounds.push_back(b);
    if (margin > 0.0) bounds.push_back(R);
    bounds.push_back(R + std::max(margin, 0.0));
  }

  MarchGrid g;
  g.x.push_back(bounds.front());
  g.seg.push_back(0);
  for (size_t s = 0; s + 1 < bounds.size(); ++s) {
    const double len = bounds[s + 1] - bounds[s];
    int n = std::max(2, static_cast<int>(std::ceil(len / step)));
    n += n % 2;
    for (int i = 1; i <= n; ++i) g.x.push_back(bounds[s] + len * i / n);
    g.x.back() = bounds[s + 1];
    g.seg.push_back(g.x.size() - 1);
  }

  const size_t n = g.x.size();
  g.va.resize(n);
  g.vb.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const double v = p(g.x[i]);
    g.va[i] = v;
    g.vb[i] = v;
  }
  // Jumps of V sit exactly on segment boundaries; only there sample the
  // one-sided limits.
  for (size_t s : g.seg) {
    const double hl = (s > 0) ? g.x[s] - g.x[s - 1] : g.x[1] - g.x[0];
    const double hr = (s + 1 < n) ? g.x[s + 1] - g.x[s] : hl;
    g.va[s] = p(g.x[s] + 1e-6 * hr);
    g.vb[s] = p(g.x[s] - 1e-6 * hl);
  }
  return g;
}

MarchGrid refine(const MarchGrid& g, const Potential& p) {
  MarchGrid f;
  const size_t n = g.x.size();
  f.x.resize(2 * n - 1);
  f.va.resize(2 * n - 1);
  f.vb.resize(2 * n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    f.x[2 * i] = g.x[i];
    f.va[2 * i] = g.va[i];
    f.vb[2 * i] = g.vb[i];
    const double mid = 0.5 * (g.x[i] + g.x[i + 1]);
    f.x[2 * i + 1] = mid;
    const double v = p(mid);
    f.va[2 * i + 1] = v;
    f.vb[2 * i + 1] = v;
  }
  f.x.back() = g.x.back();
  f.va.back() = g.va.back();
  f.vb.back() = g.vb.back();
  f.seg.reserve(g.seg.size());
  for (size_t s : g.seg) f.seg.push_back(2 * s);
  return f;
}

// D_k(u) = (exp(2iku) - 1) / (2ik), evaluated without cancellation for
// small |k u| and continuously through k = 0 where D_0(u) = u.
cplx kernel_D(cplx k, double u) {
  const cplx w = 2.0 * I_unit * k * u;
  if (std::abs(w) < 1e-3)
    return u * (1.0 + w * (0.5 + w * (1.0 / 6.0 + w * (1.0 / 24.0 + w / 120.0))));
  return (std::exp(w) - 1.0) / (2.0 * I_unit * k);
}

// Backward trapezoidal march for m_+.  Uses the shift identity
// D_k(u + h) = e^{2ikh} D_k(u) + D_k(h) to accumulate T(x) = m(x) - 1
// directly, which stays cancellation-free uniformly in k (k = 0 included).
// D_k vanishes on the diagonal, so the implicit self-terms drop out and
// every step is explicit.
void march_plus(const MarchGrid& g, cplx k, std::vector<cplx>& m, std::vector<cplx>& dm) {
  const size_t n = g.x.size();
  m.assign(n, cplx{1.0, 0.0});
  dm.assign(n, cplx{0.0, 0.0});
  const cplx ik2 = 2.0 * I_unit * k;
  cplx T{0.0, 0.0}, Q{0.0, 0.0};
  for (size_t ii = n - 1; ii-- > 0;) {
    const size_t i = ii;
    const double h = g.x[i + 1] - g.x[i];
    const cplx E = std::exp(ik2 * h);
    const cplx Dh = kernel_D(k, h);
    const cplx up = g.vb[i + 1] * m[i + 1];
    m[i] = 1.0 + E * T + Dh * (Q + 0.5 * h * up);
    T = m[i] - 1.0;
    Q += 0.5 * h * (up + g.va[i] * m[i]);
    dm[i] = -(ik2 * T + Q);
  }
}

// Composite Simpson of a node-sampled integrand with one-sided values at the
// panel edges; panels never cross segment boundaries.
cplx simpson(const MarchGrid& g, const std::vector<cplx>& f_above,
             const std::vector<cplx>& f_below, size_t from_seg = 0) {
  cplx acc{0.0, 0.0};
  for (size_t s = from_seg; s + 1 < g.seg.size(); ++s) {
    for (size_t j = g.seg[s]; j + 2 <= g.seg[s + 1]; j += 2) {
      const double h = g.x[j + 1] - g.x[j];
      acc += h / 3.0 * (f_above[j] + 4.0 * f_above[j + 1] + f_below[j + 2]);
    }
  }
  return acc;
}

double ls_residual(const MarchGrid& g, const std::vector<cplx>& m, cplx k) {
  const size_t n = g.x.size();
  std::vector<cplx> fa(n), fb(n);
  double worst = 0.0;
  // Sample the defect at a subset of panel-start nodes in each segment.
  for (size_t s = 0; s + 1 < g.seg.size(); ++s) {
    const size_t lo = g.seg[s], hi = g.seg[s + 1];
    const size_t stride = std::max<size_t>(2, 2 * ((hi - lo) / 16));
    for (size_t ii = lo; ii < hi; ii += stride) {
      for (size_t j = ii; j < n; ++j) {
        fa[j] = kernel_D(k, g.x[j] - g.x[ii]) * g.va[j] * m[j];
        fb[j] = kernel_D(k, g.x[j] - g.x[ii]) * g.vb[j] * m[j];
      }
      // Tail within this segment from ii, then full segments above.
      cplx acc{0.0, 0.0};
      for (size_t j = ii; j + 2 <= hi; j += 2) {
        const double h = g.x[j + 1] - g.x[j];
        acc += h / 3.0 * (fa[j] + 4.0 * fa[j + 1] + fb[j + 2]);
      }
      acc += simpson(g, fa, fb, s + 1);
      worst = std::max(worst, std::abs(m[ii] - 1.0 - acc));
    }
  }
  return worst;
}

struct MarchResult {
  MarchGrid g;
  std::vector<cplx> m, dm;
  double residual = 0.0;
};

MarchResult solve_plus_internal(const Potential& p, cplx k, const JostOptions& opts) {
  const double step = opts.step > 0 ? opts.step : default_step(p, k);
  MarchResult r;
  r.g = make_grid(p, opts.margin, step);

  if (p.is_zero() || p.support_radius() == 0.0) {
    r.m.assign(r.g.x.size(), cplx{1.0, 0.0});
    r.dm.assign(r.g.x.size(), cplx{0.0, 0.0});
    return r;
  }

  for (int attempt = 0; attempt < 2; ++attempt) {
    march_plus(r.g, k, r.m, r.dm);
    if (opts.richardson) {
      MarchGrid fg = refine(r.g, p);
      std::vector<cplx> fm, fdm;
      march_plus(fg, k, fm, fdm);
      for (size_t i = 0; i < r.g.x.size(); ++i) {
        r.m[i] = (4.0 * fm[2 * i] - r.m[i]) / 3.0;
        r.dm[i] = (4.0 * fdm[2 * i] - r.dm[i]) / 3.0;
      }
    }
    r.residual = ls_residual(r.g, r.m, k);
    double mscale = 1.0;
    for (const cplx& v : r.m) mscale = std::max(mscale, std::abs(v));
    if (r.residual <= opts.residual_tol * mscale) return r;
    r.g = refine(r.g, p);
  }
  std::ostringstream msg;
  msg << "solve_jost: residual " << r.residual << " above tolerance "
      << opts.residual_tol << " after refinement (k=" << k << ")";
  throw NoConvergence(msg.str());
}

// m_-(k; x; V) = m_+(k; -x; V(-.)).
MarchResult solve_minus_internal(const Potential& p, cplx k, const JostOptions& opts) {
  MarchResult r = solve_plus_internal(p.reflected(), k, opts);
  MarchResult out;
  const size_t n = r.g.x.size();
  out.residual = r.residual;
  out.g.x.resize(n);
  out.g.va.resize(n);
  out.g.vb.resize(n);
  out.m.resize(n);
  out.dm.resize(n);
  for (size_t i = 0; i < n; ++i) {
    out.g.x[i] = -r.g.x[n - 1 - i];
    out.g.va[i] = r.g.vb[n - 1 - i];
    out.g.vb[i] = r.g.va[n - 1 - i];
    out.m[i] = r.m[n - 1 - i];
    out.dm[i] = -r.dm[n - 1 - i];
  }
  out.g.seg.reserve(r.g.seg.size());
  for (auto it = r.g.seg.rbegin(); it != r.g.seg.rend(); ++it)
    out.g.seg.push_back(n - 1 - *it);
  return out;
}

MarchResult solve_internal(const Potential& p, cplx k, int side, const JostOptions& opts) {
  if (k.imag() < -1e-14) throw Error("solve_jost: Im k >= 0 required");
  if (side != +1 && side != -1) throw Error("solve_jost: side must be +1 or -1");
  if (k == cplx{0.0, 0.0} && !(p.moment_norm(1) < 1e300))
    throw ZeroEnergyUnsupported("solve_jost: k = 0 needs a finite ||XV||_1");
  return side == +1 ? solve_plus_internal(p, k, opts)
                    : solve_minus_internal(p, k, opts);
}

} // namespace

cplx JostSolution::m_at(double x) const {
  if (x <= grid.front()) x = grid.front();
  if (x >= grid.back()) x = grid.back();
  auto it = std::upper_bound(grid.begin(), grid.end(), x);
  if (it == grid.begin()) return m.front();
  if (it == grid.end()) return m.back();
  const size_t i = static_cast<size_t>(it - grid.begin());
  const double t = (x - grid[i - 1]) / (grid[i] - grid[i - 1]);
  return (1.0 - t) * m[i - 1] + t * m[i];
}

cplx JostSolution::psi_at(double x) const {
  return std::exp(static_cast<double>(side) * I_unit * k * x) * m_at(x);
}

cplx JostSolution::dpsi_at(double x) const {
  auto it = std::upper_bound(grid.begin(), grid.end(), x);
  size_t i = (it == grid.begin()) ? 0 : static_cast<size_t>(it - grid.begin()) - 1;
  i = std::min(i, grid.size() - 1);
  const cplx e = std::exp(static_cast<double>(side) * I_unit * k * x);
  return e * (static_cast<double>(side) * I_unit * k * m_at(x) + dm[i]);
}

JostSolution solve_jost(const Potential& p, cplx k, int side, const JostOptions& opts) {
  MarchResult r = solve_internal(p, k, side, opts);
  JostSolution sol;
  sol.k = k;
  sol.side = side;
  sol.grid = std::move(r.g.x);
  sol.m = std::move(r.m);
  sol.dm = std::move(r.dm);
  sol.residual = r.residual;
  return sol;
}

ScatteringData scattering(const Potential& p, cplx k, const JostOptions& opts) {
  if (k == cplx{0.0, 0.0}) throw Error("scattering: k != 0 required");
  ScatteringData s;
  s.k = k;
  if (p.is_zero()) {
    s.t = 1.0;
    s.r1 = s.r2 = 0.0;
    s.unitarity_defect = 0.0;
    return s;
  }

  const MarchResult mp = solve_internal(p, k, +1, opts);
  const MarchResult mm = solve_internal(p, k, -1, opts);
  const cplx ik2 = 2.0 * I_unit * k;
  const size_t np = mp.g.x.size(), nm = mm.g.x.size();

  std::vector<cplx> fa(np), fb(np);
  for (size_t i = 0; i < np; ++i) {
    fa[i] = mp.g.va[i] * mp.m[i];
    fb[i] = mp.g.vb[i] * mp.m[i];
  }
  const cplx A0 = simpson(mp.g, fa, fb);
  for (size_t i = 0; i < np; ++i) {
    const cplx e = std::exp(ik2 * mp.g.x[i]);
    fa[i] = e * mp.g.va[i] * mp.m[i];
    fb[i] = e * mp.g.vb[i] * mp.m[i];
  }
  const cplx A2 = simpson(mp.g, fa, fb);

  std::vector<cplx> ga(nm), gb(nm);
  for (size_t i = 0; i < nm; ++i) {
    const cplx e = std::exp(-ik2 * mm.g.x[i]);
    ga[i] = e * mm.g.va[i] * mm.m[i];
    gb[i] = e * mm.g.vb[i] * mm.m[i];
  }
  const cplx A1 = simpson(mm.g, ga, gb);

  const cplx inv_t = 1.0 - A0 / ik2;
  s.t = 1.0 / inv_t;
  s.r1 = s.t * A1 / ik2;
  s.r2 = s.t * A2 / ik2;

  if (std::abs(k.imag()) < 1e-14) {
    const Eigen::Matrix2cd S = smatrix(s);
    s.unitarity_defect = (S.adjoint() * S - Eigen::Matrix2cd::Identity())
                             .cwiseAbs().maxCoeff();
  } else {
    s.unitarity_defect = std::numeric_limits<double>::quiet_NaN();
  }
  return s;
}

Eigen::Matrix2cd smatrix(const ScatteringData& s) {
  Eigen::Matrix2cd S;
  S << s.t, s.r1, s.r2, s.t;
  return S;
}

Eigen::Matrix2cd tmatrix(const ScatteringData& s) {
  return smatrix(s) - Eigen::Matrix2cd::Identity();
}

cplx transmission_wronskian(const Potential& p, cplx k, const JostOptions& opts) {
  if (p.is_zero()) return cplx{1.0, 0.0};
  const MarchResult mp = solve_internal(p, k, +1, opts);
  const MarchResult mm = solve_internal(p, k, -1, opts);
  // Evaluate at the grid node closest to the origin (any x works).
  const auto it = std::lower_bound(mp.g.x.begin(), mp.g.x.end(), 0.0);
  size_t i = std::min<size_t>(it - mp.g.x.begin(), mp.g.x.size() - 1);
  const double x0 = mp.g.x[i];
  const auto jt = std::lower_bound(mm.g.x.begin(), mm.g.x.end(), x0 - 1e-13);
  const size_t j = std::min<size_t>(jt - mm.g.x.begin(), mm.g.x.size() - 1);
  const cplx W = mm.m[j] * mp.dm[i] - mm.dm[j] * mp.m[i] +
                 2.0 * I_unit * k * mm.m[j] * mp.m[i];
  return 2.0 * I_unit * k / W;
}

namespace {

cplx one_over_t(const Potential& p, cplx k, const JostOptions& opts) {
  const MarchResult mp = solve_internal(p, k, +1, opts);
  const size_t n = mp.g.x.size();
  std::vector<cplx> fa(n), fb(n);
  for (size_t i = 0; i < n; ++i) {
    fa[i] = mp.g.va[i] * mp.m[i];
    fb[i] = mp.g.vb[i] * mp.m[i];
  }
  return 1.0 - simpson(mp.g, fa, fb) / (2.0 * I_unit * k);
}

} // namespace

cplx one_over_transmission(const Potential& p, cplx k, const JostOptions& opts) {
  if (k == cplx{0.0, 0.0}) throw Error("one_over_transmission: k != 0 required");
  if (p.is_zero()) return cplx{1.0, 0.0};
  return one_over_t(p, k, opts);
}

BoundStateList bound_states(const Potential& p, const JostOptions& opts) {
  BoundStateList out;
  const double beta_max = 0.5 * p.l1_negative();
  if (beta_max <= 0.0) return out;

  auto g = [&](double beta) {
    const cplx v = one_over_t(p, cplx(0.0, beta), opts);
    if (std::abs(v.imag()) > 1e-10)
      throw NoConvergence("bound_states: 1/t(i beta) not real to 1e-10");
    return v.real();
  };

  const double blo = 1e-7 * std::max(1.0, beta_max);
  std::vector<double> prev;
  bool stable = false;
  for (int n = 64; n <= 2048; n *= 2) {
    std::vector<double> roots;
    double b0 = blo, g0 = g(b0);
    for (int i = 1; i <= n; ++i) {
      const double b1 = blo + (beta_max * 1.0000001 - blo) * i / n;
      const double g1 = g(b1);
      if (g0 == 0.0) roots.push_back(b0);
      else if ((g0 > 0) != (g1 > 0))
        roots.push_back(bisect(g, b0, b1, 1e-12 * std::max(1.0, beta_max)));
      b0 = b1;
      g0 = g1;
    }
    stable = prev.size() == roots.size() &&
        std::equal(prev.begin(), prev.end(), roots.begin(),
                   [&](double a, double b) { return std::abs(a - b) < 1e-8 * std::max(1.0, beta_max); });
    prev = std::move(roots);
    if (stable) break;
  }
  if (!stable)
    throw RootIsolationFailure("bound_states: root count did not stabilize under grid refinement");
  out.betas = std::move(prev);
  std::sort(out.betas.begin(), out.betas.end());
  return out;
}

FdtResult fdt_transmission(const Potential& p, cplx k, double tol, const JostOptions& opts) {
  if (k.imag() <= 0.0) throw Error("fdt_transmission: Im k > 0 required");
  FdtResult res;
  if (p.is_zero()) {
    res.t = 1.0;
    res.tail_estimate = 0.0;
    return res;
  }

  const BoundStateList bs = bound_states(p, opts);

  std::map<double, double> cache;
  auto lnabs_t = [&](double u) {
    auto it = cache.find(u);
    if (it != cache.end()) return it->second;
    const double v = -std::log(std::abs(one_over_t(p, cplx(u, 0.0), opts)));
    cache.emplace(u, v);
    return v;
  };

  // ln|t| is even in u, so int_R ln|t(u)|/(u-k) du folds onto [0, inf) with
  // kernel 2k/(u^2 - k^2).
  auto integrand = [&](double u) { return lnabs_t(u) * 2.0 * k / (u * u - k * k); };

  double U = std::max({10.0, 4.0 * std::abs(k), 4.0 * std::sqrt(p.sup_norm() + 1.0)});
  double tail = 0.0;
  for (;;) {
    const double lt = std::abs(lnabs_t(U));
    const double C = U * U * lt;
    tail = 2.0 * C * std::abs(k) / (3.0 * U * U * U) /
           std::max(0.25, 1.0 - std::norm(k) / (U * U));
    if (tail < tol * pi || U > 8192.0) break;
    U *= 2.0;
  }
  if (tail >= tol * pi) {
    std::ostringstream msg;
    msg << "fdt_transmission: estimated tail error " << tail
        << " above tolerance at cutoff U=" << U;
    throw TruncationWarning(msg.str());
  }

  const double u0 = k.real();
  cplx I{0.0, 0.0};
  if (std::abs(k.imag()) < 0.1 && u0 > 0.02 * U) {
    // Near-real k: pair nodes symmetrically around u = Re k so the nearly
    // singular odd part cancels.
    const double w = std::min({u0, U - u0, 1.0});
    std::vector<double> xs, ws;
    gauss_legendre_on(64, 0.0, w, xs, ws);
    for (size_t i = 0; i < xs.size(); ++i)
      I += ws[i] * (integrand(u0 + xs[i]) + integrand(u0 - xs[i]));
    if (u0 - w > 0.0) I += integrate_abs_c(integrand, 0.0, u0 - w, tol * 0.1, 8);
    I += integrate_abs_c(integrand, u0 + w, U, tol * 0.1, 8);
  } else {
    I = integrate_abs_c(integrand, 0.0, U, tol * 0.1, 8);
  }

  cplx blaschke{1.0, 0.0};
  for (double b : bs.betas) blaschke *= (k + I_unit * b) / (k - I_unit * b);

  res.t = std::exp(I / (pi * I_unit)) * blaschke;
  res.tail_estimate = tail;
  return res;
}

} // namespace fsekit
