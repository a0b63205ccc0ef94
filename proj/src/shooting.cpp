#include "shooting.hpp"

#include <algorithm>
#include <cmath>

#include "fsekit/errors.hpp"
#include "fsekit/numerics.hpp"

namespace fsekit::internal {

double golden_min(const std::function<double(double)>& f, double a, double b, double xtol) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

std::vector<double> scan_roots(const std::function<double(double)>& g,
                               double a, double b, int n, double xtol) {
  std::vector<double> roots;
  std::vector<double> xs(n + 1), gs(n + 1);
  for (int i = 0; i <= n; ++i) {
    xs[i] = a + (b - a) * i / n;
    gs[i] = g(xs[i]);
  }
  auto push_unique = [&](double r) {
    if (roots.empty() || r - roots.back() > xtol * 50) roots.push_back(r);
  };
  for (int i = 0; i < n; ++i) {
    if (gs[i] == 0.0) {
      const bool same_side = i > 0 && i < n && (gs[i - 1] > 0) == (gs[i + 1] > 0);
      push_unique(xs[i]);
      if (same_side) roots.push_back(xs[i]);
      continue;
    }
    if (gs[i + 1] != 0.0 && (gs[i] > 0) != (gs[i + 1] > 0)) {
      push_unique(bisect(g, xs[i], xs[i + 1], xtol));
      continue;
    }
    if (i == 0) continue;
    const bool same_sign = (gs[i - 1] > 0) == (gs[i] > 0) && (gs[i] > 0) == (gs[i + 1] > 0);
    if (!same_sign) continue;
    if (!(std::abs(gs[i]) < std::abs(gs[i - 1]) && std::abs(gs[i]) <= std::abs(gs[i + 1])))
      continue;
    const double local = std::max({std::abs(gs[i - 1]), std::abs(gs[i + 1]), 1e-300});
    if (std::abs(gs[i]) > 0.25 * local) continue;
    const double r = golden_min([&](double x) { return std::abs(g(x)); },
                                xs[i - 1], xs[i + 1], xtol);
    const double gr = g(r);
    if (gr != 0.0 && (gr > 0) != (gs[i - 1] > 0)) {
      // The dip crosses zero: two nearby simple roots.
      roots.push_back(bisect(g, xs[i - 1], r, xtol));
      roots.push_back(bisect(g, r, xs[i + 1], xtol));
    } else if (std::abs(gr) <= 1e-9 * local) {
      roots.push_back(r);
      roots.push_back(r);
    }
  }
  return roots;
}

void free_cs(double lambda, double d, double& c, double& s) {
  const double q = lambda * d * d;
  if (std::abs(q) < 1e-6) {
    c = 1.0 - q / 2.0 * (1.0 - q / 12.0 * (1.0 - q / 30.0));
    s = d * (1.0 - q / 6.0 * (1.0 - q / 20.0 * (1.0 - q / 42.0)));
  } else if (lambda > 0) {
    const double w = std::sqrt(lambda);
    c = std::cos(w * d);
    s = std::sin(w * d) / w;
  } else {
    const double k = std::sqrt(-lambda);
    c = std::cosh(k * d);
    s = std::sinh(k * d) / k;
  }
}

void ShootState::renorm() {
  const double n = std::max(std::abs(u), std::abs(du));
  if (n > 0.0) {
    u /= n;
    du /= n;
    logscale += std::log(n);
  }
}

void free_step(double lambda, double a, double b, ShootState& s) {
  const double d = b - a;
  if (lambda < -1e-12 && std::sqrt(-lambda) * d > 30.0) {
    const double k = std::sqrt(-lambda);
    const double q = std::exp(-2.0 * k * d);
    // cosh = e^{kd}(1+q)/2, sinh = e^{kd}(1-q)/2.
    const double c = 0.5 * (1.0 + q), sh = 0.5 * (1.0 - q);
    const double nu = c * s.u + sh / k * s.du;
    const double ndu = k * sh * s.u + c * s.du;
    s.u = nu;
    s.du = ndu;
    s.logscale += k * d;
  } else {
    double c, ss;
    free_cs(lambda, d, c, ss);
    const double nu = c * s.u + ss * s.du;
    const double ndu = -lambda * ss * s.u + c * s.du;
    s.u = nu;
    s.du = ndu;
  }
  s.renorm();
}

void dopri_step_segment(const Potential& p, double lambda, double a, double b,
                        ShootState& st, double reltol) {
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                      e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                      e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  const double len = b - a;
  const double eps = 1e-12 * len;
  auto q = [&](double x) { return p(std::min(std::max(x, a + eps), b - eps)) - lambda; };
  auto rhs = [&](double x, double u, double du, double& f0, double& f1) {
    f0 = du;
    f1 = q(x) * u;
  };

  double x = a;
  double h = std::min(len, 0.25 / std::sqrt(std::abs(lambda) + p.sup_norm() + 1.0));
  const double hmin = 1e-13 * len;
  int rejects_in_a_row = 0;
  while (x < b - 1e-14 * len) {
    if (x + h > b) h = b - x;
    double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v, k5u, k5v, k6u, k6v, k7u, k7v;
    rhs(x, st.u, st.du, k1u, k1v);
    rhs(x + c2 * h, st.u + h * a21 * k1u, st.du + h * a21 * k1v, k2u, k2v);
    rhs(x + c3 * h, st.u + h * (a31 * k1u + a32 * k2u), st.du + h * (a31 * k1v + a32 * k2v), k3u, k3v);
    rhs(x + c4 * h, st.u + h * (a41 * k1u + a42 * k2u + a43 * k3u),
        st.du + h * (a41 * k1v + a42 * k2v + a43 * k3v), k4u, k4v);
    rhs(x + c5 * h, st.u + h * (a51 * k1u + a52 * k2u + a53 * k3u + a54 * k4u),
        st.du + h * (a51 * k1v + a52 * k2v + a53 * k3v + a54 * k4v), k5u, k5v);
    rhs(x + h, st.u + h * (a61 * k1u + a62 * k2u + a63 * k3u + a64 * k4u + a65 * k5u),
        st.du + h * (a61 * k1v + a62 * k2v + a63 * k3v + a64 * k4v + a65 * k5v), k6u, k6v);
    const double nu = st.u + h * (b1 * k1u + b3 * k3u + b4 * k4u + b5 * k5u + b6 * k6u);
    const double nv = st.du + h * (b1 * k1v + b3 * k3v + b4 * k4v + b5 * k5v + b6 * k6v);
    rhs(x + h, nu, nv, k7u, k7v);
    const double erru = h * (e1 * k1u + e3 * k3u + e4 * k4u + e5 * k5u + e6 * k6u + e7 * k7u);
    const double errv = h * (e1 * k1v + e3 * k3v + e4 * k4v + e5 * k5v + e6 * k6v + e7 * k7v);
    const double scale = std::max({std::abs(st.u), std::abs(st.du), std::abs(nu),
                                   std::abs(nv), 1e-290});
    const double err = std::max(std::abs(erru), std::abs(errv)) / (reltol * scale);
    if (err <= 1.0) {
      x += h;
      st.u = nu;
      st.du = nv;
      rejects_in_a_row = 0;
    } else if (++rejects_in_a_row > 60) {
      throw OdeStepFailure("shooting: adaptive RK step kept failing");
    }
    const double fac = std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -0.2)));
    h *= fac;
    if (h < hmin) throw OdeStepFailure("shooting: step size underflow");
  }
  st.renorm();
}

std::vector<double> segment_cuts(const Potential& p, double a, double b) {
  std::vector<double> c{a, b};
  const double R = p.support_radius();
  if (R > 0.0) {
    if (-R > a && -R < b) c.push_back(-R);
    if (R > a && R < b) c.push_back(R);
    for (double bkp : p.breakpoints())
      if (bkp > a && bkp < b) c.push_back(bkp);
  }
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end(),
                      [](double x, double y) { return std::abs(x - y) < 1e-14; }),
          c.end());
  return c;
}

ShootState shoot(const Potential& p, const std::vector<double>& cuts, double lambda,
                 double u0, double du0, double reltol) {
  ShootState s{u0, du0, 0.0};
  const double R = p.support_radius();
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    const double mid = 0.5 * (a + b);
    const bool in_support = !p.is_zero() && std::abs(mid) <= R && p.sup_norm() > 0.0;
    if (in_support)
      dopri_step_segment(p, lambda, a, b, s, reltol);
    else
      free_step(lambda, a, b, s);
  }
  return s;
}

} // namespace fsekit::internal
