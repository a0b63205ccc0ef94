#include "fsekit/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace fsekit {

static GaussRule make_gauss_legendre(int n) {
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  // Newton on P_n with the usual Chebyshev-like initial guess.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double p0, p1, dp;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.x[i] = -x;
    rule.x[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  return rule;
}

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
  static std::map<int, GaussRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

void gauss_legendre_on(int n, double a, double b,
                       std::vector<double>& nodes, std::vector<double>& weights) {
  const GaussRule& r = gauss_legendre(n);
  nodes.resize(n);
  weights.resize(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    nodes[i] = mid + half * r.x[i];
    weights[i] = half * r.w[i];
  }
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth) {
  if (a == b) return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 15>::integrate(f, a, b, max_depth, tol);
}

cplx integrate_c(const std::function<cplx(double)>& f, double a, double b,
                 double tol, int max_depth) {
  if (a == b) return cplx{0.0, 0.0};
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 15>::integrate(f, a, b, max_depth, tol);
}

namespace {

template <class T, class F>
T gl_fixed(const F& f, double a, double b, int n) {
  const GaussRule& r = gauss_legendre(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  T acc{};
  for (int i = 0; i < n; ++i) acc += half * r.w[i] * f(mid + half * r.x[i]);
  return acc;
}

template <class T, class F>
T adapt_abs(const F& f, double a, double b, double tol, int depth) {
  const T c10 = gl_fixed<T>(f, a, b, 10);
  const T c21 = gl_fixed<T>(f, a, b, 21);
  if (std::abs(c21 - c10) <= tol || depth <= 0) return c21;
  const double m = 0.5 * (a + b);
  return adapt_abs<T>(f, a, m, 0.5 * tol, depth - 1) +
         adapt_abs<T>(f, m, b, 0.5 * tol, depth - 1);
}

} // namespace

double integrate_abs(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  return adapt_abs<double>(f, a, b, abs_tol, max_depth);
}

cplx integrate_abs_c(const std::function<cplx(double)>& f, double a, double b,
                     double abs_tol, int max_depth) {
  if (a == b) return cplx{0.0, 0.0};
  return adapt_abs<cplx>(f, a, b, abs_tol, max_depth);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need >= 2 matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

double bisect(const std::function<double(double)>& f, double a, double b,
              double xtol, int max_iter) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0))
    throw std::invalid_argument("bisect: no sign change on bracket");
  for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
    double m = 0.5 * (a + b);
    double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

} // namespace fsekit
