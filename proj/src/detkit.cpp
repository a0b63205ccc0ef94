#include "fsekit/detkit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fsekit/errors.hpp"

namespace fsekit {

namespace {

// Green function of the free line, -i/(2w) e^{iw|x-y|} with w the Im >= 0
// square root (or +-sqrt(nu) on the cut, by side).
cplx green_w(const Potential&, cplx z, int side) {
  if (std::abs(z.imag()) < 1e-300 && z.real() > 0.0)
    return cplx(static_cast<double>(side) * std::sqrt(z.real()), 0.0);
  return sqrt_upper(z);
}

} // namespace

DiscretizedKernel nystrom_k_infinity(const Potential& p, cplx z, int side, int n) {
  if (z == cplx{0.0, 0.0}) throw Error("nystrom_k_infinity: z != 0 required");
  if (side != +1 && side != -1) throw Error("nystrom_k_infinity: side must be +-1");
  DiscretizedKernel K;
  K.z = z;
  K.side = side;

  const double R = p.support_radius();
  if (p.is_zero() || R == 0.0) {
    K.matrix = Eigen::MatrixXcd::Zero(0, 0);
    return K;
  }

  // Per-segment uniform trapezoidal grids, segment boundaries on the support
  // edges and interior breakpoints of V.  With the |x - y| kink always
  // sitting on a node, the determinant error is a clean O(N^-2); the
  // resolution-doubling extrapolation in fredholm_det_n removes that term.
  std::vector<double> edges{-R};
  for (double bkp : p.breakpoints()) edges.push_back(bkp);
  edges.push_back(R);
  std::vector<double> vnode; // one-sided potential samples per node
  for (size_t s = 0; s + 1 < edges.size(); ++s) {
    const double len = edges[s + 1] - edges[s];
    const int m = std::max(8, static_cast<int>(std::lround(n * len / (2.0 * R))));
    const double h = len / m;
    for (int i = 0; i <= m; ++i) {
      const double x = (i == m) ? edges[s + 1] : edges[s] + h * i;
      K.nodes.push_back(x);
      K.weights.push_back((i == 0 || i == m) ? 0.5 * h : h);
      const double off = (i == 0) ? 1e-7 * h : (i == m ? -1e-7 * h : 0.0);
      vnode.push_back(p(x + off));
    }
  }

  const size_t m = K.nodes.size();
  std::vector<cplx> left(m), right(m);
  for (size_t i = 0; i < m; ++i) {
    const double v = vnode[i];
    const double sq = std::sqrt(std::abs(v)) * std::sqrt(K.weights[i]);
    left[i] = sq;
    right[i] = sq * (v < 0.0 ? -1.0 : 1.0); // sqrt|V| J sqrt(w)
  }

  const cplx w = green_w(p, z, side);
  const cplx pref = -I_unit / (2.0 * w);
  K.matrix.resize(m, m);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j)
      K.matrix(i, j) = left[i] * pref *
                       std::exp(I_unit * w * std::abs(K.nodes[i] - K.nodes[j])) *
                       right[j];
  return K;
}

cplx fredholm_det_n(const Potential& p, cplx z, int side, int n) {
  const cplx d_half = fredholm_det(nystrom_k_infinity(p, z, side, n / 2));
  const cplx d_full = fredholm_det(nystrom_k_infinity(p, z, side, n));
  return (4.0 * d_full - d_half) / 3.0;
}

cplx fredholm_det(const DiscretizedKernel& kern) {
  const auto n = kern.matrix.rows();
  if (n == 0) return cplx{1.0, 0.0};
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(n, n) - kern.matrix;
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(A).determinant();
}

PairCheck jost_pais_check(const Potential& p, double k, int n, const JostOptions& jopts) {
  if (k <= 0.0) throw Error("jost_pais_check: k > 0 required");
  PairCheck c;
  c.lhs = one_over_transmission(p, cplx(k, 0.0), jopts);
  c.rhs = fredholm_det_n(p, cplx(k * k, 0.0), +1, n);
  c.defect = std::abs(c.lhs - c.rhs);
  return c;
}

Rank2Correction rank2_correction(const BoundaryCondition& bc, cplx z, double L) {
  Rank2Correction r;
  const cplx w = sqrt_upper(z);
  r.d_L = std::exp(2.0 * I_unit * w * L);
  Eigen::Matrix2cd sx;
  sx << 0.0, 1.0, 1.0, 0.0;
  const Eigen::Matrix2cd pencil = r.d_L * Eigen::Matrix2cd::Identity() + u_matrix(bc, z) * sx;
  if (std::abs(pencil.determinant()) < 1e-12 * std::max(1.0, pencil.norm()))
    throw SpectralCollision("rank2_correction: z is numerically a box eigenvalue");
  r.G_L = pencil.inverse();
  return r;
}

Eigen::Matrix2cd tmatrix_jost(const Potential& p, cplx z, const JostOptions& jopts) {
  const cplx k = sqrt_upper(z);
  const ScatteringData s = scattering(p, k, jopts);
  return tmatrix(s);
}

PairCheck factorization_check(const Potential& p, const BoundaryCondition& bc,
                              cplx z, double L, int n, const JostOptions& jopts) {
  const Potential pt = p.truncated(L);
  const Rank2Correction rc = rank2_correction(bc, z, L);
  const cplx w = sqrt_upper(z);

  // det(id - K_L) with K_L = K_inf,L - sqrt|V| D_L sqrt|V| J assembled on the
  // Nystrom grid; evaluated at two resolutions like fredholm_det_n.
  auto lhs_at = [&](int m_nodes) {
    const DiscretizedKernel K = nystrom_k_infinity(pt, z, +1, m_nodes);
    const size_t m = K.nodes.size();
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(m, m) - K.matrix;
    if (m > 0) {
      Eigen::MatrixXcd a(m, 2), bvec(m, 2);
      for (size_t i = 0; i < m; ++i) {
        const double v = pt(K.nodes[i]);
        const double sq = std::sqrt(std::abs(v)) * std::sqrt(K.weights[i]);
        const double J = v < 0.0 ? -1.0 : 1.0;
        a(i, 0) = sq * std::exp(I_unit * w * K.nodes[i]);
        a(i, 1) = sq * std::exp(-I_unit * w * K.nodes[i]);
        bvec(i, 0) = std::exp(-I_unit * w * K.nodes[i]) * sq * J;
        bvec(i, 1) = std::exp(I_unit * w * K.nodes[i]) * sq * J;
      }
      const cplx pref = rc.d_L / (2.0 * I_unit * w);
      for (int j = 0; j < 2; ++j)
        for (int kk = 0; kk < 2; ++kk)
          A += pref * rc.G_L(j, kk) * a.col(j) * bvec.col(kk).transpose();
    }
    return Eigen::PartialPivLU<Eigen::MatrixXcd>(A).determinant();
  };
  const cplx lhs = (4.0 * lhs_at(n) - lhs_at(n / 2)) / 3.0;

  const cplx det_inf = fredholm_det_n(pt, z, +1, n);
  const Eigen::Matrix2cd T_L = tmatrix_jost(pt, z, jopts);
  const Eigen::Matrix2cd factor =
      Eigen::Matrix2cd::Identity() + rc.d_L * T_L * rc.G_L;
  const cplx det_factor = factor.determinant();
  if (std::abs(det_inf) < 1e-12 || std::abs(det_factor) < 1e-12)
    throw SpectralCollision("factorization_check: determinant factor degenerates");

  PairCheck c;
  c.lhs = lhs;
  c.rhs = det_inf * det_factor;
  c.defect = std::abs(c.lhs - c.rhs);
  return c;
}

namespace {

struct RawNode {
  int leg;       // 0: top (t + ib)^2, 1: vertical (sqrt(nu) + is)^2
  double param;  // t or s
  cplx dzw;      // oriented weight; 0 for unwrap-only nodes
};

cplx node_z(const RawNode& nd, double nu, double b) {
  if (nd.leg == 0) {
    const cplx q(nd.param, b);
    return q * q;
  }
  const cplx q(std::sqrt(nu), nd.param);
  return q * q;
}

} // namespace

std::vector<ContourNode> logdet_along_contour(const Potential& p, double nu, double b,
                                              const ContourOptions& opts) {
  if (nu <= 0.0) throw Error("logdet_along_contour: nu > 0 required");
  if (2.0 * b <= p.moment_norm(0))
    throw Error("logdet_along_contour: need 2b > ||V||_1");

  // Quadrature nodes ordered from z = -b^2 to z -> nu + i0.
  std::vector<RawNode> raw;
  const double snu = std::sqrt(nu);
  {
    std::vector<double> xs, ws;
    for (int pnl = 0; pnl < opts.panels_top; ++pnl) {
      const double a0 = snu * pnl / opts.panels_top;
      const double a1 = snu * (pnl + 1) / opts.panels_top;
      gauss_legendre_on(opts.gl_points, a0, a1, xs, ws);
      for (int i = 0; i < opts.gl_points; ++i)
        raw.push_back({0, xs[i], 2.0 * cplx(xs[i], b) * ws[i]});
    }
    // Vertical leg, geometric panels accumulating at s = 0, descending s.
    std::vector<double> sedges{b};
    for (int pnl = 1; pnl < opts.panels_vertical; ++pnl)
      sedges.push_back(b * std::pow(0.5, pnl));
    sedges.push_back(0.0);
    for (size_t pnl = 0; pnl + 1 < sedges.size(); ++pnl) {
      gauss_legendre_on(opts.gl_points, sedges[pnl + 1], sedges[pnl], xs, ws);
      for (int i = opts.gl_points - 1; i >= 0; --i)
        raw.push_back({1, xs[i], -2.0 * I_unit * cplx(snu, xs[i]) * ws[i]});
    }
  }

  if (p.is_zero()) {
    std::vector<ContourNode> out;
    out.reserve(raw.size());
    for (const RawNode& nd : raw)
      out.push_back({node_z(nd, nu, b), nd.dzw, cplx{0.0, 0.0}});
    return out;
  }

  auto eval = [&](const RawNode& nd) {
    return std::log(fredholm_det_n(p, node_z(nd, nu, b), +1, opts.nystrom_n));
  };

  std::vector<cplx> vals(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) vals[i] = eval(raw[i]);

  if (std::abs(vals.front().imag()) > 0.5 * pi)
    throw PhaseUnwrapFailure("logdet_along_contour: ambiguous phase anchor at z = -b^2");

  // Unwrap; insert zero-weight midpoints where the phase moves too fast.
  for (size_t i = 1; i < raw.size();) {
    double gap = vals[i].imag() - vals[i - 1].imag();
    gap -= 2.0 * pi * std::round(gap / (2.0 * pi));
    if (std::abs(gap) <= 0.5 * pi) {
      vals[i] = cplx(vals[i].real(), vals[i - 1].imag() + gap);
      ++i;
      continue;
    }
    if (raw[i].leg != raw[i - 1].leg) {
      // Corner between the legs: walk up the vertical leg a little.
      RawNode mid{1, 0.5 * (b + raw[i].param), cplx{0.0, 0.0}};
      raw.insert(raw.begin() + i, mid);
      vals.insert(vals.begin() + i, eval(mid));
      continue;
    }
    if (std::abs(raw[i].param - raw[i - 1].param) < 1e-12)
      throw PhaseUnwrapFailure("logdet_along_contour: phase jump persists under refinement");
    RawNode mid{raw[i].leg, 0.5 * (raw[i].param + raw[i - 1].param), cplx{0.0, 0.0}};
    raw.insert(raw.begin() + i, mid);
    vals.insert(vals.begin() + i, eval(mid));
  }

  std::vector<ContourNode> out;
  out.reserve(raw.size());
  for (size_t i = 0; i < raw.size(); ++i)
    out.push_back({node_z(raw[i], nu, b), raw[i].dzw, vals[i]});
  return out;
}

} // namespace fsekit
