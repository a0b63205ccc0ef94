#include "fsekit/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fsekit/numerics.hpp"

namespace fsekit {

namespace {
constexpr double kTailMass = 1e-12;
}

Potential Potential::zero() {
  Potential p;
  p.kind_ = Kind::Zero;
  p.finish();
  return p;
}

Potential Potential::square_well(double depth, double half_width, double center) {
  if (half_width <= 0) throw std::invalid_argument("square_well: half_width > 0 required");
  Potential p;
  p.kind_ = Kind::SquareWell;
  p.depth_ = depth;
  p.width_ = half_width;
  p.center_ = center;
  p.base_radius_ = std::abs(center) + half_width;
  p.finish();
  return p;
}

Potential Potential::gaussian(double amplitude, double sigma, double center) {
  if (sigma <= 0) throw std::invalid_argument("gaussian: sigma > 0 required");
  Potential p;
  p.kind_ = Kind::Gaussian;
  p.depth_ = amplitude;
  p.width_ = sigma;
  p.center_ = center;
  // One-sided tail mass |A| sigma sqrt(pi/2) erfc(r/sqrt(2)) < kTailMass.
  double r = 2.0;
  const double pref = std::abs(amplitude) * sigma * std::sqrt(pi / 2.0);
  while (pref * std::erfc(r / std::sqrt(2.0)) >= kTailMass && r < 60.0) r += 0.25;
  p.base_radius_ = std::abs(center) + sigma * r;
  p.finish();
  return p;
}

Potential Potential::poeschl_teller(double strength, double width, double center) {
  if (width <= 0) throw std::invalid_argument("poeschl_teller: width > 0 required");
  Potential p;
  p.kind_ = Kind::PoeschlTeller;
  p.depth_ = strength;
  p.width_ = width;
  p.center_ = center;
  // Tail integral ~ 2 |s| w exp(-2R/w) < kTailMass.
  const double s = std::max(std::abs(strength), 1e-300);
  p.base_radius_ = std::abs(center) + 0.5 * width * std::log(2.0 * s * width / kTailMass) + width;
  p.finish();
  return p;
}

Potential Potential::table(std::vector<double> x, std::vector<double> v) {
  if (x.size() != v.size() || x.size() < 2)
    throw std::invalid_argument("table: need >= 2 matching samples");
  if (!std::is_sorted(x.begin(), x.end()))
    throw std::invalid_argument("table: abscissae must be ascending");
  Potential p;
  p.kind_ = Kind::Table;
  p.tx_ = std::move(x);
  p.tv_ = std::move(v);
  p.base_radius_ = std::max(std::abs(p.tx_.front()), std::abs(p.tx_.back()));
  p.finish();
  return p;
}

void Potential::finish() { radius_ = std::min(base_radius_, trunc_); }

double Potential::operator()(double x) const {
  if (std::abs(x) > trunc_) return 0.0;
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::SquareWell:
      return (std::abs(x - center_) <= width_) ? scale_ * depth_ : 0.0;
    case Kind::Gaussian: {
      if (std::abs(x) > radius_) return 0.0;
      const double u = (x - center_) / width_;
      return scale_ * depth_ * std::exp(-0.5 * u * u);
    }
    case Kind::PoeschlTeller: {
      if (std::abs(x) > radius_) return 0.0;
      const double c = std::cosh((x - center_) / width_);
      return -scale_ * depth_ / (c * c);
    }
    case Kind::Table: {
      if (x < tx_.front() || x > tx_.back()) return 0.0;
      auto it = std::upper_bound(tx_.begin(), tx_.end(), x);
      if (it == tx_.begin()) return scale_ * tv_.front();
      if (it == tx_.end()) return scale_ * tv_.back();
      size_t i = static_cast<size_t>(it - tx_.begin());
      const double t = (x - tx_[i - 1]) / (tx_[i] - tx_[i - 1]);
      return scale_ * ((1.0 - t) * tv_[i - 1] + t * tv_[i]);
    }
  }
  return 0.0;
}

std::string Potential::kind_name() const {
  switch (kind_) {
    case Kind::Zero: return "zero";
    case Kind::SquareWell: return "square-well";
    case Kind::Gaussian: return "gaussian";
    case Kind::PoeschlTeller: return "poeschl-teller";
    case Kind::Table: return "table";
  }
  return "?";
}

double Potential::sup_norm() const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::SquareWell:
    case Kind::Gaussian:
    case Kind::PoeschlTeller: return std::abs(scale_ * depth_);
    case Kind::Table: {
      double m = 0.0;
      for (double v : tv_) m = std::max(m, std::abs(v));
      return std::abs(scale_) * m;
    }
  }
  return 0.0;
}

bool Potential::even_symmetric() const {
  switch (kind_) {
    case Kind::Zero: return true;
    case Kind::SquareWell:
    case Kind::Gaussian:
    case Kind::PoeschlTeller: return center_ == 0.0;
    case Kind::Table: return false;
  }
  return false;
}

bool Potential::is_zero() const { return kind_ == Kind::Zero || scale_ == 0.0; }

double Potential::moment_norm(int n) const {
  if (n < 0 || n > 3) throw std::invalid_argument("moment_norm: n in 0..3");
  if (is_zero() || radius_ == 0.0) return 0.0;
  const double R = radius_;
  auto f = [&](double x) { return std::pow(std::abs(x), n) * std::abs((*this)(x)); };
  // Split at 0 so the |x|^n kink sits on a panel edge.
  return integrate(f, -R, 0.0, 1e-12) + integrate(f, 0.0, R, 1e-12);
}

double Potential::birman_solomyak(double q) const {
  if (q <= 0) throw std::invalid_argument("birman_solomyak: q > 0 required");
  if (is_zero() || radius_ == 0.0) return 0.0;
  const long jlo = static_cast<long>(std::floor(-radius_));
  const long jhi = static_cast<long>(std::ceil(radius_));
  double sum = 0.0;
  auto f = [&](double x) { return std::abs((*this)(x)); };
  for (long j = jlo; j < jhi; ++j) {
    double cell = integrate(f, static_cast<double>(j), static_cast<double>(j + 1), 1e-12);
    if (cell > 0.0) sum += std::pow(cell, q);
  }
  return sum;
}

double Potential::l1_negative() const {
  if (is_zero() || radius_ == 0.0) return 0.0;
  auto f = [&](double x) { return std::max(-(*this)(x), 0.0); };
  return integrate(f, -radius_, 0.0, 1e-12) + integrate(f, 0.0, radius_, 1e-12);
}

double Potential::integral() const {
  if (is_zero() || radius_ == 0.0) return 0.0;
  auto f = [&](double x) { return (*this)(x); };
  return integrate(f, -radius_, 0.0, 1e-12) + integrate(f, 0.0, radius_, 1e-12);
}

Potential Potential::truncated(double L) const {
  if (L <= 0) throw std::invalid_argument("truncated: L > 0 required");
  Potential p = *this;
  p.trunc_ = std::min(trunc_, L);
  p.finish();
  return p;
}

Potential Potential::scaled(double s) const {
  Potential p = *this;
  p.scale_ *= s;
  return p;
}

std::vector<double> Potential::breakpoints() const {
  std::vector<double> b;
  if (kind_ == Kind::SquareWell) {
    b = {center_ - width_, center_ + width_};
  } else if (kind_ == Kind::Table) {
    b = tx_;
  }
  std::vector<double> inside;
  for (double x : b)
    if (x > -radius_ + 1e-14 && x < radius_ - 1e-14) inside.push_back(x);
  std::sort(inside.begin(), inside.end());
  return inside;
}

Potential Potential::reflected() const {
  Potential p = *this;
  if (kind_ == Kind::Table) {
    std::reverse(p.tx_.begin(), p.tx_.end());
    for (double& x : p.tx_) x = -x;
    std::reverse(p.tv_.begin(), p.tv_.end());
  } else {
    p.center_ = -center_;
  }
  return p;
}

} // namespace fsekit
