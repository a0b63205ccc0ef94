#pragma once
#include <limits>
#include <string>
#include <vector>

namespace fsekit {

/// Real, bounded potential with finite moments ||X^n V||_1, n = 0..3.
/// Gaussian and Poeschl-Teller presets are truncated at a support radius
/// such that the neglected tail mass is below 1e-12, so every instance is
/// effectively compactly supported.  Immutable after construction.
class Potential {
public:
  enum class Kind { Zero, SquareWell, Gaussian, PoeschlTeller, Table };

  static Potential zero();
  /// V(x) = depth on [center - half_width, center + half_width], else 0.
  static Potential square_well(double depth, double half_width, double center = 0.0);
  /// V(x) = amplitude * exp(-(x-center)^2 / (2 sigma^2)), truncated.
  static Potential gaussian(double amplitude, double sigma, double center = 0.0);
  /// V(x) = -strength * sech((x-center)/width)^2, truncated.
  static Potential poeschl_teller(double strength, double width = 1.0, double center = 0.0);
  /// Piecewise-linear interpolation of (x, v) samples; 0 outside the table range.
  static Potential table(std::vector<double> x, std::vector<double> v);

  double operator()(double x) const;

  Kind kind() const { return kind_; }
  std::string kind_name() const;
  double support_radius() const { return radius_; }
  double sup_norm() const;
  bool even_symmetric() const;
  bool is_zero() const;

  /// integral |x|^n |V(x)| dx, n = 0..3 (adaptive quadrature, abs tol 1e-12).
  double moment_norm(int n) const;
  double l1_norm() const { return moment_norm(0); }
  /// Birman-Solomyak sum over unit cells, sum_j ||V chi_[j,j+1]||_1^q.
  double birman_solomyak(double q = 0.5) const;
  /// ||V_-||_1 with V_-(x) = min(V(x), 0).
  double l1_negative() const;
  /// Signed integral of V.
  double integral() const;

  /// V * chi_[-L, L].
  Potential truncated(double L) const;
  /// s * V.
  Potential scaled(double s) const;
  /// x -> V(-x).
  Potential reflected() const;

  /// Discontinuity/kink locations strictly inside (-R, R), sorted.  Grids for
  /// quadrature and marching align their nodes to these.
  std::vector<double> breakpoints() const;

private:
  Potential() = default;
  void finish();

  Kind kind_ = Kind::Zero;
  double depth_ = 0.0, width_ = 1.0, center_ = 0.0;
  std::vector<double> tx_, tv_;
  double scale_ = 1.0;
  double trunc_ = std::numeric_limits<double>::infinity();
  double radius_ = 0.0;
  double base_radius_ = 0.0;
};

} // namespace fsekit
