#pragma once
#include <functional>
#include <string>

#include "fsekit/numerics.hpp"

namespace fsekit {

/// Holomorphic weight f with derivative, both evaluable on the complex plane.
struct WeightFunction {
  std::string name;
  std::function<cplx(cplx)> f;
  std::function<cplx(cplx)> df;

  double value(double x) const { return f(cplx(x, 0.0)).real(); }
  double deriv(double x) const { return df(cplx(x, 0.0)).real(); }

  /// f(z) = z.
  static WeightFunction identity();
  /// f(z) = z^n, n >= 1.
  static WeightFunction power(int n);
};

} // namespace fsekit
