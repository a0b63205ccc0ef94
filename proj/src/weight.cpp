#include "fsekit/weight.hpp"

#include <stdexcept>

namespace fsekit {

WeightFunction WeightFunction::identity() {
  WeightFunction w;
  w.name = "identity";
  w.f = [](cplx z) { return z; };
  w.df = [](cplx) { return cplx{1.0, 0.0}; };
  return w;
}

WeightFunction WeightFunction::power(int n) {
  if (n < 1) throw std::invalid_argument("WeightFunction::power: n >= 1");
  if (n == 1) return identity();
  WeightFunction w;
  w.name = "power:" + std::to_string(n);
  w.f = [n](cplx z) { return std::pow(z, n); };
  w.df = [n](cplx z) { return static_cast<double>(n) * std::pow(z, n - 1); };
  return w;
}

} // namespace fsekit
