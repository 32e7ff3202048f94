#include "lvmkit/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lvmkit {

Complex ipow(Complex z, long long n) {
  if (n < 0) return Complex(1.0) / ipow(z, -n);
  Complex r(1.0), b = z;
  while (n > 0) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

double exp_defect(Complex z) {
  const double a = z.real();
  if (!std::isfinite(a) || std::abs(a) > 1.0) return std::numeric_limits<double>::infinity();
  const double b = std::remainder(z.imag(), 2.0 * kPi);
  const double s = std::sin(0.5 * b);
  return std::hypot(std::expm1(a) * std::cos(b) - 2.0 * s * s, std::exp(a) * std::sin(b));
}

double relative_distance(const Point3& a, const Point3& b) {
  double d = 0.0;
  for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d / std::max(1e-300, max_abs(b));
}

} // namespace lvmkit
