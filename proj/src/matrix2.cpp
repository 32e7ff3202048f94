#include "lvmkit/matrix2.hpp"

#include <cmath>

namespace lvmkit {

Mat2 twist_diag(Complex alpha, int p) {
  Mat2 L = Mat2::Identity();
  L(1, 1) = ipow(alpha, p);
  return L;
}

Mat2 tau(Complex z, int p, const Mat2& M) {
  const Complex zp = ipow(z, p);
  Mat2 r = M;
  r(0, 1) = M(0, 1) / zp;
  r(1, 0) = M(1, 0) * zp;
  return r;
}

std::array<Complex, 2> quadratic_roots(Complex a, Complex b, Complex c) {
  const Complex disc = std::sqrt(b * b - 4.0 * a * c);
  // choose the sign that avoids cancellation
  const Complex s = (std::real(std::conj(b) * disc) >= 0.0) ? disc : -disc;
  const Complex qv = -0.5 * (b + s);
  if (qv == Complex(0)) return {Complex(0), Complex(0)};
  return {qv / a, c / qv};
}

bool lex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

namespace {

// sinh(d)/d
Complex sinhc(Complex d) {
  if (std::abs(d) < 1e-4) {
    const Complex d2 = d * d;
    return 1.0 + d2 / 6.0 + d2 * d2 / 120.0;
  }
  return std::sinh(d) / d;
}

// atanh(z)/z
Complex atanhc(Complex z) {
  if (std::abs(z) < 1e-4) {
    const Complex z2 = z * z;
    return 1.0 + z2 / 3.0 + z2 * z2 / 5.0;
  }
  return std::atanh(z) / z;
}

} // namespace

Mat2 expm2(const Mat2& X) {
  // f(X) = f[l1,l2] (X - l2) + f(l2), written symmetrically around s = tr/2.
  const Complex s = 0.5 * X.trace();
  const Mat2 Y = X - s * Mat2::Identity();
  const Complex d = std::sqrt(-Y.determinant()); // eigenvalues of Y are +-d
  const Complex es = std::exp(s);
  return es * (std::cosh(d) * Mat2::Identity() + sinhc(d) * Y);
}

Mat2 logm2(const Mat2& M) {
  const Complex s = 0.5 * M.trace();
  const Mat2 Y = M - s * Mat2::Identity();
  const Complex d = std::sqrt(-Y.determinant()); // eigenvalues s +- d
  const Complex l1 = s + d, l2 = s - d;
  if (l1 == Complex(0) || l2 == Complex(0)) throw BranchDomain("logm2: singular matrix");
  auto on_cut = [](Complex z) { return z.imag() == 0.0 && z.real() <= 0.0; };
  if (on_cut(l1) || on_cut(l2)) throw BranchDomain("logm2: eigenvalue on the branch cut");
  // log M = (log l1 + log l2)/2 I + [(log l1 - log l2)/(l1 - l2)] Y
  const Complex mean = 0.5 * (std::log(l1) + std::log(l2));
  Complex dd;
  const Complex z = d / s; // (l1 - l2)/(l1 + l2)
  if (s != Complex(0) && std::abs(z) < 0.5) {
    // log(l1/l2) = 2 atanh(z) when no branch wrap occurs
    const Complex diff = std::log(l1) - std::log(l2);
    const Complex viaat = 2.0 * std::atanh(z);
    if (std::abs(diff - viaat) < 1.0)
      dd = atanhc(z) / s;
    else
      dd = diff / (2.0 * d);
  } else {
    dd = (std::log(l1) - std::log(l2)) / (2.0 * d);
  }
  return mean * Mat2::Identity() + dd * Y;
}

Vec2 kernel_vector(const Mat2& K) {
  // Each row r of K gives the candidate (r1, -r0); take the larger one.
  const Vec2 a(K(0, 1), -K(0, 0));
  const Vec2 b(K(1, 1), -K(1, 0));
  const Vec2 v = (a.norm() >= b.norm()) ? a : b;
  if (v.norm() == 0.0) return Vec2(0, 1);
  return v;
}

} // namespace lvmkit
