#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lvmkit {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

/// A point (xi1, xi2, xi3) of V = C* x (C^2 \ {0}), or of the cover when xi1 is read as w1.
using Point3 = std::array<Complex, 3>;

inline constexpr double kPi = 3.14159265358979323846;
inline const Complex kTwoPiI{0.0, 2.0 * kPi};

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-domain arguments.
class InputError : public Error {
public:
  using Error::Error;
};

/// A documented precondition of the operation does not hold.
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// Data that should be impossible for certified input (e.g. a singular frame).
class InternalInconsistency : public Error {
public:
  using Error::Error;
};

/// A division by a quantity below the separation threshold.
class IllConditioned : public Error {
public:
  using Error::Error;
};

/// A logarithm was requested outside the principal-branch ball.
class BranchDomain : public Error {
public:
  using Error::Error;
};

class NoConvergence : public Error {
public:
  using Error::Error;
};

/// The point fails the clauses describing the image of the gluing map.
class NotInImage : public Error {
public:
  using Error::Error;
};

/// Integer power with exact reciprocal for negative exponents.
Complex ipow(Complex z, long long n);

/// Principal logarithm divided by 2*pi*i.
inline Complex log_over_2pii(Complex z) { return std::log(z) / kTwoPiI; }

inline double max_abs(const Point3& x) {
  return std::max({std::abs(x[0]), std::abs(x[1]), std::abs(x[2])});
}

/// |e^z - 1| with the phase of z reduced mod 2 pi first; infinite when Re z is large.
double exp_defect(Complex z);

/// Max-norm distance between two points divided by max(1e-300, |b|_inf).
double relative_distance(const Point3& a, const Point3& b);

} // namespace lvmkit
