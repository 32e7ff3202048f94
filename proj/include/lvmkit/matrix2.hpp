#pragma once

#include "lvmkit/core.hpp"

namespace lvmkit {

/// L_{alpha,p} = diag(1, alpha^p).
Mat2 twist_diag(Complex alpha, int p);

/// tau_p(z)(M) = L_{z,p} M L_{z,p}^{-1}: off-diagonal entries scaled by z^{-p} (top) and z^p (bottom).
Mat2 tau(Complex z, int p, const Mat2& M);

/// Roots of a x^2 + b x + c with a != 0, numerically stable form.
std::array<Complex, 2> quadratic_roots(Complex a, Complex b, Complex c);

/// Lexicographic order on (re, im).
bool lex_less(Complex a, Complex b);

/// Matrix exponential of a 2x2 complex matrix (closed form via divided differences).
Mat2 expm2(const Mat2& X);

/// Principal matrix logarithm; eigenvalues must avoid the closed negative real axis.
Mat2 logm2(const Mat2& M);

/// Nonzero vector spanning the kernel of a (numerically) singular 2x2 matrix.
Vec2 kernel_vector(const Mat2& K);

} // namespace lvmkit
