#include "lvmkit/holonomy.hpp"

#include <cmath>

namespace lvmkit {

namespace {

void require_dim2(const Configuration& c, int min_n) {
  if (c.m != 2) throw InputError("holonomy: configuration must live in C^2");
  if (c.n() < min_n) throw InputError("holonomy: need at least " + std::to_string(min_n) + " vectors");
  for (const auto& v : c.vectors)
    if (v.size() != 2) throw InputError("holonomy: vector of wrong length");
}

Vec2 vec(const std::vector<Complex>& v) { return Vec2(v[0], v[1]); }

} // namespace

Mat2 omega_matrix(const Configuration& c) {
  require_dim2(c, 3);
  Mat2 om;
  om.row(0) = (vec(c.vectors[1]) - vec(c.vectors[0])).transpose();
  om.row(1) = (vec(c.vectors[2]) - vec(c.vectors[0])).transpose();
  const double scale = om.cwiseAbs().maxCoeff();
  if (!(std::abs(om.determinant()) > 1e-14 * scale * scale))
    throw InternalInconsistency("omega_matrix: Lambda_2 - Lambda_1 and Lambda_3 - Lambda_1 are dependent");
  return om;
}

std::array<std::array<Complex, 2>, 3> holonomy_exponents(const Configuration& c) {
  require_dim2(c, 6);
  const Mat2 inv = omega_matrix(c).inverse();
  std::array<std::array<Complex, 2>, 3> out{};
  for (int j = 0; j < 3; ++j) {
    const Vec2 d = vec(c.vectors[j + 3]) - vec(c.vectors[0]);
    for (int k = 0; k < 2; ++k) {
      // bilinear pairing, no conjugation
      out[j][k] = d(0) * inv(0, k) + d(1) * inv(1, k);
    }
  }
  return out;
}

HolonomyPair compute_holonomy(const Configuration& c) {
  const auto e = holonomy_exponents(c);
  HolonomyPair h;
  for (int j = 0; j < 3; ++j) {
    h.alpha[j] = std::exp(kTwoPiI * e[j][0]);
    h.beta[j] = std::exp(kTwoPiI * e[j][1]);
  }
  h.omega = omega_matrix(c);
  return h;
}

HolonomyError::HolonomyError(std::vector<HolonomyViolation> v)
    : Error("holonomy eigen-data is not admissible: " + (v.empty() ? std::string("?") : v.front().message)),
      v_(std::move(v)) {}

HolonomyPair holonomy_pair(const Configuration& c) {
  HolonomyPair h = compute_holonomy(c);
  auto v = validate_holonomy(h);
  if (!v.empty()) throw HolonomyError(std::move(v));
  return h;
}

std::vector<HolonomyViolation> validate_holonomy(const HolonomyPair& h, double tol) {
  std::vector<HolonomyViolation> out;
  auto unit = [&](Complex z) { return std::abs(std::abs(z) - 1.0) <= tol; };
  auto same = [&](Complex x, Complex y) { return std::abs(x - y) <= tol * std::max(std::abs(x), std::abs(y)); };
  for (int j = 1; j <= 3; ++j) {
    if (h.a(j) == Complex(0) || h.b(j) == Complex(0))
      out.push_back({"nonzero", j, "eigenvalue of index " + std::to_string(j) + " is zero"});
  }
  if (!out.empty()) return out;
  if (h.omega && !(std::abs(h.omega->determinant()) > 0))
    out.push_back({"omega", 0, "Omega is singular"});
  for (int j = 1; j <= 3; ++j)
    if (unit(h.a(j)) && unit(h.b(j)))
      out.push_back({"unit-pair", j, "|alpha_" + std::to_string(j) + "| = |beta_" + std::to_string(j) + "| = 1"});
  for (int j = 2; j <= 3; ++j) {
    if (unit(h.a(1)) && unit(h.a(j)))
      out.push_back({"unit-with-first", j, "|alpha_1| = |alpha_" + std::to_string(j) + "| = 1"});
    if (unit(h.b(1)) && unit(h.b(j)))
      out.push_back({"unit-with-first", j, "|beta_1| = |beta_" + std::to_string(j) + "| = 1"});
  }
  for (int j = 2; j <= 3; ++j)
    if (same(h.a(1), h.a(j)) && same(h.b(1), h.b(j)))
      out.push_back({"equal-to-first", j,
                     "alpha_1 = alpha_" + std::to_string(j) + " and beta_1 = beta_" + std::to_string(j)});
  return out;
}

} // namespace lvmkit
