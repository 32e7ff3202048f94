#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lvmkit/config_geometry.hpp"

namespace lvmkit {

/// Eigenvalues of the two commuting diagonal generators. omega is present when the data
/// was computed from a configuration.
struct HolonomyPair {
  std::array<Complex, 3> alpha{Complex(1), Complex(1), Complex(1)};
  std::array<Complex, 3> beta{Complex(1), Complex(1), Complex(1)};
  std::optional<Mat2> omega;

  /// alpha_j / beta_j with a 1-based label.
  Complex a(int j) const { return alpha[j - 1]; }
  Complex b(int j) const { return beta[j - 1]; }
};

/// Rows Lambda_2 - Lambda_1 and Lambda_3 - Lambda_1. Throws InternalInconsistency when singular.
Mat2 omega_matrix(const Configuration& c);

/// The pairings <Lambda_{j+3} - Lambda_1, Omega^{-1} e_k> as a 3x2 table (row j-1, column k-1).
std::array<std::array<Complex, 2>, 3> holonomy_exponents(const Configuration& c);

/// Eigen-data without admissibility checks.
HolonomyPair compute_holonomy(const Configuration& c);

struct HolonomyViolation {
  std::string rule; // "nonzero", "unit-pair", "unit-with-first", "equal-to-first"
  int j = 0;
  std::string message;
};

class HolonomyError : public Error {
public:
  explicit HolonomyError(std::vector<HolonomyViolation> v);
  const std::vector<HolonomyViolation>& violations() const { return v_; }

private:
  std::vector<HolonomyViolation> v_;
};

/// As compute_holonomy, then throws HolonomyError if validate_holonomy reports anything.
HolonomyPair holonomy_pair(const Configuration& c);

/// Every violated eigen-data constraint; empty when admissible. tol is relative.
std::vector<HolonomyViolation> validate_holonomy(const HolonomyPair& h, double tol = 1e-12);

} // namespace lvmkit
