#pragma once

#include <array>
#include <compare>
#include <map>
#include <string>
#include <vector>

#include "lvmkit/holonomy.hpp"

namespace lvmkit {

using Exponent = std::array<int, 3>;

/// alpha_j = alpha^p and beta_j = beta^p, with j in {1,2,3}.
struct Resonance {
  int j = 1;
  Exponent p{0, 0, 0};

  bool trivial() const;
  auto operator<=>(const Resonance&) const = default;
};

struct ResonanceClass {
  enum class Kind { NonResonant, Single, Double };
  Kind kind = Kind::NonResonant;
  int p = 0;
  int q = 0; // 1 for Double, >= 2 for Single, 0 for NonResonant

  static ResonanceClass non_resonant() { return {}; }
  static ResonanceClass single(int p, int q);
  static ResonanceClass double_(int p) { return {Kind::Double, p, 1}; }

  bool operator==(const ResonanceClass&) const = default;
  std::string name() const;
};

/// max over (alpha, beta) of |x_j x^{-p} - 1|, evaluated in log space.
double resonance_defect(const HolonomyPair& h, int j, const Exponent& p);

struct NearResonance {
  Resonance r;
  double defect = 0.0;
};

struct ResonanceSearch {
  std::vector<Resonance> resonances; // trivial ones first, then sorted non-trivial
  std::vector<NearResonance> near;   // defect in (tol, 10 tol]
  double tol = 1e-9;
  int bound = 64;

  std::vector<Resonance> nontrivial() const;
};

ResonanceSearch find_resonances(const HolonomyPair& h, double tol = 1e-9, int bound = 64);

class UnclassifiableResonancePattern : public Error {
public:
  using Error::Error;
};

ResonanceClass classify_regime(const std::vector<Resonance>& resonances);

/// (h0, h1, h2, h3) = (d, 2d, d, 0) with d = 3 + number of non-trivial resonances.
std::array<int, 4> cohomology_dims(const ResonanceClass& c);

/// Sum of a_{j,p} z^p d/dz_j over resonant keys of a fixed ambient eigen-data.
class ResonantVectorField {
public:
  using Key = Resonance;

  explicit ResonantVectorField(HolonomyPair ambient, double tol = 1e-9);

  /// Adds c z^p d/dz_j. Throws InputError if (j,p) is not a resonance of the ambient data.
  ResonantVectorField& add(int j, const Exponent& p, Complex c);

  const std::map<Key, Complex>& terms() const { return terms_; }
  const HolonomyPair& ambient() const { return ambient_; }
  bool same_ambient(const ResonantVectorField& o) const;
  double max_coefficient() const;

  /// Components of the field at z in (C*)^3.
  Point3 evaluate(const Point3& z) const;

  ResonantVectorField operator+(const ResonantVectorField& o) const;
  ResonantVectorField operator*(Complex s) const;

private:
  void prune();

  HolonomyPair ambient_;
  double tol_;
  std::map<Key, Complex> terms_;
};

ResonantVectorField bracket(const ResonantVectorField& X, const ResonantVectorField& Y);

bool first_obstruction_vanishes(const ResonantVectorField& X, const ResonantVectorField& Y, double tol = 1e-12);

} // namespace lvmkit
