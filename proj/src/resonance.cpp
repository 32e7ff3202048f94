#include "lvmkit/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lvmkit {

bool Resonance::trivial() const {
  for (int k = 0; k < 3; ++k)
    if (p[k] != (k == j - 1 ? 1 : 0)) return false;
  return true;
}

ResonanceClass ResonanceClass::single(int p, int q) {
  if (q < 2) throw InputError("Single regime needs q >= 2");
  return {Kind::Single, p, q};
}

std::string ResonanceClass::name() const {
  switch (kind) {
  case Kind::NonResonant:
    return "NonResonant";
  case Kind::Single:
    return "Single{p=" + std::to_string(p) + ",q=" + std::to_string(q) + "}";
  case Kind::Double:
    return "Double{p=" + std::to_string(p) + "}";
  }
  return "?";
}

namespace {

struct LogTriple {
  std::array<Complex, 3> l;
};

LogTriple logs(const std::array<Complex, 3>& x) {
  return {{std::log(x[0]), std::log(x[1]), std::log(x[2])}};
}

// |exp(z) - 1| with z = log x_j - sum p_k log x_k, phase reduced mod 2 pi.
double defect_from_logs(const LogTriple& L, int j, const Exponent& p) {
  Complex z = L.l[j - 1];
  for (int k = 0; k < 3; ++k) z -= static_cast<double>(p[k]) * L.l[k];
  const double a = z.real();
  if (!std::isfinite(a) || std::abs(a) > 1.0) return std::numeric_limits<double>::infinity();
  const double b = std::remainder(z.imag(), 2.0 * kPi);
  const double s = std::sin(0.5 * b);
  const double re = std::expm1(a) * std::cos(b) - 2.0 * s * s;
  const double im = std::exp(a) * std::sin(b);
  return std::hypot(re, im);
}

} // namespace

double resonance_defect(const HolonomyPair& h, int j, const Exponent& p) {
  return std::max(defect_from_logs(logs(h.alpha), j, p), defect_from_logs(logs(h.beta), j, p));
}

std::vector<Resonance> ResonanceSearch::nontrivial() const {
  std::vector<Resonance> out;
  for (const auto& r : resonances)
    if (!r.trivial()) out.push_back(r);
  return out;
}

ResonanceSearch find_resonances(const HolonomyPair& h, double tol, int bound) {
  if (!(tol > 0)) throw InputError("find_resonances: tol must be positive");
  if (bound < 1) throw InputError("find_resonances: bound must be at least 1");
  ResonanceSearch out;
  out.tol = tol;
  out.bound = bound;
  const LogTriple La = logs(h.alpha), Lb = logs(h.beta);
  std::vector<Resonance> found;

  auto test = [&](int j, const Exponent& p) {
    Resonance r{j, p};
    if (r.trivial()) return;
    const double d = std::max(defect_from_logs(La, j, p), defect_from_logs(Lb, j, p));
    if (d <= tol)
      found.push_back(r);
    else if (d <= 10.0 * tol)
      out.near.push_back({r, d});
  };

  // Log-modulus system in (p1, p2) for fixed p3.
  const double m00 = La.l[0].real(), m01 = La.l[1].real();
  const double m10 = Lb.l[0].real(), m11 = Lb.l[1].real();
  const double det = m00 * m11 - m01 * m10;
  int radius = bound;
  double i00 = 0, i01 = 0, i10 = 0, i11 = 0;
  const bool unit_circle = std::abs(m00) < 1e-12 && std::abs(m01) < 1e-12;
  if (!unit_circle && det != 0.0 && std::isfinite(det)) {
    i00 = m11 / det;
    i01 = -m01 / det;
    i10 = -m10 / det;
    i11 = m00 / det;
    const double inv_norm = std::max(std::abs(i00) + std::abs(i01), std::abs(i10) + std::abs(i11));
    // A defect <= 10 tol bounds each log-modulus mismatch by about 30 tol.
    const double spread = inv_norm * 30.0 * tol;
    if (std::isfinite(spread) && spread < bound) radius = 2 + static_cast<int>(std::ceil(spread));
  }
  const bool windowed = radius < bound;

  for (int j = 1; j <= 3; ++j) {
    for (int p3 = 0; p3 <= bound; ++p3) {
      int lo1 = -bound, hi1 = bound, lo2 = 0, hi2 = bound;
      if (windowed) {
        const double r0 = La.l[j - 1].real() - p3 * La.l[2].real();
        const double r1 = Lb.l[j - 1].real() - p3 * Lb.l[2].real();
        const double s1 = i00 * r0 + i01 * r1;
        const double s2 = i10 * r0 + i11 * r1;
        if (!std::isfinite(s1) || !std::isfinite(s2)) continue;
        if (std::abs(s1) > bound + radius + 1 || s2 > bound + radius + 1 || s2 < -radius - 1) continue;
        const int c1 = static_cast<int>(std::lround(s1)), c2 = static_cast<int>(std::lround(s2));
        lo1 = std::max(-bound, c1 - radius);
        hi1 = std::min(bound, c1 + radius);
        lo2 = std::max(0, c2 - radius);
        hi2 = std::min(bound, c2 + radius);
      }
      for (int p1 = lo1; p1 <= hi1; ++p1)
        for (int p2 = lo2; p2 <= hi2; ++p2) test(j, {p1, p2, p3});
    }
  }
  std::sort(found.begin(), found.end());
  std::sort(out.near.begin(), out.near.end(),
            [](const NearResonance& a, const NearResonance& b) { return a.r < b.r; });
  for (int j = 1; j <= 3; ++j) {
    Exponent e{0, 0, 0};
    e[j - 1] = 1;
    out.resonances.push_back({j, e});
  }
  out.resonances.insert(out.resonances.end(), found.begin(), found.end());
  return out;
}

ResonanceClass classify_regime(const std::vector<Resonance>& resonances) {
  std::vector<Resonance> nt;
  for (const auto& r : resonances)
    if (!r.trivial()) nt.push_back(r);
  std::sort(nt.begin(), nt.end());
  if (nt.empty()) return ResonanceClass::non_resonant();
  auto describe = [&] {
    std::string s;
    for (const auto& r : nt)
      s += " (" + std::to_string(r.j) + ",(" + std::to_string(r.p[0]) + "," + std::to_string(r.p[1]) + "," +
           std::to_string(r.p[2]) + "))";
    return s;
  };
  if (nt.size() == 1) {
    const Resonance& r = nt[0];
    if (r.j == 3 && r.p[2] == 0 && r.p[1] >= 2) return ResonanceClass::single(r.p[0], r.p[1]);
    if (r.j == 2 && r.p[1] == 0 && r.p[2] >= 2)
      throw UnclassifiableResonancePattern("resonance pattern" + describe() +
                                           " needs Lambda_5 and Lambda_6 exchanged");
  }
  if (nt.size() == 2) {
    const Resonance& a = nt[0]; // j = 2 sorts first
    const Resonance& b = nt[1];
    if (a.j == 2 && b.j == 3 && b.p[1] == 1 && b.p[2] == 0 && a.p[0] == -b.p[0] && a.p[1] == 0 && a.p[2] == 1)
      return ResonanceClass::double_(b.p[0]);
  }
  throw UnclassifiableResonancePattern("resonance pattern" + describe() + " matches no regime");
}

std::array<int, 4> cohomology_dims(const ResonanceClass& c) {
  int extra = 0;
  if (c.kind == ResonanceClass::Kind::Single) extra = 1;
  if (c.kind == ResonanceClass::Kind::Double) extra = 2;
  const int d = 3 + extra;
  return {d, 2 * d, d, 0};
}

// ---- vector fields ----

ResonantVectorField::ResonantVectorField(HolonomyPair ambient, double tol)
    : ambient_(std::move(ambient)), tol_(tol) {
  ambient_.omega.reset();
}

ResonantVectorField& ResonantVectorField::add(int j, const Exponent& p, Complex c) {
  if (j < 1 || j > 3) throw InputError("vector field: component index out of range");
  if (p[1] < 0 || p[2] < 0) throw InputError("vector field: exponent outside Z x N x N");
  Resonance k{j, p};
  if (!k.trivial() && resonance_defect(ambient_, j, p) > tol_)
    throw InputError("vector field: (j,p) is not a resonance of the ambient eigen-data");
  terms_[k] += c;
  prune();
  return *this;
}

void ResonantVectorField::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) < 1e-15)
      it = terms_.erase(it);
    else
      ++it;
  }
}

bool ResonantVectorField::same_ambient(const ResonantVectorField& o) const {
  return ambient_.alpha == o.ambient_.alpha && ambient_.beta == o.ambient_.beta;
}

double ResonantVectorField::max_coefficient() const {
  double m = 0.0;
  for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

Point3 ResonantVectorField::evaluate(const Point3& z) const {
  Point3 v{};
  for (const auto& [k, c] : terms_) {
    Complex mono = c;
    for (int i = 0; i < 3; ++i) mono *= ipow(z[i], k.p[i]);
    v[k.j - 1] += mono;
  }
  return v;
}

ResonantVectorField ResonantVectorField::operator+(const ResonantVectorField& o) const {
  if (!same_ambient(o)) throw InputError("vector field: mixed ambient eigen-data");
  ResonantVectorField r = *this;
  for (const auto& [k, c] : o.terms_) r.terms_[k] += c;
  r.prune();
  return r;
}

ResonantVectorField ResonantVectorField::operator*(Complex s) const {
  ResonantVectorField r = *this;
  for (auto& [k, c] : r.terms_) c *= s;
  r.prune();
  return r;
}

ResonantVectorField bracket(const ResonantVectorField& X, const ResonantVectorField& Y) {
  if (!X.same_ambient(Y)) throw InputError("bracket: mixed ambient eigen-data");
  ResonantVectorField out(X.ambient());
  // [z^p d_j, z^r d_k] = r_j z^{p+r-e_j} d_k - p_k z^{p+r-e_k} d_j
  for (const auto& [kx, a] : X.terms()) {
    for (const auto& [ky, b] : Y.terms()) {
      const int j = kx.j, k = ky.j;
      const Exponent& p = kx.p;
      const Exponent& r = ky.p;
      Exponent s{p[0] + r[0], p[1] + r[1], p[2] + r[2]};
      if (r[j - 1] != 0) {
        Exponent e = s;
        e[j - 1] -= 1;
        out.add(k, e, a * b * static_cast<double>(r[j - 1]));
      }
      if (p[k - 1] != 0) {
        Exponent e = s;
        e[k - 1] -= 1;
        out.add(j, e, -a * b * static_cast<double>(p[k - 1]));
      }
    }
  }
  return out;
}

bool first_obstruction_vanishes(const ResonantVectorField& X, const ResonantVectorField& Y, double tol) {
  const ResonantVectorField b = bracket(X, Y);
  const double scale = 1.0 + std::max(X.max_coefficient(), Y.max_coefficient());
  for (const auto& [k, c] : b.terms())
    if (std::abs(c) > tol * scale) return false;
  return true;
}

} // namespace lvmkit
