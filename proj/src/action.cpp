#include "lvmkit/action.hpp"

#include <algorithm>
#include <cmath>

#include "lvmkit/rng.hpp"

namespace lvmkit {

using Kind = ResonanceClass::Kind;

GroupElement word_element(const Pair& pr, int r, int s) { return compose(power(pr.f, r), power(pr.g, s)); }

namespace {

// |x^r y^s - 1| evaluated in log space.
double unit_defect(Complex x, Complex y, int r, int s) {
  return exp_defect(static_cast<double>(r) * std::log(x) + static_cast<double>(s) * std::log(y));
}

std::vector<std::pair<int, int>> shell(int k) {
  std::vector<std::pair<int, int>> out;
  for (int r = -k; r <= k; ++r)
    for (int s = -k; s <= k; ++s)
      if (std::max(std::abs(r), std::abs(s)) == k) out.push_back({r, s});
  return out;
}

double fixed_residual(const GroupElement& h, const Point3& x) {
  const Point3 y = lvmkit::apply(h, x);
  double d = 0.0;
  for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(y[i] - x[i]));
  return d / max_abs(x);
}

} // namespace

ActionCertificate fixed_point_certificate(const Pair& pr, int window, double tol) {
  if (!(pr.f.regime == pr.g.regime)) throw InputError("fixed_point_certificate: regime mismatch");
  if (window < 1) throw InputError("fixed_point_certificate: window must be at least 1");
  const double scale = std::max(param_scale(pr.f), param_scale(pr.g));
  if (commutation_residual(pr.f, pr.g) > 1e-9 * scale * scale)
    throw PreconditionError("fixed_point_certificate: generators do not commute");

  // Diagonal data whose products decide the eigenvalue conditions.
  std::array<Complex, 3> df, dg;
  const bool dbl = pr.f.regime.kind == Kind::Double;
  if (dbl) {
    const PairNormalForm nf = simultaneous_triangularize(pr.f, pr.g);
    df = {nf.tf.a1, nf.tf.m(0, 0), nf.tf.m(1, 1)};
    dg = {nf.tg.a1, nf.tg.m(0, 0), nf.tg.m(1, 1)};
  } else {
    df = {pr.f.a1, pr.f.a2, pr.f.a3};
    dg = {pr.g.a1, pr.g.a2, pr.g.a3};
  }

  ActionCertificate cert;
  cert.window = window;
  for (int k = 1; k <= window; ++k) {
    for (const auto& [r, s] : shell(k)) {
      ++cert.words_checked;
      if (unit_defect(df[0], dg[0], r, s) > tol) continue;
      const bool u2 = unit_defect(df[1], dg[1], r, s) <= tol;
      const bool u3 = unit_defect(df[2], dg[2], r, s) <= tol;
      if (!u2 && !u3) continue;
      const GroupElement h = word_element(pr, r, s);
      Point3 x;
      if (dbl) {
        const Vec2 z = kernel_vector(tau(Complex(1.0), pr.f.regime.p, h.m) - Mat2::Identity());
        x = {1.0, z(0), z(1)};
      } else if (u3) {
        x = {1.0, 0.0, 1.0};
      } else {
        x = {1.0, 1.0, -h.eps / (h.a3 - 1.0)};
      }
      cert.fixed_point_free = false;
      cert.witness = FixedPointWitness{r, s, x, fixed_residual(h, x)};
      return cert;
    }
  }
  return cert;
}

std::vector<Point3> orbit(const Pair& pr, const std::vector<std::pair<int, int>>& word, const Point3& x) {
  require_in_V(x);
  std::vector<Point3> out{x};
  Point3 cur = x;
  for (const auto& [r, s] : word) {
    cur = lvmkit::apply(word_element(pr, r, s), cur);
    out.push_back(cur);
  }
  return out;
}

ProbeReport properness_probe(const Pair& pr, double radius, int horizon, int samples, std::uint64_t seed) {
  if (!(radius > 1.0)) throw InputError("properness_probe: radius must exceed 1");
  if (horizon < 1) throw InputError("properness_probe: horizon must be at least 1");
  if (samples < 1) throw InputError("properness_probe: samples must be at least 1");
  ProbeReport rep;
  rep.radius = radius;
  rep.horizon = horizon;
  rep.samples = samples;

  Rng rng(seed);
  const double lr = std::log(radius);
  std::vector<Point3> K;
  for (int i = 0; i < samples; ++i) {
    const double m1 = std::exp(rng.uniform(-lr, lr));
    const auto z = rng.sphere2(1.0, 1.0);
    const double m2 = std::exp(rng.uniform(-lr, lr));
    K.push_back({std::polar(m1, rng.uniform(-kPi, kPi)), m2 * z[0], m2 * z[1]});
  }
  auto inside = [&](const Point3& y) {
    const double a = std::abs(y[0]), b = std::hypot(std::abs(y[1]), std::abs(y[2]));
    return a >= 1.0 / radius && a <= radius && b >= 1.0 / radius && b <= radius;
  };
  for (int k = (horizon + 1) / 2; k <= horizon; ++k) {
    if (k == 0) continue;
    for (const auto& [r, s] : shell(k)) {
      ++rep.words_checked;
      const GroupElement h = word_element(pr, r, s);
      for (const Point3& x : K) {
        const Point3 y = lvmkit::apply(h, x);
        if (inside(y)) {
          rep.violations.push_back({r, s, x, y});
          break;
        }
      }
    }
  }
  rep.verdict = rep.violations.empty() ? "no violation found" : "violation found";
  return rep;
}

} // namespace lvmkit
