#include "lvmkit/config_geometry.hpp"

#include <cmath>
#include <gmpxx.h>

namespace lvmkit {

void Configuration::validate() const {
  if (m < 1) throw InputError("configuration: m must be at least 1");
  if (n() < 2 * m + 1)
    throw InputError("configuration: need at least 2m+1 = " + std::to_string(2 * m + 1) +
                     " vectors, got " + std::to_string(n()));
  for (int j = 0; j < n(); ++j) {
    if (static_cast<int>(vectors[j].size()) != m)
      throw InputError("configuration: vector " + std::to_string(j + 1) + " has wrong length");
    for (const Complex& z : vectors[j])
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw InputError("configuration: vector " + std::to_string(j + 1) + " is not finite");
  }
}

Configuration Configuration::without(int label) const {
  Configuration c{m, {}};
  for (int j = 0; j < n(); ++j)
    if (j + 1 != label) c.vectors.push_back(vectors[j]);
  return c;
}

Configuration example_e1() {
  using C = Complex;
  return Configuration{2,
                       {{C(1, 0), C(0, 0)},
                        {C(0, 1), C(0, 0)},
                        {C(0, 0), C(1, 0)},
                        {C(0, 0), C(0, 1)},
                        {C(-1, -1), C(-1, -1)},
                        {C(-1.1, -1.1), C(-1.1, -1.1)}}};
}

std::vector<double> realify(const std::vector<Complex>& v) {
  std::vector<double> r;
  r.reserve(2 * v.size());
  for (const Complex& z : v) {
    r.push_back(z.real());
    r.push_back(z.imag());
  }
  return r;
}

namespace {

// Solve the (d+1) x k barycentric system for the chosen columns. Returns true and fills w
// when the columns are linearly independent and the system is consistent.
bool solve_exact(const std::vector<std::vector<mpq_class>>& pts, const std::vector<mpq_class>& target,
                 const std::vector<int>& cols, std::vector<mpq_class>& w) {
  const int d = static_cast<int>(target.size());
  const int k = static_cast<int>(cols.size());
  const int rows = d + 1;
  std::vector<std::vector<mpq_class>> a(rows, std::vector<mpq_class>(k + 1));
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < k; ++c) a[r][c] = pts[cols[c]][r];
    a[r][k] = target[r];
  }
  for (int c = 0; c < k; ++c) a[d][c] = 1;
  a[d][k] = 1;

  int row = 0;
  for (int c = 0; c < k; ++c) {
    int piv = -1;
    for (int r = row; r < rows; ++r)
      if (sgn(a[r][c]) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return false; // dependent columns; a smaller subset covers this case
    std::swap(a[piv], a[row]);
    for (int r = 0; r < rows; ++r) {
      if (r == row || sgn(a[r][c]) == 0) continue;
      mpq_class f = a[r][c] / a[row][c];
      for (int cc = c; cc <= k; ++cc) a[r][cc] -= f * a[row][cc];
    }
    ++row;
  }
  for (int r = row; r < rows; ++r)
    if (sgn(a[r][k]) != 0) return false;
  w.assign(k, 0);
  for (int c = 0; c < k; ++c) w[c] = a[c][k] / a[c][c];
  return true;
}

bool solve_float(const std::vector<std::vector<double>>& pts, const std::vector<double>& target,
                 const std::vector<int>& cols, double tau, std::vector<double>& w) {
  const int d = static_cast<int>(target.size());
  const int k = static_cast<int>(cols.size());
  Eigen::MatrixXd a(d + 1, k);
  Eigen::VectorXd rhs(d + 1);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < k; ++c) a(r, c) = pts[cols[c]][r];
    rhs(r) = target[r];
  }
  a.row(d).setOnes();
  rhs(d) = 1.0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-12);
  if (qr.rank() < k) return false;
  Eigen::VectorXd x = qr.solve(rhs);
  if ((a * x - rhs).cwiseAbs().maxCoeff() > tau) return false;
  w.assign(x.data(), x.data() + k);
  return true;
}

template <class F>
bool for_each_subset(int n, int maxk, F&& f) {
  std::vector<int> idx;
  for (int k = 1; k <= std::min(n, maxk); ++k) {
    idx.resize(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      if (f(idx)) return true;
      int i = k - 1;
      while (i >= 0 && idx[i] == n - k + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return false;
}

} // namespace

bool in_convex_hull(const std::vector<std::vector<double>>& points, const std::vector<double>& target,
                    const HullOptions& opt) {
  if (points.empty()) throw InputError("in_convex_hull: empty point list");
  const std::size_t d = target.size();
  for (const auto& p : points)
    if (p.size() != d) throw InputError("in_convex_hull: dimension mismatch");
  bool all_finite = true;
  for (const auto& p : points)
    for (double x : p) all_finite = all_finite && std::isfinite(x);
  for (double x : target) all_finite = all_finite && std::isfinite(x);

  const int n = static_cast<int>(points.size());
  const int maxk = static_cast<int>(d) + 1;
  const bool exact = opt.method == HullMethod::Exact || (opt.method == HullMethod::Auto && all_finite);
  if (exact) {
    if (!all_finite) throw InputError("in_convex_hull: exact method needs finite inputs");
    std::vector<std::vector<mpq_class>> qp(n, std::vector<mpq_class>(d));
    std::vector<mpq_class> qt(d);
    for (int i = 0; i < n; ++i)
      for (std::size_t r = 0; r < d; ++r) qp[i][r] = mpq_class(points[i][r]);
    for (std::size_t r = 0; r < d; ++r) qt[r] = mpq_class(target[r]);
    std::vector<mpq_class> w;
    return for_each_subset(n, maxk, [&](const std::vector<int>& cols) {
      if (!solve_exact(qp, qt, cols, w)) return false;
      for (const auto& x : w)
        if (sgn(x) < 0) return false;
      return true;
    });
  }
  std::vector<double> w;
  return for_each_subset(n, maxk, [&](const std::vector<int>& cols) {
    if (!solve_float(points, target, cols, opt.tau, w)) return false;
    for (double x : w)
      if (x < -opt.tau) return false;
    return true;
  });
}

namespace {

std::vector<std::vector<double>> real_points(const Configuration& c, const std::vector<int>& labels) {
  std::vector<std::vector<double>> pts;
  for (int l : labels) pts.push_back(realify(c.vectors[l - 1]));
  return pts;
}

std::vector<int> all_labels(const Configuration& c) {
  std::vector<int> l(c.n());
  for (int j = 0; j < c.n(); ++j) l[j] = j + 1;
  return l;
}

bool origin_in_hull(const Configuration& c, const std::vector<int>& labels, const HullOptions& opt) {
  return in_convex_hull(real_points(c, labels), std::vector<double>(2 * c.m, 0.0), opt);
}

} // namespace

bool check_siegel(const Configuration& c, const HullOptions& opt) {
  c.validate();
  return origin_in_hull(c, all_labels(c), opt);
}

bool check_weak_hyperbolicity(const Configuration& c, const HullOptions& opt) {
  c.validate();
  const int k = 2 * c.m;
  return !for_each_subset(c.n(), k, [&](const std::vector<int>& idx) {
    if (static_cast<int>(idx.size()) != k) return false;
    std::vector<int> labels;
    for (int i : idx) labels.push_back(i + 1);
    return origin_in_hull(c, labels, opt);
  });
}

std::set<int> indispensable_points(const Configuration& c, const HullOptions& opt) {
  if (!check_siegel(c, opt)) throw PreconditionError("indispensable_points: configuration is not Siegel");
  std::set<int> out;
  for (int j = 1; j <= c.n(); ++j) {
    std::vector<int> labels;
    for (int l = 1; l <= c.n(); ++l)
      if (l != j) labels.push_back(l);
    if (!origin_in_hull(c, labels, opt)) out.insert(j);
  }
  return out;
}

ConfigReport analyze_configuration(const Configuration& c, const HullOptions& opt) {
  ConfigReport r;
  r.is_siegel = check_siegel(c, opt);
  r.is_weakly_hyperbolic = check_weak_hyperbolicity(c, opt);
  if (r.is_siegel) r.indispensable = indispensable_points(c, opt);
  if (r.is_siegel && r.is_weakly_hyperbolic)
    r.type_triple = TypeTriple{c.m, c.n(), static_cast<int>(r.indispensable.size())};
  return r;
}

TypeTriple classify_type(const Configuration& c, const HullOptions& opt) {
  ConfigReport r = analyze_configuration(c, opt);
  if (!r.is_siegel) throw NotLVM("Siegel");
  if (!r.is_weakly_hyperbolic) throw NotLVM("weak hyperbolicity");
  return *r.type_triple;
}

Configuration apply_affine(const Configuration& c, const Eigen::MatrixXcd& M, const Eigen::VectorXcd& b) {
  Configuration out{c.m, {}};
  for (const auto& v : c.vectors) {
    Eigen::VectorXcd x(c.m);
    for (int i = 0; i < c.m; ++i) x(i) = v[i];
    Eigen::VectorXcd y = M * x + b;
    out.vectors.emplace_back(y.data(), y.data() + c.m);
  }
  return out;
}

Configuration normalize_affine(const Configuration& c) {
  c.validate();
  const int m = c.m;
  Eigen::MatrixXcd D(m, m);
  Eigen::VectorXcd base(m);
  for (int i = 0; i < m; ++i) base(i) = c.vectors[m][i];
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) D(i, j) = c.vectors[j][i] - base(i);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(D);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible())
    throw InternalInconsistency("normalize_affine: Lambda_1..Lambda_{m+1} are affinely dependent");
  Eigen::MatrixXcd M = lu.inverse();
  Configuration out = apply_affine(c, M, -M * base);
  // The frame points are set exactly so the map is idempotent in floating point.
  for (int j = 0; j <= m; ++j)
    for (int i = 0; i < m; ++i) out.vectors[j][i] = (i == j) ? Complex(1.0) : Complex(0.0);
  return out;
}

} // namespace lvmkit
