#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lvmkit/core.hpp"

namespace lvmkit {

/// n points Lambda_1..Lambda_n of C^m. Index labels used throughout the API are 1-based.
struct Configuration {
  int m = 2;
  std::vector<std::vector<Complex>> vectors;

  int n() const { return static_cast<int>(vectors.size()); }
  /// Throws InputError unless m >= 1, n >= 2m+1, every vector has m finite coordinates.
  void validate() const;
  /// Copy with Lambda_label removed (no validation).
  Configuration without(int label) const;
};

/// The configuration E1 from the worked example.
Configuration example_e1();

enum class HullMethod { Auto, Exact, Floating };

struct HullOptions {
  HullMethod method = HullMethod::Auto;
  double tau = 1e-9;
};

/// Closed convex hull membership in R^d. Doubles are converted to exact rationals unless
/// the floating method is requested.
bool in_convex_hull(const std::vector<std::vector<double>>& points,
                    const std::vector<double>& target, const HullOptions& opt = {});

/// C^m viewed as R^{2m}: (Re z1, Im z1, ..., Re zm, Im zm).
std::vector<double> realify(const std::vector<Complex>& v);

bool check_siegel(const Configuration& c, const HullOptions& opt = {});
bool check_weak_hyperbolicity(const Configuration& c, const HullOptions& opt = {});
/// Labels j with 0 outside hull{Lambda_l : l != j}. Requires the Siegel condition.
std::set<int> indispensable_points(const Configuration& c, const HullOptions& opt = {});

struct TypeTriple {
  int m = 0, n = 0, k = 0;
  bool operator==(const TypeTriple&) const = default;
};

class NotLVM : public Error {
public:
  explicit NotLVM(std::string condition)
      : Error("configuration is not LVM: " + condition + " fails"), condition_(std::move(condition)) {}
  const std::string& condition() const { return condition_; }

private:
  std::string condition_;
};

TypeTriple classify_type(const Configuration& c, const HullOptions& opt = {});

struct ConfigReport {
  bool is_siegel = false;
  bool is_weakly_hyperbolic = false;
  std::set<int> indispensable;
  std::optional<TypeTriple> type_triple;
};

ConfigReport analyze_configuration(const Configuration& c, const HullOptions& opt = {});

/// Image under the unique affine map sending Lambda_1..Lambda_{m+1} to e_1,..,e_m,0.
Configuration normalize_affine(const Configuration& c);

/// x -> M x + b applied to every vector.
Configuration apply_affine(const Configuration& c, const Eigen::MatrixXcd& M, const Eigen::VectorXcd& b);

} // namespace lvmkit
