#pragma once

#include <functional>

#include "lvmkit/core.hpp"

namespace lvmkit {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

struct NewtonOptions {
  int max_iter = 50;
  double step_tol = 1e-14; // relative to 1 + |x|_inf
  int max_halvings = 30;
};

struct NewtonResult {
  CVec x;
  int iterations = 0;
  double residual = 0.0;
};

/// Damped Newton for a square holomorphic system F(x) = 0 with Jacobian J.
/// The step is halved until the residual norm decreases. Throws NoConvergence.
NewtonResult newton_solve(const std::function<CVec(const CVec&)>& F,
                          const std::function<CMat(const CVec&)>& J, CVec x0,
                          const NewtonOptions& opt = {});

} // namespace lvmkit
