#include "lvmkit/newton.hpp"

#include <cmath>
#include <limits>

namespace lvmkit {

NewtonResult newton_solve(const std::function<CVec(const CVec&)>& F,
                          const std::function<CMat(const CVec&)>& J, CVec x, const NewtonOptions& opt) {
  auto norm = [](const CVec& v) {
    return v.allFinite() ? v.lpNorm<Eigen::Infinity>() : std::numeric_limits<double>::infinity();
  };
  CVec r = F(x);
  double rn = norm(r);
  if (!std::isfinite(rn)) throw NoConvergence("newton: residual not finite at the initial guess");
  for (int it = 1; it <= opt.max_iter; ++it) {
    if (rn == 0.0) return {x, it - 1, 0.0};
    const CVec step = Eigen::PartialPivLU<CMat>(J(x)).solve(-r);
    if (!step.allFinite()) throw NoConvergence("newton: singular Jacobian");
    const double scale = 1.0 + x.lpNorm<Eigen::Infinity>();
    double t = 1.0;
    CVec xn = x + step, rnew = F(xn);
    double rnn = norm(rnew);
    for (int h = 0; !(rnn < rn) && h < opt.max_halvings; ++h) {
      t *= 0.5;
      xn = x + t * step;
      rnew = F(xn);
      rnn = norm(rnew);
    }
    const bool tiny = t * step.lpNorm<Eigen::Infinity>() < opt.step_tol * scale;
    if (rnn < rn) {
      x = xn;
      r = rnew;
      rn = rnn;
      if (tiny) return {x, it, rn};
    } else {
      // No decrease: acceptable only at the rounding floor.
      if (tiny || rn <= 1e-13 * scale) return {x, it, rn};
      throw NoConvergence("newton: line search failed");
    }
  }
  throw NoConvergence("newton: no convergence in " + std::to_string(opt.max_iter) + " iterations");
}

} // namespace lvmkit
