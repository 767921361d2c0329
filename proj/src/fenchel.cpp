#include "minper/fenchel.hpp"

#include <cmath>

namespace minper {

Eigen::VectorXd invert_gradient(const HamiltonianModel& model, double beta_hat,
                                const Eigen::VectorXd& y, const FenchelOptions& opts) {
  const Eigen::Index n = y.size();
  const double ynorm = y.norm();
  if (ynorm == 0.0) return Eigen::VectorXd::Zero(n);

  Eigen::VectorXd x = y * std::pow(ynorm, 1.0 / (beta_hat - 1.0) - 1.0);
  double merit = (model.grad(x) - y).norm();
  const double target = opts.tol * (1.0 + ynorm);

  for (int iter = 0; iter < opts.max_iters && merit > target; ++iter) {
    const Eigen::MatrixXd hess = fd_jacobian(model.grad, x, opts.fd_step);
    const Eigen::VectorXd resid = model.grad(x) - y;
    Eigen::VectorXd step = hess.partialPivLu().solve(-resid);
    if (!step.allFinite()) step = -resid;  // fall back to a gradient-flow step

    // Halve until the merit decreases; a stall signals loss of convexity.
    double t = 1.0;
    double best = merit;
    Eigen::VectorXd best_x = x;
    int halvings = 0;
    for (; halvings < opts.max_halvings; ++halvings) {
      const Eigen::VectorXd trial = x + t * step;
      const double m = (model.grad(trial) - y).norm();
      if (m < merit) {
        best = m;
        best_x = trial;
        break;
      }
      t *= 0.5;
    }
    if (halvings == opts.max_halvings)
      throw FenchelError("conjugate solver stalled (non-convex or badly scaled "
                         "Hamiltonian?) at |y| = " + std::to_string(ynorm));
    x = best_x;
    merit = best;
  }
  if (merit > target)
    throw FenchelError("conjugate solver did not converge at |y| = " +
                       std::to_string(ynorm));
  return x;
}

FenchelPair fenchel_transform(const HamiltonianModel& model, const FenchelOptions& opts) {
  FenchelPair pair;
  pair.base = model;

  double beta = model.growth_beta;
  if (!(beta > 1.0)) {
    const GrowthFit fit = fit_growth_exponent(model.eval, model.dim);
    beta = fit.exponent;
    if (!(beta > 1.0))
      throw FenchelError("cannot determine a superlinear growth exponent for " +
                         model.name);
  }
  pair.beta_hat = beta;
  pair.alpha = beta / (beta - 1.0);

  const HamiltonianModel base = model;
  pair.conj_numeric = [base, beta, opts](const Eigen::VectorXd& y) {
    const Eigen::VectorXd x = invert_gradient(base, beta, y, opts);
    return x.dot(y) - base.eval(x);
  };
  pair.conj_grad_numeric = [base, beta, opts](const Eigen::VectorXd& y) {
    return invert_gradient(base, beta, y, opts);
  };

  if (model.name == "power") {
    // Conjugate of |z|^beta / beta is |y|^alpha / alpha.
    const double alpha = pair.alpha;
    pair.has_closed_form = true;
    pair.conj = [alpha](const Eigen::VectorXd& y) {
      return std::pow(y.norm(), alpha) / alpha;
    };
    pair.conj_grad = [alpha](const Eigen::VectorXd& y) -> Eigen::VectorXd {
      const double r = y.norm();
      if (r == 0.0) return Eigen::VectorXd::Zero(y.size());
      return std::pow(r, alpha - 2.0) * y;
    };
  } else {
    pair.conj = pair.conj_numeric;
    pair.conj_grad = pair.conj_grad_numeric;
  }
  return pair;
}

}  // namespace minper
