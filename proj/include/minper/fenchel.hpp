#pragma once

#include "minper/models.hpp"

#include <stdexcept>

namespace minper {

// Raised when the conjugate solver cannot invert the gradient map within
// budget; usually means the Hamiltonian is not strictly convex or is badly
// scaled at the query point.
struct FenchelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A Hamiltonian together with its convex conjugate G(y) = sup_x (x.y - H(x)).
// conj / conj_grad use the closed form when one is known for the family and
// the gradient-inversion solver otherwise; the numeric route stays exposed
// so the two can be checked against each other.
struct FenchelPair {
  HamiltonianModel base;
  double alpha = 0.0;     // conjugate exponent, 1/alpha + 1/beta = 1
  double beta_hat = 0.0;  // exponent behind the radial initial guess
  bool has_closed_form = false;
  ScalarField conj;
  VectorField conj_grad;
  ScalarField conj_numeric;
  VectorField conj_grad_numeric;
};

struct FenchelOptions {
  int max_iters = 100;
  double tol = 1e-10;       // residual target |H'(x) - y| <= tol * (1 + |y|)
  int max_halvings = 60;
  double fd_step = 1e-5;    // Hessian step scale, h = fd_step * (1 + |x|)
};

// Solves H'(x) = y by damped Newton from the radial guess
// x0 = y |y|^{1/(beta-1) - 1}; exact for the power family.
Eigen::VectorXd invert_gradient(const HamiltonianModel& model, double beta_hat,
                                const Eigen::VectorXd& y,
                                const FenchelOptions& opts = {});

FenchelPair fenchel_transform(const HamiltonianModel& model,
                              const FenchelOptions& opts = {});

}  // namespace minper
