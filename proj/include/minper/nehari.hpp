#pragma once

#include "minper/action.hpp"
#include "minper/fiber.hpp"

#include <cstdint>
#include <functional>

namespace minper {

// Coefficient-space view of an action functional, enough for the inf-max
// search: value, gradient, the class norm used to normalize directions, and
// (dual case) the cone test and quadratic form. hessian may be null, in
// which case refinement differentiates the gradient numerically.
struct FunctionalOps {
  int dim = 0;
  FiberKind kind = FiberKind::Direct;
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian;
  std::function<double(const Eigen::VectorXd&)> norm;
  std::function<ConeClass(const Eigen::VectorXd&)> cone;      // null for direct
  std::function<double(const Eigen::VectorXd&)> quad_form;    // a(e, e); null direct
  Eigen::VectorXd metric_diag;  // diagonal preconditioner; empty = identity
};

FunctionalOps direct_ops(const DirectActionContext& ctx);
FunctionalOps dual_ops(const DualActionContext& ctx, double tol_cone = 1e-10);

// Fiber restriction of ops along the unit direction e. The returned problem
// references ops; keep ops alive while the fiber is in use.
FiberProblem make_fiber(const FunctionalOps& ops, const Eigen::VectorXd& e);

struct SolverConfig {
  int restarts = 4;
  int max_outer_iters = 200;
  double step_init = 1.0;
  double step_shrink = 0.5;
  double step_grow = 1.5;
  double grad_tol = 1e-5;    // envelope stationarity, relative to max(1, |m|)
  double newton_tol = 1e-10; // refinement residual target
  std::uint64_t seed = 1;
  int plateau_tangents = 10;
  FiberTolerances fiber;
};

enum class SolveStatus { Ok, AllFibersUnbounded, NoDescent };

std::string to_string(SolveStatus s);

struct Candidate {
  SolveStatus status = SolveStatus::Ok;
  Eigen::VectorXd direction;  // unit direction e
  Eigen::VectorXd point;      // s_star * e
  FiberProfile fiber;
  double value = 0.0;         // functional value at point
  bool refined = false;
  double residual_norm = std::numeric_limits<double>::infinity();
  int restart_index = -1;
  int outer_iters = 0;
  int newton_iters = 0;
  std::string note;
};

// Projected-gradient descent of m(e) = max_s Phi(s e) over the unit sphere
// (dual case: restricted to the negative cone), best over seeded restarts.
Candidate minimize_sphere(const FunctionalOps& ops, const SolverConfig& config);

// Damped Newton on the full coefficient-space gradient, starting from the
// sphere-search candidate. Returns the input unrefined (with a note) on
// divergence.
Candidate newton_refine(const FunctionalOps& ops, const Candidate& candidate,
                        const SolverConfig& config);

// Orbit recovery for the dual route: x = J Pi(u) + xi with xi the time
// average of G'(u); at a critical point x(t) = G'(u(t)) pointwise and x
// solves zdot = J H'(z).
struct RecoveredOrbit {
  DualFieldCoeffs mean_zero_part;  // coefficients of J Pi(u)
  Eigen::VectorXd xi;
  Eigen::MatrixXd x_samples;  // M x 2n, on the context grid
  Eigen::MatrixXd v_samples;  // xdot = J u
  double consistency_sup = 0.0;  // sup |x - G'(u)|
  bool accepted = false;
};

RecoveredOrbit recover_orbit(const DualActionContext& ctx, const Candidate& candidate,
                             double consistency_tol = 1e-4);

// m(e) as a function of an (unnormalized) coefficient direction: normalizes,
// profiles the fiber and returns the max value, or NaN when the fiber is
// unbounded / the direction is infeasible. Copies ops, so the closure owns
// everything it needs.
std::function<double(const Eigen::VectorXd&)> fiber_max_fn(const FunctionalOps& ops,
                                                           const FiberTolerances& tol = {});

}  // namespace minper
