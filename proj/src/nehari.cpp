#include "minper/nehari.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace minper {

FunctionalOps direct_ops(const DirectActionContext& ctx) {
  FunctionalOps ops;
  ops.dim = ctx.space.coeff_count();
  ops.kind = FiberKind::Direct;
  const DirectActionContext c = ctx;
  ops.value = [c](const Eigen::VectorXd& v) { return direct_action(c, unflatten(v, c.space)); };
  ops.gradient = [c](const Eigen::VectorXd& v) {
    return direct_gradient(c, unflatten(v, c.space));
  };
  ops.hessian = [c](const Eigen::VectorXd& v) {
    return direct_hessian(c, unflatten(v, c.space));
  };
  ops.norm = [c](const Eigen::VectorXd& v) { return h1_seminorm(c.space, unflatten(v, c.space)); };
  ops.metric_diag.resize(ops.dim);
  for (int d = 0; d < c.space.dim; ++d)
    for (int b = 0; b < c.space.basis_size(); ++b)
      ops.metric_diag[b + d * c.space.basis_size()] = c.kinetic_diag[b];
  return ops;
}

FunctionalOps dual_ops(const DualActionContext& ctx, double tol_cone) {
  FunctionalOps ops;
  ops.dim = ctx.space.coeff_count();
  ops.kind = FiberKind::Dual;
  const DualActionContext c = ctx;
  const double alpha = ctx.pair.alpha;
  ops.value = [c](const Eigen::VectorXd& v) { return dual_action(c, unflatten(v, c.space)); };
  ops.gradient = [c](const Eigen::VectorXd& v) {
    return dual_gradient(c, unflatten(v, c.space));
  };
  ops.norm = [c, alpha](const Eigen::VectorXd& v) {
    return lalpha_norm(c.space, unflatten(v, c.space), alpha);
  };
  ops.cone = [c, alpha, tol_cone](const Eigen::VectorXd& v) {
    return cone_classify(DualFieldCoeffs{c.space, unflatten(v, c.space)}, alpha, tol_cone);
  };
  ops.quad_form = [c](const Eigen::VectorXd& v) {
    return quadratic_form_a(DualFieldCoeffs{c.space, unflatten(v, c.space)});
  };
  return ops;
}

FiberProblem make_fiber(const FunctionalOps& ops, const Eigen::VectorXd& e) {
  FiberProblem p;
  p.kind = ops.kind;
  p.kappa = (ops.kind == FiberKind::Direct) ? 1.0 : ops.quad_form(e);
  p.phi = [&ops, e](double s) { return ops.value(s * e); };
  p.dphi = [&ops, e](double s) { return ops.gradient(s * e).dot(e); };
  p.dir_deriv = [&ops, e](double s, const Eigen::VectorXd& v) {
    return ops.gradient(s * e).dot(v);
  };
  return p;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Ok: return "OK";
    case SolveStatus::AllFibersUnbounded: return "ALL_FIBERS_UNBOUNDED";
    case SolveStatus::NoDescent: return "NO_DESCENT";
  }
  return "?";
}

namespace {

Eigen::VectorXd random_direction(const FunctionalOps& ops, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int attempt = 0; attempt < 64; ++attempt) {
    Eigen::VectorXd v(ops.dim);
    for (int i = 0; i < ops.dim; ++i) v[i] = normal(rng);
    const double n = ops.norm(v);
    if (!(n > 1e-12)) continue;
    v /= n;
    if (ops.cone && ops.cone(v) != ConeClass::Minus) continue;
    return v;
  }
  throw std::runtime_error("minimize_sphere: could not draw a feasible start direction");
}

// Envelope gradient of m at e; on plateaus falls back to finite differences
// of m over a random tangent sample (m is ray-invariant, so no retraction is
// needed inside the differences).
Eigen::VectorXd envelope_gradient(const FunctionalOps& ops, const Eigen::VectorXd& e,
                                  const FiberProfile& prof, const SolverConfig& cfg,
                                  std::mt19937_64& rng) {
  if (!prof.plateau) return prof.s_star * ops.gradient(prof.s_star * e);

  std::normal_distribution<double> normal(0.0, 1.0);
  const int k = std::min(cfg.plateau_tangents, ops.dim - 1);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(ops.dim);
  const double h = 1e-5;
  for (int j = 0; j < k; ++j) {
    Eigen::VectorXd v(ops.dim);
    for (int i = 0; i < ops.dim; ++i) v[i] = normal(rng);
    v -= v.dot(e) / e.squaredNorm() * e;
    const double n = v.norm();
    if (!(n > 1e-12)) continue;
    v /= n;
    const auto value_at = [&](const Eigen::VectorXd& w) {
      FiberProblem p = make_fiber(ops, w / ops.norm(w));
      return fiber_profile(p, cfg.fiber).value;
    };
    const double slope = (value_at(e + h * v) - value_at(e - h * v)) / (2.0 * h);
    g += slope * v;
  }
  return g;
}

struct RestartOutcome {
  bool feasible = false;
  bool unbounded = false;
  Candidate candidate;
};

RestartOutcome run_restart(const FunctionalOps& ops, const SolverConfig& cfg,
                           int restart_index) {
  std::mt19937_64 rng(cfg.seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(restart_index));
  RestartOutcome out;

  Eigen::VectorXd e;
  try {
    e = random_direction(ops, rng);
  } catch (const std::exception&) {
    return out;
  }

  FiberProfile prof = fiber_profile(make_fiber(ops, e), cfg.fiber);
  if (prof.status == FiberStatus::NoSignChange) {
    out.unbounded = true;
    return out;
  }
  double m = prof.value;
  double step = cfg.step_init;
  bool stalled = false;
  int outer = 0;

  for (; outer < cfg.max_outer_iters; ++outer) {
    const Eigen::VectorXd g = envelope_gradient(ops, e, prof, cfg, rng);
    const double gnorm = g.norm();
    if (gnorm <= cfg.grad_tol * std::max(1.0, std::abs(m))) break;

    Eigen::VectorXd dir = -g;
    if (ops.metric_diag.size() == ops.dim)
      dir = (-g.array() / ops.metric_diag.array()).matrix();
    const double slope = g.dot(dir);  // negative by construction

    bool accepted = false;
    double t = step;
    for (int ls = 0; ls < 48 && !accepted; ++ls, t *= cfg.step_shrink) {
      Eigen::VectorXd trial = e + t * dir;
      const double n = ops.norm(trial);
      if (!(n > 1e-12)) continue;
      trial /= n;
      if (ops.cone && ops.cone(trial) != ConeClass::Minus) continue;
      FiberProfile trial_prof = fiber_profile(make_fiber(ops, trial), cfg.fiber);
      if (trial_prof.status == FiberStatus::NoSignChange) continue;
      if (trial_prof.value <= m + 1e-4 * t * slope) {
        e = trial;
        prof = trial_prof;
        m = trial_prof.value;
        step = t * cfg.step_grow;
        accepted = true;
      }
    }
    if (!accepted) {
      stalled = true;
      break;
    }
  }

  out.feasible = true;
  out.candidate.status = stalled ? SolveStatus::NoDescent : SolveStatus::Ok;
  out.candidate.direction = e;
  out.candidate.point = prof.s_star * e;
  out.candidate.fiber = prof;
  out.candidate.value = m;
  out.candidate.restart_index = restart_index;
  out.candidate.outer_iters = outer;
  if (stalled) out.candidate.note = "line search stalled above grad_tol";
  return out;
}

}  // namespace

Candidate minimize_sphere(const FunctionalOps& ops, const SolverConfig& config) {
  if (config.restarts < 1)
    throw std::invalid_argument("minimize_sphere: need at least one restart");

  bool any_feasible = false;
  Candidate best;
  for (int r = 0; r < config.restarts; ++r) {
    const RestartOutcome out = run_restart(ops, config, r);
    if (!out.feasible) continue;
    // Strict comparison keeps the lowest restart index on ties.
    if (!any_feasible || out.candidate.value < best.value) best = out.candidate;
    any_feasible = true;
  }
  if (!any_feasible) {
    best.status = SolveStatus::AllFibersUnbounded;
    best.note = "every restart hit NO_SIGN_CHANGE (superquadratic growth fails?)";
  }
  return best;
}

Candidate newton_refine(const FunctionalOps& ops, const Candidate& candidate,
                        const SolverConfig& config) {
  Candidate out = candidate;
  Eigen::VectorXd x = candidate.point;
  Eigen::VectorXd g = ops.gradient(x);
  double res = g.norm();
  out.residual_norm = res;
  if (res <= config.newton_tol) {
    out.refined = true;
    out.newton_iters = 0;
    out.value = ops.value(x);
    return out;
  }

  int grow_streak = 0;
  int iter = 0;
  for (; iter < 60 && res > config.newton_tol; ++iter) {
    const Eigen::MatrixXd hess =
        ops.hessian ? ops.hessian(x) : fd_jacobian(ops.gradient, x, 1e-7);
    Eigen::VectorXd delta = hess.partialPivLu().solve(-g);
    if (!delta.allFinite()) delta = -g;

    double t = 1.0;
    double best_res = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_x = x;
    Eigen::VectorXd best_g = g;
    for (int h = 0; h < 30; ++h, t *= 0.5) {
      const Eigen::VectorXd trial = x + t * delta;
      const Eigen::VectorXd gt = ops.gradient(trial);
      const double rt = gt.norm();
      if (rt < best_res) {
        best_res = rt;
        best_x = trial;
        best_g = gt;
      }
      if (rt < res) break;
    }
    if (best_res >= res) {
      if (++grow_streak >= 5) {
        out.refined = false;
        out.note = "newton refinement diverged; returning unrefined candidate";
        out.newton_iters = iter + 1;
        return out;
      }
    } else {
      grow_streak = 0;
    }
    x = best_x;
    g = best_g;
    res = best_res;
  }

  out.newton_iters = iter;
  out.residual_norm = res;
  if (res <= config.newton_tol) {
    out.refined = true;
    out.point = x;
    const double n = ops.norm(x);
    if (n > 0.0) out.direction = x / n;
    out.value = ops.value(x);
  } else {
    out.refined = false;
    out.note = "newton refinement did not reach the residual target";
  }
  return out;
}

std::function<double(const Eigen::VectorXd&)> fiber_max_fn(const FunctionalOps& ops,
                                                           const FiberTolerances& tol) {
  return [ops, tol](const Eigen::VectorXd& direction) -> double {
    const double n = ops.norm(direction);
    if (!(n > 1e-14)) return std::numeric_limits<double>::quiet_NaN();
    const Eigen::VectorXd e = direction / n;
    if (ops.cone && ops.cone(e) != ConeClass::Minus)
      return std::numeric_limits<double>::quiet_NaN();
    const FiberProfile prof = fiber_profile(make_fiber(ops, e), tol);
    if (prof.status == FiberStatus::NoSignChange)
      return std::numeric_limits<double>::quiet_NaN();
    return prof.value;
  };
}

RecoveredOrbit recover_orbit(const DualActionContext& ctx, const Candidate& candidate,
                             double consistency_tol) {
  const Eigen::MatrixXd ucoeffs = unflatten(candidate.point, ctx.space);
  if (ucoeffs.cwiseAbs().maxCoeff() == 0.0)
    throw std::invalid_argument("recover_orbit: zero dual field is not a candidate");

  const DualFieldCoeffs u{ctx.space, ucoeffs};
  DualFieldCoeffs jpiu = pi_operator(u);
  // Coefficient rows are vectors in R^{2n}; rotating them by J rotates the field.
  jpiu.coeffs = apply_j_rows(jpiu.coeffs);
  RecoveredOrbit orbit{jpiu, Eigen::VectorXd(), Eigen::MatrixXd(), Eigen::MatrixXd(), 0.0,
                       false};

  const QuadratureGrid& grid = ctx.grid;
  const SampledField uf = synthesize(ctx.space, ucoeffs, grid);
  Eigen::MatrixXd gprime(grid.size(), ctx.space.dim);
  for (int i = 0; i < grid.size(); ++i)
    gprime.row(i) = ctx.pair.conj_grad(uf.values.row(i).transpose()).transpose();

  orbit.xi = gprime.colwise().mean().transpose();
  const SampledField jp = synthesize(ctx.space, orbit.mean_zero_part.coeffs, grid);
  orbit.x_samples = jp.values;
  orbit.x_samples.rowwise() += orbit.xi.transpose();
  orbit.v_samples = apply_j_rows(uf.values);
  orbit.consistency_sup = (orbit.x_samples - gprime).cwiseAbs().maxCoeff();
  orbit.accepted = orbit.consistency_sup <= consistency_tol;
  return orbit;
}

}  // namespace minper
