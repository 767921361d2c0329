#include "minper/action.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace minper {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void cache_basis(const SpaceConfig& space, const QuadratureGrid& grid,
                 Eigen::MatrixXd& values, Eigen::MatrixXd& derivs) {
  const int m = grid.size();
  values.resize(m, space.basis_size());
  derivs.resize(m, space.basis_size());
  for (int b = 0; b < space.basis_size(); ++b) {
    const BasisMode& mode = space.basis[static_cast<size_t>(b)];
    const double omega = space.omega(b);
    for (int i = 0; i < m; ++i) {
      const double arg = omega * grid.times[i];
      const double c = std::cos(arg);
      const double s = std::sin(arg);
      values(i, b) = mode.sine ? s : c;
      derivs(i, b) = mode.sine ? omega * c : -omega * s;
    }
  }
}

}  // namespace

DirectActionContext make_direct_context(const SpaceConfig& space,
                                        const PotentialModel& potential) {
  if (potential.dim != space.dim)
    throw std::invalid_argument("make_direct_context: dimension mismatch");
  if (space.symmetry == SymmetryClass::FullMeanZero)
    throw std::invalid_argument("make_direct_context: trajectory space required");
  DirectActionContext ctx;
  ctx.space = space;
  ctx.grid = make_grid(space);
  ctx.potential = potential;
  cache_basis(space, ctx.grid, ctx.basis_values, ctx.basis_derivs);
  ctx.kinetic_diag.resize(space.basis_size());
  for (int b = 0; b < space.basis_size(); ++b) {
    const double w = space.omega(b);
    ctx.kinetic_diag[b] = w * w * space.period / 2.0;
  }
  return ctx;
}

double direct_action(const DirectActionContext& ctx, const Eigen::MatrixXd& coeffs) {
  double kinetic = 0.0;
  for (int b = 0; b < ctx.space.basis_size(); ++b)
    kinetic += 0.5 * ctx.kinetic_diag[b] * coeffs.row(b).squaredNorm();

  const Eigen::MatrixXd x = ctx.basis_values * coeffs;  // M x dim
  double pot = 0.0;
  for (int i = 0; i < ctx.grid.size(); ++i) {
    const double v = ctx.potential.eval(x.row(i).transpose());
    if (!std::isfinite(v)) throw std::runtime_error("direct_action: V not finite");
    pot += ctx.grid.weight * v;
  }
  return kinetic - pot;
}

Eigen::VectorXd direct_gradient(const DirectActionContext& ctx,
                                const Eigen::MatrixXd& coeffs) {
  const Eigen::MatrixXd x = ctx.basis_values * coeffs;
  Eigen::MatrixXd vprime(ctx.grid.size(), ctx.space.dim);
  for (int i = 0; i < ctx.grid.size(); ++i) {
    const Eigen::VectorXd g = ctx.potential.grad(x.row(i).transpose());
    if (!g.allFinite()) throw std::runtime_error("direct_gradient: V' not finite");
    vprime.row(i) = g.transpose();
  }
  Eigen::MatrixXd grad = ctx.kinetic_diag.asDiagonal() * coeffs;
  grad -= ctx.grid.weight * (ctx.basis_values.transpose() * vprime);
  return flatten(grad);
}

Eigen::MatrixXd direct_hessian(const DirectActionContext& ctx,
                               const Eigen::MatrixXd& coeffs) {
  const int nb = ctx.space.basis_size();
  const int dim = ctx.space.dim;
  const int n = nb * dim;
  const Eigen::MatrixXd x = ctx.basis_values * coeffs;
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n, n);
  for (int b = 0; b < nb; ++b)
    for (int d = 0; d < dim; ++d) hess(b + d * nb, b + d * nb) = ctx.kinetic_diag[b];
  for (int i = 0; i < ctx.grid.size(); ++i) {
    const Eigen::MatrixXd vpp = ctx.potential.hess(x.row(i).transpose());
    for (int d = 0; d < dim; ++d)
      for (int e = 0; e < dim; ++e) {
        const double w = ctx.grid.weight * vpp(d, e);
        if (w == 0.0) continue;
        for (int b = 0; b < nb; ++b)
          for (int c = 0; c < nb; ++c)
            hess(b + d * nb, c + e * nb) -=
                w * ctx.basis_values(i, b) * ctx.basis_values(i, c);
      }
  }
  return hess;
}

Eigen::VectorXd apply_j(const Eigen::VectorXd& z) {
  const Eigen::Index n2 = z.size();
  if (n2 % 2 != 0) throw std::invalid_argument("apply_j: odd dimension");
  const Eigen::Index n = n2 / 2;
  Eigen::VectorXd out(n2);
  out.head(n) = z.tail(n);
  out.tail(n) = -z.head(n);
  return out;
}

Eigen::MatrixXd apply_j_rows(const Eigen::MatrixXd& rows) {
  const Eigen::Index n2 = rows.cols();
  if (n2 % 2 != 0) throw std::invalid_argument("apply_j_rows: odd dimension");
  const Eigen::Index n = n2 / 2;
  Eigen::MatrixXd out(rows.rows(), n2);
  out.leftCols(n) = rows.rightCols(n);
  out.rightCols(n) = -rows.leftCols(n);
  return out;
}

double quadratic_form_a(const DualFieldCoeffs& u, const DualFieldCoeffs& v) {
  if (u.space.num_modes != v.space.num_modes || u.space.dim != v.space.dim ||
      std::abs(u.space.period - v.space.period) > 1e-14 * u.space.period)
    throw std::invalid_argument("quadratic_form_a: space mismatch");
  const double T = u.space.period;
  double acc = 0.0;
  for (int k = 1; k <= u.space.num_modes; ++k) {
    const Eigen::VectorXd cu = u.coeffs.row(2 * k - 2).transpose();
    const Eigen::VectorXd su = u.coeffs.row(2 * k - 1).transpose();
    const Eigen::VectorXd cv = v.coeffs.row(2 * k - 2).transpose();
    const Eigen::VectorXd sv = v.coeffs.row(2 * k - 1).transpose();
    const double block = apply_j(cu).dot(sv) + apply_j(cv).dot(su);
    acc -= T * T / (4.0 * std::numbers::pi * k) * block;
  }
  return acc;
}

double quadratic_form_a(const DualFieldCoeffs& u) { return quadratic_form_a(u, u); }

std::string to_string(ConeClass c) {
  switch (c) {
    case ConeClass::Plus: return "P_PLUS";
    case ConeClass::Minus: return "P_MINUS";
    case ConeClass::Zero: return "P_ZERO";
  }
  return "?";
}

ConeClass cone_classify(const DualFieldCoeffs& u, double alpha, double tol_cone) {
  const double norm = lalpha_norm(u, alpha);
  if (norm == 0.0) throw std::invalid_argument("cone_classify: zero field");
  const double a = quadratic_form_a(u);
  if (std::abs(a) <= tol_cone * norm * norm) return ConeClass::Zero;
  return a > 0.0 ? ConeClass::Plus : ConeClass::Minus;
}

DualActionContext make_dual_context(const SpaceConfig& space, const FenchelPair& pair) {
  if (space.symmetry != SymmetryClass::FullMeanZero)
    throw std::invalid_argument("make_dual_context: FULL_MEANZERO space required");
  if (pair.base.dim != space.dim)
    throw std::invalid_argument("make_dual_context: dimension mismatch");
  DualActionContext ctx;
  ctx.space = space;
  ctx.grid = make_grid(space);
  ctx.pair = pair;
  Eigen::MatrixXd derivs;
  cache_basis(space, ctx.grid, ctx.basis_values, derivs);
  return ctx;
}

double dual_action(const DualActionContext& ctx, const Eigen::MatrixXd& coeffs) {
  const DualFieldCoeffs u{ctx.space, coeffs};
  double value = 0.5 * quadratic_form_a(u);
  const Eigen::MatrixXd uvals = ctx.basis_values * coeffs;
  for (int i = 0; i < ctx.grid.size(); ++i) {
    const double g = ctx.pair.conj(uvals.row(i).transpose());
    if (!std::isfinite(g)) throw std::runtime_error("dual_action: G not finite");
    value += ctx.grid.weight * g;
  }
  return value;
}

Eigen::MatrixXd euler_lagrange_field(const DualActionContext& ctx,
                                     const Eigen::MatrixXd& coeffs) {
  const DualFieldCoeffs u{ctx.space, coeffs};
  const DualFieldCoeffs piu = pi_operator(u);
  const Eigen::MatrixXd uvals = ctx.basis_values * coeffs;
  const Eigen::MatrixXd jpiu = apply_j_rows(ctx.basis_values * piu.coeffs);
  Eigen::MatrixXd field(ctx.grid.size(), ctx.space.dim);
  for (int i = 0; i < ctx.grid.size(); ++i) {
    const Eigen::VectorXd gp = ctx.pair.conj_grad(uvals.row(i).transpose());
    if (!gp.allFinite())
      throw std::runtime_error("euler_lagrange_field: G' not finite");
    field.row(i) = gp.transpose() - jpiu.row(i);
  }
  field.rowwise() -= field.colwise().mean();
  return field;
}

Eigen::VectorXd dual_gradient(const DualActionContext& ctx, const Eigen::MatrixXd& coeffs) {
  const Eigen::MatrixXd field = euler_lagrange_field(ctx, coeffs);
  const Eigen::MatrixXd grad = ctx.grid.weight * (ctx.basis_values.transpose() * field);
  return flatten(grad);
}

}  // namespace minper
