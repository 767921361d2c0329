#pragma once

#include "minper/fenchel.hpp"
#include "minper/fourier.hpp"
#include "minper/models.hpp"

namespace minper {

// Evaluation context for the direct action
//   psi(x) = 1/2 int |xdot|^2 dt - int V(x) dt
// on a symmetric trajectory space. Basis samples are cached so repeated
// evaluations along fibers stay cheap.
struct DirectActionContext {
  SpaceConfig space;
  QuadratureGrid grid;
  PotentialModel potential;
  Eigen::MatrixXd basis_values;  // M x basis
  Eigen::MatrixXd basis_derivs;
  Eigen::VectorXd kinetic_diag;  // omega_b^2 * T/2 per basis mode
};

DirectActionContext make_direct_context(const SpaceConfig& space,
                                        const PotentialModel& potential);

double direct_action(const DirectActionContext& ctx, const Eigen::MatrixXd& coeffs);
// Gradient with respect to raw coefficients (column-major flattening).
Eigen::VectorXd direct_gradient(const DirectActionContext& ctx,
                                const Eigen::MatrixXd& coeffs);
Eigen::MatrixXd direct_hessian(const DirectActionContext& ctx,
                               const Eigen::MatrixXd& coeffs);

// Standard symplectic matrix applied to a vector in R^{2n}:
// J (p, q) = (q, -p) blockwise.
Eigen::VectorXd apply_j(const Eigen::VectorXd& z);
Eigen::MatrixXd apply_j_rows(const Eigen::MatrixXd& rows);

// a(u, v) = int (J u, Pi v) dt, computed spectrally. The form is symmetric
// and block-diagonal across raw frequencies: with cosine/sine coefficient
// vectors (c_k, s_k) the diagonal value is -(T^2 / (2 pi k)) (J c_k) . s_k.
double quadratic_form_a(const DualFieldCoeffs& u, const DualFieldCoeffs& v);
double quadratic_form_a(const DualFieldCoeffs& u);

enum class ConeClass { Plus, Minus, Zero };
std::string to_string(ConeClass c);

// Sign of a(u, u) with dead-band |a| <= tol_cone * ||u||_alpha^2.
ConeClass cone_classify(const DualFieldCoeffs& u, double alpha, double tol_cone = 1e-10);

// Clarke dual action Phi(u) = 1/2 a(u, u) + int G(u) dt on mean-zero fields.
struct DualActionContext {
  SpaceConfig space;
  QuadratureGrid grid;
  FenchelPair pair;
  Eigen::MatrixXd basis_values;
};

DualActionContext make_dual_context(const SpaceConfig& space, const FenchelPair& pair);

double dual_action(const DualActionContext& ctx, const Eigen::MatrixXd& coeffs);
Eigen::VectorXd dual_gradient(const DualActionContext& ctx, const Eigen::MatrixXd& coeffs);

// The pointwise Euler-Lagrange field G'(u) - J Pi u minus its time average;
// vanishes on the grid exactly at critical points of Phi.
Eigen::MatrixXd euler_lagrange_field(const DualActionContext& ctx,
                                     const Eigen::MatrixXd& coeffs);

}  // namespace minper
