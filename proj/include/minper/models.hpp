#pragma once

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <string>

namespace minper {

using ScalarField = std::function<double(const Eigen::VectorXd&)>;
using VectorField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using MatrixField = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

// Potential V for the second order system xddot + V'(x) = 0.
// V(0) = 0 is enforced at construction; hess falls back to central
// differences of grad when no analytic form is supplied.
struct PotentialModel {
  std::string name;
  std::map<std::string, double> params;
  int dim = 1;
  ScalarField eval;
  VectorField grad;
  MatrixField hess;
  bool claims_even = false;
};

// Hamiltonian H for the first order system zdot = J H'(z).
struct HamiltonianModel {
  std::string name;
  std::map<std::string, double> params;
  int dim = 2;  // 2n
  ScalarField eval;
  VectorField grad;
  bool claims_strictly_convex = false;
  double growth_beta = 0.0;  // declared superquadratic exponent; 0 = unknown
};

// Central finite differences, step h = step_scale * (1 + |x|) per component.
Eigen::VectorXd fd_gradient(const ScalarField& f, const Eigen::VectorXd& x,
                            double step_scale = 1e-6);
Eigen::MatrixXd fd_jacobian(const VectorField& f, const Eigen::VectorXd& x,
                            double step_scale = 1e-5);

// Built-in families. Potentials: power (|x|^beta / beta, beta > 2),
// log_quadratic (|x|^2 (ln(1+|x|^p))^q), quadratic (omega^2 |x|^2 / 2,
// negative control), anisotropic_power (sum_d lambda_d |x_d|^beta / beta).
// Hamiltonians: power and anisotropic_power with beta > 2.
PotentialModel builtin_potential(const std::string& name,
                                 const std::map<std::string, double>& params, int dim);
HamiltonianModel builtin_hamiltonian(const std::string& name,
                                     const std::map<std::string, double>& params, int dim);

// Gradient-vs-finite-difference self test at deterministic random points;
// throws on mismatch beyond rel_tol. Builtins run this at construction.
void validate_gradient(const ScalarField& f, const VectorField& g, int dim,
                       double rel_tol = 1e-6, int points = 20, unsigned seed = 7);

struct GrowthFit {
  double exponent = 0.0;  // log-log slope over the radius ladder
  double c_lo = 0.0;      // min of f / r^exponent over samples
  double c_hi = 0.0;      // max of f / r^exponent over samples
  bool finite = true;
};

// Fits f(r e) ~ c r^p over a geometric radius ladder and sampled unit
// directions; used for the superquadratic growth audits and for the
// radial initial guess of the conjugate solver.
GrowthFit fit_growth_exponent(const ScalarField& f, int dim, double r_lo = 1e1,
                              double r_hi = 1e4, int ladder = 7, int directions = 16,
                              unsigned seed = 11);

// Deterministic unit directions (first one radial along (1,0,...)).
std::vector<Eigen::VectorXd> unit_directions(int dim, int count, unsigned seed);

}  // namespace minper
