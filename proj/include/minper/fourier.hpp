#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace minper {

// Symmetry classes of T-periodic trajectories. All four have zero time-average,
// so the H1 seminorm is a norm on them.
//
//   E1           even about t = 0 and t = T/2, odd about t = T/4 and t = 3T/4
//   E2           x(t + T/2) = -x(t)
//   E3           x(-t) = -x(t)
//   FullMeanZero all nonzero frequencies (used for dual fields on R^{2n})
enum class SymmetryClass { E1, E2, E3, FullMeanZero };

std::string to_string(SymmetryClass c);
SymmetryClass symmetry_class_from_string(const std::string& s);

// One scalar basis function: cos(2*pi*freq*t/T) or sin(2*pi*freq*t/T).
struct BasisMode {
  int freq = 0;
  bool sine = false;
};

struct SpaceConfig {
  double period = 1.0;
  int dim = 1;
  SymmetryClass symmetry = SymmetryClass::E1;
  int num_modes = 1;   // truncation level in the class's own mode index
  int grid_points = 64;
  std::vector<BasisMode> basis;

  int basis_size() const { return static_cast<int>(basis.size()); }
  int coeff_count() const { return basis_size() * dim; }
  int max_freq() const;
  double omega(int basis_index) const;  // angular frequency 2*pi*freq/T
};

// Builds the frequency table and picks grid_points = max(64, 8 * max_freq).
// Runs a symmetry self-test on every basis function (the E1 basis of
// odd-frequency cosines is verified against the defining reflection
// identities, not assumed).
SpaceConfig make_space(double period_T, int dim_N, SymmetryClass symmetry, int num_modes);

// Uniform periodic grid t_i = i*T/M with rectangle weights T/M. Spectrally
// accurate for smooth periodic integrands and exact for band-limited ones
// of degree < M.
struct QuadratureGrid {
  double period = 1.0;
  double weight = 0.0;
  Eigen::VectorXd times;

  int size() const { return static_cast<int>(times.size()); }
};

QuadratureGrid make_grid(double period, int points);
QuadratureGrid make_grid(const SpaceConfig& space);

// Coefficients of a trajectory in a symmetry-constrained basis.
// coeffs(b, d) multiplies basis mode b in state component d.
struct TrajectoryCoeffs {
  SpaceConfig space;
  Eigen::MatrixXd coeffs;
};

// Mean-zero Fourier coefficients of a dual field u in L^alpha([0,T]; R^{2n}).
// space.symmetry must be FullMeanZero and space.dim even. Basis ordering is
// (cos_1, sin_1, cos_2, sin_2, ...).
struct DualFieldCoeffs {
  SpaceConfig space;
  Eigen::MatrixXd coeffs;
};

TrajectoryCoeffs make_trajectory(const SpaceConfig& space);
DualFieldCoeffs make_dual_field(const SpaceConfig& space);

// Pointwise values x(t_i) and derivatives xdot(t_i), both (M x dim).
struct SampledField {
  Eigen::MatrixXd values;
  Eigen::MatrixXd derivs;
};

SampledField synthesize(const SpaceConfig& space, const Eigen::MatrixXd& coeffs,
                        const QuadratureGrid& grid);
SampledField synthesize(const TrajectoryCoeffs& x, const QuadratureGrid& grid);
SampledField synthesize(const DualFieldCoeffs& u, const QuadratureGrid& grid);

// Evaluation at arbitrary times (not restricted to the space's grid).
Eigen::MatrixXd synthesize_at(const SpaceConfig& space, const Eigen::MatrixXd& coeffs,
                              const Eigen::VectorXd& times);

struct AnalysisResult {
  Eigen::MatrixXd coeffs;
  double residual_sup = 0.0;       // sup norm of samples - resynthesis
  Eigen::VectorXd mean_remainder;  // time average of the samples per component
};

// Least-squares projection of samples (taken on the space's own grid) onto
// the basis. Exact inverse of synthesize for representable content.
AnalysisResult analyze(const Eigen::MatrixXd& samples, const SpaceConfig& space);

// (integral of |xdot|^2)^(1/2), computed spectrally by Parseval.
double h1_seminorm(const TrajectoryCoeffs& x);
double h1_seminorm(const SpaceConfig& space, const Eigen::MatrixXd& coeffs);

// L^alpha norm by quadrature of |u(t)|^alpha. Requires alpha > 1.
double lalpha_norm(const DualFieldCoeffs& u, double alpha);
double lalpha_norm(const SpaceConfig& space, const Eigen::MatrixXd& coeffs, double alpha);

// Mean-zero antiderivative: d/dt (Pi u) = u and Pi u has zero mean.
DualFieldCoeffs pi_operator(const DualFieldCoeffs& u);

struct SymmetryIdentity {
  std::string name;
  double violation = 0.0;
};

struct SymmetryReport {
  bool pass = false;
  double max_violation = 0.0;
  std::vector<SymmetryIdentity> identities;
};

// Checks the class-defining reflection identities on uniform samples
// (M divisible by 4 required for the quarter-period identities).
SymmetryReport symmetry_check(const Eigen::MatrixXd& samples, SymmetryClass symmetry,
                              double tol);

// Column-major flattening helpers between (basis x dim) coefficient matrices
// and plain vectors used by the optimizers.
Eigen::VectorXd flatten(const Eigen::MatrixXd& coeffs);
Eigen::MatrixXd unflatten(const Eigen::VectorXd& v, const SpaceConfig& space);

// Re-expresses coefficients in a space with a different truncation level of
// the same class, period and dimension (modes absent from the target are
// dropped, new ones are zero).
Eigen::MatrixXd resize_modes(const SpaceConfig& from, const Eigen::MatrixXd& coeffs,
                             const SpaceConfig& to);

}  // namespace minper
