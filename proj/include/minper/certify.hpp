#pragma once

#include "minper/nehari.hpp"

#include <vector>

namespace minper {

// Residuals are reported both raw (sup norm over the grid) and relative to
// the natural force scale of the orbit, so verdicts are invariant under the
// amplitude rescaling that maps period T solutions to period T/lambda ones.
struct ResidualReport {
  double sup = 0.0;
  double scale = 1.0;  // max(1, sup |V'(x)|) resp. max(1, sup |H'(x)|)
  double rel = 0.0;
};

// |xddot + V'(x)| over the grid; xddot comes from spectral differentiation.
ResidualReport ode_residual_direct(const DirectActionContext& ctx,
                                   const Eigen::MatrixXd& coeffs);
// |xdot - J H'(x)| over the grid for a recovered first order orbit.
ResidualReport ode_residual_dual(const HamiltonianModel& model,
                                 const Eigen::MatrixXd& x_samples,
                                 const Eigen::MatrixXd& v_samples);

struct EnergyReport {
  double drift = 0.0;  // max_t |E(t) - E(0)|, E = 1/2 |xdot|^2 + V(x)
  double e0 = 0.0;
  double rel = 0.0;    // drift / max(1, |E(0)|)
};

EnergyReport energy_drift(const PotentialModel& model, const Eigen::MatrixXd& x_samples,
                          const Eigen::MatrixXd& v_samples);

struct SubperiodCheck {
  int k = 0;
  double violation = 0.0;  // sup_t |x(t + T/k) - x(t)| / amplitude
  bool rejected = false;
};

struct CompressionMargin {
  int k = 0;
  double margin = 0.0;  // fiber max of the k-compressed candidate minus the action
  bool positive = false;
  bool degenerate = false;  // compression projected to (numerically) nothing
};

struct MinimalPeriodReport {
  bool certified = false;
  bool indeterminate = false;  // coefficient mass too close to tol_mass
  double period_T = 0.0;       // the period being certified
  int gcd = 0;
  std::vector<int> active_freqs;
  std::vector<SubperiodCheck> subperiods;
  std::vector<CompressionMargin> compression_margins;
  double amplitude = 0.0;
  std::string note;
};

struct MinimalPeriodOptions {
  double tol_mass = 1e-8;  // relative coefficient mass defining an active frequency
  double tol_sub = 1e-3;   // subperiod rejection threshold, relative to amplitude
  int max_k = 8;
};

// Two independent checks, both required: (a) the gcd of active raw
// frequencies is 1, and (b) every proper subperiod T/k is rejected in the
// time domain. Optionally audits the rescaling margin: the fiber maximum of
// the k-compressed candidate t -> x(t/k), projected back onto the space,
// must exceed the candidate's action, which is what forbids k-fold iterates.
// For dual candidates pass the recovered orbit as coeffs and the dual field
// as fiber_coeffs (the Phi-fibers live on the field, the period on the orbit).
MinimalPeriodReport minimal_period_certificate(
    const SpaceConfig& space, const Eigen::MatrixXd& coeffs,
    const MinimalPeriodOptions& opts = {},
    const std::function<double(const Eigen::VectorXd&)>& fiber_max = nullptr,
    double action_value = 0.0, const Eigen::MatrixXd& fiber_coeffs = {});

struct InfMaxAudit {
  int rays = 0;
  double min_margin = 0.0;  // min over rays of m(e) - Phi(candidate)
  double self_gap = 0.0;    // |m(e_candidate) - Phi(candidate)|
};

InfMaxAudit infmax_audit(const FunctionalOps& ops, const Candidate& candidate,
                         int n_rays, std::uint64_t seed,
                         const FiberTolerances& tol = {});

enum class Verdict { Pass, Fail, Inconclusive };

std::string to_string(Verdict v);

struct ConditionEntry {
  std::string id;
  Verdict verdict = Verdict::Inconclusive;
  double margin = 0.0;
  std::string note;
  Eigen::VectorXd witness;
  double witness_value = 0.0;
};

struct ConditionReport {
  std::string family;  // "potential" or "hamiltonian"
  std::vector<ConditionEntry> entries;
  bool all_pass = false;

  const ConditionEntry* find(const std::string& id) const;
};

struct SamplingPlan {
  double r_small_lo = 1e-8, r_small_hi = 1e-1;  // ladder for the origin limits
  double r_large_lo = 1e1, r_large_hi = 1e6;    // ladder for the growth limits
  int ladder_steps = 8;
  int directions = 32;
  int interior_points = 200;
  double interior_radius = 10.0;
  int s_grid = 64;  // geometric s-grid for the monotone-ratio audits
  unsigned seed = 2024;
  double ratio_threshold = 1e3;  // strong-pass threshold for the infinity limits
  double ratio_growth_min = 2.0; // minimum ladder growth factor for a trend pass
  double eps_small = 1e-3;       // pass threshold for the vanishing limits
};

// (V1) V/|x|^2 -> 0, (V2) V/|x|^2 -> inf, (V3) 0 < V'.x <= V''x.x,
// (V4) evenness. Limits are audited by ladder trends with explicit
// thresholds; verdicts degrade to Inconclusive when the trend is right but
// the threshold is not met.
ConditionReport check_potential_conditions(const PotentialModel& model,
                                           const SamplingPlan& plan = {});

// (H1) H/|x|^2 -> 0, (H2) superquadratic sandwich with fitted beta, strict
// convexity by midpoint tests, (H3) s -> G'(sy).y / s non-increasing, plus
// the derived (G1) G/|y|^2 -> inf and (G2) sandwich with the conjugate
// exponent.
ConditionReport check_hamiltonian_conditions(const FenchelPair& pair,
                                             const SamplingPlan& plan = {});

struct Certificate {
  bool certified = false;
  ResidualReport ode;
  bool has_energy = false;
  EnergyReport energy;
  MinimalPeriodReport period;
  InfMaxAudit infmax;
  double truncation_agreement = 0.0;  // relative action change at doubled modes
  std::vector<std::string> failures;
};

struct CertificateGates {
  double ode_rel = 1e-6;
  double energy_rel = 1e-6;
  double infmax_margin = -1e-5;
  double truncation = 1e-4;
};

// Applies the gates and fills certified/failures.
void finalize_certificate(Certificate& cert, const CertificateGates& gates = {});

}  // namespace minper
