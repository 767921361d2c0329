#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>

namespace minper {

enum class FiberKind { Direct, Dual };

// Restriction of a functional to the ray through a unit direction e:
// phi(s) = Phi(s e). Both cases share the structure phi'(s) = s (kappa + r(s))
// with kappa = +1 (direct, from the quadratic norm term) or kappa = a(e, e)
// (dual), and a ratio r(s) that is monotone under the model hypotheses, so
// g(s) = phi'(s)/s is non-increasing and the critical set of phi on (0, inf)
// is a point or a bounded interval.
struct FiberProblem {
  FiberKind kind = FiberKind::Direct;
  double kappa = 1.0;
  std::function<double(double)> phi;
  std::function<double(double)> dphi;
  // Directional derivative <Phi'(s e), v> in coefficient space; may be null
  // for synthetic scalar problems (envelope_derivative then unavailable).
  std::function<double(double, const Eigen::VectorXd&)> dir_deriv;
};

enum class FiberStatus {
  Ok,
  NoSignChange,      // phi' never turns negative: superquadratic growth fails
  NonMonotoneRatio,  // ratio inversion beyond slack: weak Nehari condition fails
};

std::string to_string(FiberStatus s);

struct FiberProfile {
  FiberStatus status = FiberStatus::Ok;
  double s_lo = 0.0;      // positive-slope anchor
  double s_hi = 0.0;      // largest explored scale
  double crit_lo = 0.0;   // endpoints of the critical set
  double crit_hi = 0.0;
  double s_star = 0.0;    // representative maximizer (midpoint)
  double value = 0.0;     // phi(s_star)
  bool plateau = false;
  // Witness pair for a detected ratio inversion.
  double witness_s1 = 0.0, witness_s2 = 0.0;
  double witness_g1 = 0.0, witness_g2 = 0.0;
  std::string note;
};

struct FiberTolerances {
  double rel_tol = 1e-10;    // bisection resolution on the critical endpoints
  double eq_band = 1e-9;     // |g| band treated as zero, scaled by max(1, |kappa|)
  double plateau_rel = 1e-6; // plateau once crit_hi - crit_lo > plateau_rel * crit_lo
  double mono_slack = 1e-9;  // allowed ratio inversion, scaled like eq_band
  double s_init = 1.0;
  int cap_doublings = 60;
  int scan_points = 64;      // monotonicity scan resolution
};

FiberProfile fiber_profile(const FiberProblem& problem, const FiberTolerances& tol = {});

// (phi(s), phi'(s)); throws for s < 0.
std::pair<double, double> fiber_value_at(const FiberProblem& problem, double s);

// Envelope derivative of m(e) = max_s Phi(s e) along a tangent v:
// s_star * <Phi'(s_star e), v>. Empty on plateaus (no classical derivative).
std::optional<double> envelope_derivative(const FiberProblem& problem,
                                          const FiberProfile& profile,
                                          const Eigen::VectorXd& v);

struct RatioCertificate {
  bool monotone = true;
  double worst_violation = 0.0;  // in the ratio's own orientation
  double witness_s1 = 0.0, witness_s2 = 0.0;
  int samples = 0;
};

// Samples the ratio r(s) on a geometric grid and checks the expected
// monotonicity (non-decreasing direct, non-increasing dual) within slack.
RatioCertificate ratio_certificate(const FiberProblem& problem, double s_min,
                                   double s_max, int points = 64,
                                   double slack = 1e-9);

}  // namespace minper
