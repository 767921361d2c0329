#include "minper/fiber.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace minper {

namespace {

// g(s) = phi'(s)/s; non-finite values count as "past the crossing".
double slope_ratio(const FiberProblem& p, double s) {
  const double d = p.dphi(s);
  if (!std::isfinite(d)) return -std::numeric_limits<double>::infinity();
  return d / s;
}

}  // namespace

std::string to_string(FiberStatus s) {
  switch (s) {
    case FiberStatus::Ok: return "OK";
    case FiberStatus::NoSignChange: return "NO_SIGN_CHANGE";
    case FiberStatus::NonMonotoneRatio: return "NON_MONOTONE_RATIO";
  }
  return "?";
}

FiberProfile fiber_profile(const FiberProblem& problem, const FiberTolerances& tol) {
  FiberProfile out;
  const double gscale = std::max(1.0, std::abs(problem.kappa));
  const double band = tol.eq_band * gscale;
  const double s_min = std::ldexp(tol.s_init, -tol.cap_doublings);
  const double s_cap = std::ldexp(tol.s_init, tol.cap_doublings);

  // Positive-slope anchor: halve from s_init until g > band.
  double s_pos = tol.s_init;
  while (s_pos > s_min && !(slope_ratio(problem, s_pos) > band)) s_pos *= 0.5;
  if (!(slope_ratio(problem, s_pos) > band)) {
    out.status = FiberStatus::NoSignChange;
    out.note = "phi' has no positive slope near the origin";
    out.s_lo = s_pos;
    return out;
  }
  out.s_lo = s_pos;

  // First scale past the crossing: double until g <= band.
  double s_cross = s_pos;
  while (s_cross <= s_cap && slope_ratio(problem, s_cross) > band) s_cross *= 2.0;
  out.s_hi = std::min(s_cross, s_cap);
  if (s_cross > s_cap) {
    out.status = FiberStatus::NoSignChange;
    out.note = "phi' stayed positive up to the bracket cap";
    return out;
  }

  // Left endpoint of the critical set: boundary between g > band and g <= band.
  {
    double lo = s_pos, hi = s_cross;
    while (hi - lo > tol.rel_tol * hi) {
      const double mid = 0.5 * (lo + hi);
      (slope_ratio(problem, mid) > band ? lo : hi) = mid;
    }
    out.crit_lo = hi;
  }

  // Right endpoint: find a strictly negative anchor, then locate the
  // boundary between g >= -band and g < -band.
  double s_neg = s_cross;
  while (s_neg <= s_cap && !(slope_ratio(problem, s_neg) < -band)) s_neg *= 2.0;
  if (s_neg > s_cap) {
    // Flat all the way to the cap; report the explored extent as a plateau.
    out.crit_hi = s_cap;
    out.s_hi = s_cap;
    out.plateau = true;
    out.note = "critical plateau extends to the bracket cap";
  } else {
    out.s_hi = s_neg;
    double lo = out.crit_lo, hi = s_neg;
    while (hi - lo > tol.rel_tol * hi) {
      const double mid = 0.5 * (lo + hi);
      (slope_ratio(problem, mid) >= -band ? lo : hi) = mid;
    }
    out.crit_hi = std::max(lo, out.crit_lo);
    out.plateau = (out.crit_hi - out.crit_lo) > tol.plateau_rel * out.crit_lo;
  }

  out.s_star = 0.5 * (out.crit_lo + out.crit_hi);
  out.value = problem.phi(out.s_star);

  // Monotonicity scan of g over the explored range; an inversion beyond the
  // slack means the monotone-ratio hypothesis fails for this model.
  {
    const double lo = std::max(s_min, out.crit_lo * 1e-2);
    const double hi = std::min(out.s_hi, out.crit_hi * 1e2);
    const int n = tol.scan_points;
    double prev_s = lo, prev_g = slope_ratio(problem, lo);
    for (int i = 1; i < n; ++i) {
      const double s = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
      const double g = slope_ratio(problem, s);
      if (std::isfinite(prev_g) && std::isfinite(g) &&
          g > prev_g + tol.mono_slack * gscale) {
        out.status = FiberStatus::NonMonotoneRatio;
        out.witness_s1 = prev_s;
        out.witness_s2 = s;
        out.witness_g1 = prev_g;
        out.witness_g2 = g;
        out.note = "ratio inversion detected";
        break;
      }
      prev_s = s;
      prev_g = g;
    }
  }
  return out;
}

std::pair<double, double> fiber_value_at(const FiberProblem& problem, double s) {
  if (s < 0.0) throw std::invalid_argument("fiber_value_at: s must be >= 0");
  return {problem.phi(s), problem.dphi(s)};
}

std::optional<double> envelope_derivative(const FiberProblem& problem,
                                          const FiberProfile& profile,
                                          const Eigen::VectorXd& v) {
  if (profile.plateau) return std::nullopt;
  if (!problem.dir_deriv)
    throw std::logic_error("envelope_derivative: problem has no directional derivative");
  return profile.s_star * problem.dir_deriv(profile.s_star, v);
}

RatioCertificate ratio_certificate(const FiberProblem& problem, double s_min,
                                   double s_max, int points, double slack) {
  if (!(s_min > 0.0) || !(s_max > s_min) || points < 2)
    throw std::invalid_argument("ratio_certificate: bad scan range");
  RatioCertificate cert;
  cert.samples = points;
  const double gscale = std::max(1.0, std::abs(problem.kappa));
  // The ratio is g - kappa up to orientation; g non-increasing covers both
  // the non-decreasing direct ratio and the non-increasing dual one.
  double prev_s = s_min, prev_g = slope_ratio(problem, s_min);
  for (int i = 1; i < points; ++i) {
    const double s = s_min * std::pow(s_max / s_min, static_cast<double>(i) / (points - 1));
    const double g = slope_ratio(problem, s);
    const double inversion = g - prev_g;
    if (std::isfinite(inversion) && inversion > cert.worst_violation) {
      cert.worst_violation = inversion;
      cert.witness_s1 = prev_s;
      cert.witness_s2 = s;
    }
    prev_s = s;
    prev_g = g;
  }
  cert.monotone = cert.worst_violation <= slack * gscale;
  return cert;
}

}  // namespace minper
