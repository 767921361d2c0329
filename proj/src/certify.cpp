#include "minper/certify.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

namespace minper {

ResidualReport ode_residual_direct(const DirectActionContext& ctx,
                                   const Eigen::MatrixXd& coeffs) {
  const SampledField f = synthesize(ctx.space, coeffs, ctx.grid);
  // Spectral second derivative: mode b picks up the factor -omega_b^2.
  Eigen::MatrixXd acc_coeffs = coeffs;
  for (int b = 0; b < ctx.space.basis_size(); ++b) {
    const double w = ctx.space.omega(b);
    acc_coeffs.row(b) *= -w * w;
  }
  const SampledField acc = synthesize(ctx.space, acc_coeffs, ctx.grid);

  ResidualReport rep;
  for (int i = 0; i < ctx.grid.size(); ++i) {
    const Eigen::VectorXd vp = ctx.potential.grad(f.values.row(i).transpose());
    rep.sup = std::max(rep.sup, (acc.values.row(i).transpose() + vp).norm());
    rep.scale = std::max(rep.scale, vp.norm());
  }
  rep.rel = rep.sup / rep.scale;
  return rep;
}

ResidualReport ode_residual_dual(const HamiltonianModel& model,
                                 const Eigen::MatrixXd& x_samples,
                                 const Eigen::MatrixXd& v_samples) {
  ResidualReport rep;
  for (Eigen::Index i = 0; i < x_samples.rows(); ++i) {
    const Eigen::VectorXd hp = model.grad(x_samples.row(i).transpose());
    const Eigen::VectorXd r = v_samples.row(i).transpose() - apply_j(hp);
    rep.sup = std::max(rep.sup, r.norm());
    rep.scale = std::max(rep.scale, hp.norm());
  }
  rep.rel = rep.sup / rep.scale;
  return rep;
}

EnergyReport energy_drift(const PotentialModel& model, const Eigen::MatrixXd& x_samples,
                          const Eigen::MatrixXd& v_samples) {
  EnergyReport rep;
  for (Eigen::Index i = 0; i < x_samples.rows(); ++i) {
    const double e = 0.5 * v_samples.row(i).squaredNorm() +
                     model.eval(x_samples.row(i).transpose());
    if (i == 0)
      rep.e0 = e;
    else
      rep.drift = std::max(rep.drift, std::abs(e - rep.e0));
  }
  rep.rel = rep.drift / std::max(1.0, std::abs(rep.e0));
  return rep;
}

namespace {

int gcd_of(const std::vector<int>& v) {
  int g = 0;
  for (int k : v) g = std::gcd(g, k);
  return g;
}

}  // namespace

MinimalPeriodReport minimal_period_certificate(
    const SpaceConfig& space, const Eigen::MatrixXd& coeffs,
    const MinimalPeriodOptions& opts,
    const std::function<double(const Eigen::VectorXd&)>& fiber_max, double action_value,
    const Eigen::MatrixXd& fiber_coeffs) {
  MinimalPeriodReport rep;
  rep.period_T = space.period;

  // (a) spectral: gcd of frequencies carrying noticeable coefficient mass.
  std::map<int, double> mass_sq;
  double total_sq = 0.0;
  for (int b = 0; b < space.basis_size(); ++b) {
    const double m = coeffs.row(b).squaredNorm();
    mass_sq[space.basis[static_cast<size_t>(b)].freq] += m;
    total_sq += m;
  }
  if (total_sq == 0.0) {
    rep.note = "zero candidate";
    return rep;
  }
  std::vector<int> strict, loose;
  for (const auto& [freq, msq] : mass_sq) {
    const double rel = std::sqrt(msq / total_sq);
    if (rel > 10.0 * opts.tol_mass) strict.push_back(freq);
    if (rel > 0.1 * opts.tol_mass) loose.push_back(freq);
  }
  const int g_strict = gcd_of(strict);
  const int g_loose = gcd_of(loose);
  rep.gcd = g_strict;
  rep.active_freqs = strict;
  if (g_strict != g_loose) {
    rep.indeterminate = true;
    rep.note = "coefficient mass near tol_mass makes the frequency gcd ambiguous";
  }

  // (b) time domain: every proper subperiod T/k must be visibly violated.
  const QuadratureGrid grid = make_grid(space);
  const Eigen::MatrixXd x = synthesize_at(space, coeffs, grid.times);
  rep.amplitude = x.rowwise().norm().maxCoeff();
  bool all_rejected = true;
  for (int k = 2; k <= opts.max_k; ++k) {
    const Eigen::VectorXd shifted_times =
        grid.times.array() + space.period / static_cast<double>(k);
    const Eigen::MatrixXd xs = synthesize_at(space, coeffs, shifted_times);
    const double viol = (xs - x).rowwise().norm().maxCoeff() / rep.amplitude;
    SubperiodCheck chk{k, viol, viol > opts.tol_sub};
    all_rejected = all_rejected && chk.rejected;
    rep.subperiods.push_back(chk);
  }

  // Rescaling audit: the compression t -> x(t/k), projected back onto the
  // space, must not beat the candidate on its fiber; otherwise the candidate
  // would effectively be a k-fold iterate.
  if (fiber_max) {
    const Eigen::MatrixXd& base = fiber_coeffs.size() ? fiber_coeffs : coeffs;
    for (int k = 2; k <= opts.max_k; ++k) {
      CompressionMargin cm;
      cm.k = k;
      const Eigen::VectorXd compressed_times = grid.times / static_cast<double>(k);
      const Eigen::MatrixXd samples = synthesize_at(space, base, compressed_times);
      const AnalysisResult proj = analyze(samples, space);
      const double pn = proj.coeffs.norm();
      if (pn < 1e-8 * base.norm()) {
        cm.degenerate = true;
      } else {
        const double m = fiber_max(flatten(proj.coeffs));
        if (!std::isfinite(m)) {
          cm.degenerate = true;
        } else {
          cm.margin = m - action_value;
          cm.positive = cm.margin > 0.0;
        }
      }
      rep.compression_margins.push_back(cm);
    }
  }

  rep.certified = (rep.gcd == 1) && !rep.indeterminate && all_rejected;
  return rep;
}

InfMaxAudit infmax_audit(const FunctionalOps& ops, const Candidate& candidate,
                         int n_rays, std::uint64_t seed, const FiberTolerances& tol) {
  InfMaxAudit audit;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  const FiberProblem own = make_fiber(ops, candidate.direction);
  const FiberProfile own_prof = fiber_profile(own, tol);
  audit.self_gap = std::abs(own_prof.value - candidate.value);

  audit.min_margin = std::numeric_limits<double>::infinity();
  int done = 0;
  int attempts = 0;
  while (done < n_rays && attempts < 64 * n_rays) {
    ++attempts;
    Eigen::VectorXd v(ops.dim);
    for (int i = 0; i < ops.dim; ++i) v[i] = normal(rng);
    const double n = ops.norm(v);
    if (!(n > 1e-12)) continue;
    v /= n;
    if (ops.cone && ops.cone(v) != ConeClass::Minus) continue;
    const FiberProfile prof = fiber_profile(make_fiber(ops, v), tol);
    if (prof.status == FiberStatus::NoSignChange) continue;
    audit.min_margin = std::min(audit.min_margin, prof.value - candidate.value);
    ++done;
  }
  audit.rays = done;
  return audit;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

const ConditionEntry* ConditionReport::find(const std::string& id) const {
  for (const auto& e : entries)
    if (e.id == id) return &e;
  return nullptr;
}

namespace {

std::vector<double> geometric_ladder(double lo, double hi, int steps) {
  std::vector<double> out;
  for (int i = 0; i < steps; ++i)
    out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (steps - 1)));
  return out;
}

// Ratio-trend audit shared by the limit conditions. kind: +1 checks
// f/|x|^2 -> infinity at the hi end of the ladder, -1 checks -> 0 at the lo
// end. Radii are traversed from lo to hi.
ConditionEntry limit_condition(const std::string& id, const ScalarField& f, int dim,
                               double r_lo, double r_hi, int steps, int kind,
                               const SamplingPlan& plan) {
  ConditionEntry entry;
  entry.id = id;
  const auto dirs = unit_directions(dim, plan.directions, plan.seed);
  const auto radii = geometric_ladder(r_lo, r_hi, steps);

  std::vector<double> ratios;
  std::vector<Eigen::VectorXd> extreme_points;
  for (double r : radii) {
    double extreme = (kind > 0) ? std::numeric_limits<double>::infinity() : 0.0;
    Eigen::VectorXd at = radii.empty() ? Eigen::VectorXd() : r * dirs.front();
    for (const auto& e : dirs) {
      const double v = f(r * e) / (r * r);
      if (!std::isfinite(v)) {
        entry.verdict = Verdict::Fail;
        entry.note = "non-finite evaluation";
        entry.witness = r * e;
        entry.witness_value = v;
        return entry;
      }
      // -> infinity is limited by the slowest direction, -> 0 by the largest.
      if (kind > 0 && v < extreme) {
        extreme = v;
        at = r * e;
      } else if (kind < 0 && v >= extreme) {
        extreme = v;
        at = r * e;
      }
    }
    ratios.push_back(extreme);
    extreme_points.push_back(at);
  }

  const double at_zero_end = ratios.front();
  const double at_inf_end = ratios.back();
  bool monotone = true;
  for (size_t i = 1; i < ratios.size(); ++i) {
    const double lo_v = ratios[i - 1], hi_v = ratios[i];
    if (hi_v < lo_v * (1.0 - 1e-9) - 1e-300) monotone = false;
  }

  if (kind < 0) {
    // Vanishing limit at the origin: ratios must shrink toward the lo end.
    entry.margin = at_zero_end;
    entry.witness = worst_point.size() ? worst_point : Eigen::VectorXd();
    entry.witness_value = at_zero_end;
    const bool trending = at_zero_end <= 0.5 * at_inf_end;
    if (at_zero_end < plan.eps_small && monotone) {
      entry.verdict = Verdict::Pass;
    } else if (!trending && at_zero_end >= plan.eps_small) {
      entry.verdict = Verdict::Fail;
      entry.note = "ratio does not vanish toward the origin";
    } else {
      entry.verdict = Verdict::Inconclusive;
      entry.note = "trend toward zero but threshold unmet";
    }
  } else {
    // Diverging limit at infinity (or at the origin for the conjugate when
    // the caller passes a descending ladder; the ladder orientation already
    // encodes which end diverges).
    const double growth = at_inf_end / std::max(at_zero_end, 1e-300);
    entry.margin = at_inf_end;
    if (monotone && (at_inf_end > plan.ratio_threshold || growth >= plan.ratio_growth_min)) {
      entry.verdict = Verdict::Pass;
    } else if (growth <= 1.0 + 1e-9) {
      entry.verdict = Verdict::Fail;
      entry.note = "ratio stays bounded along the ladder";
      entry.witness = radii.back() * dirs.front();
      entry.witness_value = at_inf_end;
    } else {
      entry.verdict = Verdict::Inconclusive;
      entry.note = "increasing trend but growth too weak to call";
    }
  }
  return entry;
}

std::vector<Eigen::VectorXd> interior_samples(int dim, const SamplingPlan& plan) {
  std::mt19937_64 rng(plan.seed + 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Eigen::VectorXd> pts;
  while (static_cast<int>(pts.size()) < plan.interior_points) {
    Eigen::VectorXd v(dim);
    for (int d = 0; d < dim; ++d) v[d] = normal(rng);
    const double n = v.norm();
    if (!(n > 1e-12)) continue;
    const double r = plan.interior_radius * std::pow(unif(rng), 1.0 / dim);
    pts.push_back(v / n * r);
  }
  return pts;
}

}  // namespace

ConditionReport check_potential_conditions(const PotentialModel& model,
                                           const SamplingPlan& plan) {
  ConditionReport rep;
  rep.family = "potential";

  rep.entries.push_back(limit_condition("V1", model.eval, model.dim, plan.r_small_lo,
                                        plan.r_small_hi, plan.ladder_steps, -1, plan));
  rep.entries.push_back(limit_condition("V2", model.eval, model.dim, plan.r_large_lo,
                                        plan.r_large_hi, plan.ladder_steps, +1, plan));

  // (V3): 0 < V'(x).x <= V''(x)x.x at ladder and interior samples.
  {
    ConditionEntry entry;
    entry.id = "V3";
    entry.verdict = Verdict::Pass;
    entry.margin = std::numeric_limits<double>::infinity();
    const auto dirs = unit_directions(model.dim, plan.directions, plan.seed);
    std::vector<Eigen::VectorXd> pts = interior_samples(model.dim, plan);
    for (double r : geometric_ladder(plan.r_small_lo, plan.r_small_hi, plan.ladder_steps))
      for (const auto& e : dirs) pts.push_back(r * e);
    for (double r : geometric_ladder(plan.r_large_lo, plan.r_large_hi, plan.ladder_steps))
      for (const auto& e : dirs) pts.push_back(r * e);

    bool equality_seen = false;
    for (const auto& x : pts) {
      const double p1 = model.grad(x).dot(x);
      const double p2 = x.dot(model.hess(x) * x);
      if (!std::isfinite(p1) || !std::isfinite(p2)) {
        entry.verdict = Verdict::Fail;
        entry.note = "non-finite evaluation";
        entry.witness = x;
        break;
      }
      // Strict positivity, measured against the attainable scale |V'||x| so
      // steep growth does not mask a genuine zero at small radii.
      if (!(p1 > 1e-12 * model.grad(x).norm() * x.norm())) {
        entry.verdict = Verdict::Fail;
        entry.note = "V'(x).x not strictly positive";
        entry.witness = x;
        entry.witness_value = p1;
        break;
      }
      const double slack = 1e-9 * std::max({1.0, std::abs(p1), std::abs(p2)});
      if (p1 > p2 + slack) {
        entry.verdict = Verdict::Fail;
        entry.note = "V'(x).x exceeds V''(x)x.x";
        entry.witness = x;
        entry.witness_value = p1 - p2;
        break;
      }
      const double rel_gap = (p2 - p1) / std::max({1.0, std::abs(p1), std::abs(p2)});
      entry.margin = std::min(entry.margin, rel_gap);
      if (rel_gap <= 1e-9) equality_seen = true;
    }
    if (entry.verdict == Verdict::Pass && equality_seen)
      entry.note = "right inequality attains equality within slack";
    rep.entries.push_back(entry);
  }

  // (V4): evenness.
  {
    ConditionEntry entry;
    entry.id = "V4";
    entry.verdict = Verdict::Pass;
    for (const auto& x : interior_samples(model.dim, plan)) {
      const double v = model.eval(x);
      const double d = std::abs(v - model.eval(-x));
      entry.margin = std::max(entry.margin, d);
      if (d >= 1e-10 * (1.0 + std::abs(v))) {
        entry.verdict = Verdict::Fail;
        entry.note = "V(x) != V(-x)";
        entry.witness = x;
        entry.witness_value = d;
        break;
      }
    }
    rep.entries.push_back(entry);
  }

  rep.all_pass = true;
  for (const auto& e : rep.entries) rep.all_pass = rep.all_pass && e.verdict == Verdict::Pass;
  return rep;
}

ConditionReport check_hamiltonian_conditions(const FenchelPair& pair,
                                             const SamplingPlan& plan) {
  ConditionReport rep;
  rep.family = "hamiltonian";
  const HamiltonianModel& model = pair.base;

  rep.entries.push_back(limit_condition("H1", model.eval, model.dim, plan.r_small_lo,
                                        plan.r_small_hi, plan.ladder_steps, -1, plan));

  // (H2): superquadratic power sandwich with fitted exponent.
  {
    ConditionEntry entry;
    entry.id = "H2";
    const GrowthFit fit =
        fit_growth_exponent(model.eval, model.dim, plan.r_large_lo, 1e4, 7,
                            plan.directions, plan.seed);
    entry.margin = fit.exponent - 2.0;
    entry.witness_value = fit.exponent;
    if (!fit.finite) {
      entry.verdict = Verdict::Inconclusive;
      entry.note = "non-finite growth samples";
    } else if (fit.exponent <= 2.01) {
      entry.verdict = Verdict::Fail;
      entry.note = "fitted growth exponent not above 2";
      entry.witness = 1e4 * unit_directions(model.dim, 1, plan.seed).front();
    } else if (fit.c_hi / std::max(fit.c_lo, 1e-300) <= 100.0) {
      entry.verdict = Verdict::Pass;
    } else {
      entry.verdict = Verdict::Inconclusive;
      entry.note = "growth is superquadratic but not sandwiched by a single power";
    }
    if (model.growth_beta > 0.0 && entry.verdict == Verdict::Pass &&
        std::abs(fit.exponent - model.growth_beta) > 0.05)
      entry.note = "fitted exponent disagrees with the declared one";
    rep.entries.push_back(entry);
  }

  // Strict convexity by midpoint strictness on random pairs.
  {
    ConditionEntry entry;
    entry.id = "CONVEX";
    entry.verdict = Verdict::Pass;
    entry.margin = std::numeric_limits<double>::infinity();
    const auto pts = interior_samples(model.dim, plan);
    for (size_t i = 0; i + 1 < pts.size(); i += 2) {
      const Eigen::VectorXd& x = pts[i];
      const Eigen::VectorXd& y = pts[i + 1];
      if ((x - y).norm() < 1e-8) continue;
      const double gap =
          0.5 * (model.eval(x) + model.eval(y)) - model.eval(0.5 * (x + y));
      const double scale = std::max(1.0, std::abs(model.eval(x)) + std::abs(model.eval(y)));
      entry.margin = std::min(entry.margin, gap / scale);
      if (gap <= 1e-12 * scale) {
        entry.verdict = Verdict::Fail;
        entry.note = "midpoint strictness violated";
        entry.witness = x;
        entry.witness_value = gap;
        break;
      }
    }
    rep.entries.push_back(entry);
  }

  // (H3): s -> G'(sy).y / s non-increasing on a geometric s-grid.
  {
    ConditionEntry entry;
    entry.id = "H3";
    entry.verdict = Verdict::Pass;
    const auto dirs = unit_directions(model.dim, plan.directions, plan.seed + 2);
    const auto sgrid = geometric_ladder(1e-2, 1e2, plan.s_grid);
    try {
      for (const auto& y : dirs) {
        double tmax = 0.0;
        std::vector<double> vals;
        for (double s : sgrid) {
          const double t = pair.conj_grad(s * y).dot(y) / s;
          vals.push_back(t);
          tmax = std::max(tmax, std::abs(t));
        }
        for (size_t i = 1; i < vals.size(); ++i) {
          if (vals[i] > vals[i - 1] + 1e-9 * std::max(1.0, tmax)) {
            entry.verdict = Verdict::Fail;
            entry.note = "dual ratio increases along a ray";
            entry.witness = sgrid[i] * y;
            entry.witness_value = vals[i] - vals[i - 1];
            break;
          }
        }
        if (entry.verdict == Verdict::Fail) break;
      }
    } catch (const FenchelError& err) {
      entry.verdict = Verdict::Inconclusive;
      entry.note = std::string("conjugate solver failed: ") + err.what();
    }
    rep.entries.push_back(entry);
  }

  // (G1): G(y)/|y|^2 diverges toward the origin. The ladder is traversed
  // with radii descending so the "infinity end" sits at the smallest radius.
  {
    ConditionEntry entry;
    try {
      const ScalarField g = pair.conj;
      // Reverse orientation: sample on [r_small_lo, r_small_hi] and ask for
      // divergence at the lo end by flipping the ladder.
      const auto dirs = unit_directions(model.dim, plan.directions, plan.seed + 3);
      const auto radii = geometric_ladder(plan.r_small_hi, plan.r_small_lo,
                                          plan.ladder_steps);
      std::vector<double> ratios;
      for (double r : radii) {
        double mn = std::numeric_limits<double>::infinity();
        for (const auto& e : dirs) mn = std::min(mn, g(r * e) / (r * r));
        ratios.push_back(mn);
      }
      entry.id = "G1";
      bool monotone = true;
      for (size_t i = 1; i < ratios.size(); ++i)
        if (ratios[i] < ratios[i - 1] * (1.0 - 1e-9)) monotone = false;
      const double growth = ratios.back() / std::max(ratios.front(), 1e-300);
      entry.margin = ratios.back();
      if (monotone &&
          (ratios.back() > plan.ratio_threshold || growth >= plan.ratio_growth_min)) {
        entry.verdict = Verdict::Pass;
      } else if (growth <= 1.0 + 1e-9) {
        entry.verdict = Verdict::Fail;
        entry.note = "conjugate ratio stays bounded toward the origin";
        entry.witness = radii.back() * dirs.front();
        entry.witness_value = ratios.back();
      } else {
        entry.verdict = Verdict::Inconclusive;
        entry.note = "increasing trend but growth too weak to call";
      }
    } catch (const FenchelError& err) {
      entry.id = "G1";
      entry.verdict = Verdict::Inconclusive;
      entry.note = std::string("conjugate solver failed: ") + err.what();
    }
    rep.entries.push_back(entry);
  }

  // (G2): conjugate growth exponent and the exponent identity.
  {
    ConditionEntry entry;
    entry.id = "G2";
    try {
      const GrowthFit fit = fit_growth_exponent(pair.conj, model.dim, plan.r_large_lo,
                                                1e4, 7, plan.directions, plan.seed + 4);
      entry.witness_value = fit.exponent;
      const double identity = 1.0 / fit.exponent + 1.0 / pair.beta_hat - 1.0;
      entry.margin = std::abs(identity);
      if (fit.finite && std::abs(identity) < 0.02 &&
          fit.c_hi / std::max(fit.c_lo, 1e-300) <= 100.0)
        entry.verdict = Verdict::Pass;
      else if (!fit.finite)
        entry.verdict = Verdict::Inconclusive;
      else {
        entry.verdict = Verdict::Fail;
        entry.note = "conjugate exponent does not satisfy 1/alpha + 1/beta = 1";
      }
    } catch (const FenchelError& err) {
      entry.verdict = Verdict::Inconclusive;
      entry.note = std::string("conjugate solver failed: ") + err.what();
    }
    rep.entries.push_back(entry);
  }

  // Conjugacy self-test: Young equality at gradient points and inversion.
  {
    ConditionEntry entry;
    entry.id = "YOUNG";
    entry.verdict = Verdict::Pass;
    try {
      std::mt19937_64 rng(plan.seed + 5);
      std::normal_distribution<double> normal(0.0, 1.0);
      double worst = 0.0;
      for (int i = 0; i < 100; ++i) {
        Eigen::VectorXd x(model.dim);
        for (int d = 0; d < model.dim; ++d) x[d] = normal(rng);
        const Eigen::VectorXd y = model.grad(x);
        const double young =
            std::abs(pair.conj(y) + model.eval(x) - x.dot(y)) /
            std::max(1.0, std::abs(x.dot(y)));
        const double inv = (pair.base.grad(pair.conj_grad(y)) - y).norm() /
                           std::max(1.0, y.norm());
        worst = std::max({worst, young, inv});
      }
      entry.margin = worst;
      if (worst > 1e-8) {
        entry.verdict = Verdict::Fail;
        entry.note = "Young equality or gradient inversion off beyond 1e-8";
      }
    } catch (const FenchelError& err) {
      entry.verdict = Verdict::Inconclusive;
      entry.note = std::string("conjugate solver failed: ") + err.what();
    }
    rep.entries.push_back(entry);
  }

  rep.all_pass = true;
  for (const auto& e : rep.entries) rep.all_pass = rep.all_pass && e.verdict == Verdict::Pass;
  return rep;
}

void finalize_certificate(Certificate& cert, const CertificateGates& gates) {
  cert.failures.clear();
  if (!(cert.ode.rel < gates.ode_rel))
    cert.failures.push_back("ode residual above tolerance");
  if (cert.has_energy && !(cert.energy.rel < gates.energy_rel))
    cert.failures.push_back("energy drift above tolerance");
  if (!cert.period.certified)
    cert.failures.push_back("minimal period not certified");
  if (!(cert.infmax.min_margin > gates.infmax_margin))
    cert.failures.push_back("inf-max audit found a better ray");
  if (!(cert.truncation_agreement < gates.truncation))
    cert.failures.push_back("truncation agreement above tolerance");
  cert.certified = cert.failures.empty();
}

}  // namespace minper
