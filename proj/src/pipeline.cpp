#include "minper/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

namespace minper {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument("config: " + where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

}  // namespace

RunConfig parse_config(const json& j) {
  reject_unknown_keys(j, {"mode", "model", "period_T", "dimension", "symmetry_class",
                          "num_modes", "solver", "output", "periods",
                          "candidate_document"},
                      "top level");
  RunConfig cfg;
  if (!j.contains("mode")) throw std::invalid_argument("config: missing 'mode'");
  cfg.mode = j.at("mode").get<std::string>();
  const std::set<std::string> modes = {"solve_direct",  "solve_dual", "check_conditions",
                                       "fenchel_table", "certify",    "sweep"};
  if (!modes.count(cfg.mode)) throw std::invalid_argument("config: unknown mode " + cfg.mode);

  const bool dual = cfg.mode == "solve_dual";
  const bool wants_model = cfg.mode != "certify";

  if (wants_model) {
    if (!j.contains("model")) throw std::invalid_argument("config: missing 'model'");
    const json& jm = j.at("model");
    reject_unknown_keys(jm, {"kind", "name", "params"}, "model");
    cfg.model_name = jm.at("name").get<std::string>();
    const std::string default_kind =
        dual || cfg.mode == "fenchel_table" ? "hamiltonian" : "potential";
    cfg.model_kind = get_or<std::string>(jm, "kind", default_kind);
    if (cfg.model_kind != "potential" && cfg.model_kind != "hamiltonian")
      throw std::invalid_argument("config: model.kind must be potential or hamiltonian");
    if (jm.contains("params")) {
      const json& jp = jm.at("params");
      if (!jp.is_object()) throw std::invalid_argument("config: model.params must be an object");
      for (auto it = jp.begin(); it != jp.end(); ++it)
        cfg.model_params[it.key()] = it.value().get<double>();
    }
  }

  const bool needs_period = cfg.mode == "solve_direct" || cfg.mode == "solve_dual";
  if (needs_period && !j.contains("period_T"))
    throw std::invalid_argument("config: missing 'period_T'");
  cfg.period = get_or<double>(j, "period_T", 0.0);
  if (needs_period && !(cfg.period > 0.0))
    throw std::invalid_argument("config: period_T must be positive");

  cfg.dimension = get_or<int>(j, "dimension", dual ? 2 : 1);
  if (cfg.dimension < 1) throw std::invalid_argument("config: dimension must be >= 1");
  if (dual && cfg.dimension % 2 != 0)
    throw std::invalid_argument("config: solve_dual needs an even dimension");

  const std::string sym = get_or<std::string>(j, "symmetry_class", "E1");
  cfg.symmetry = symmetry_class_from_string(sym);
  if (dual && j.contains("symmetry_class") && cfg.symmetry != SymmetryClass::FullMeanZero)
    throw std::invalid_argument("config: dual fields are always FULL_MEANZERO");
  if (dual) cfg.symmetry = SymmetryClass::FullMeanZero;

  cfg.num_modes = get_or<int>(j, "num_modes", dual ? 16 : 8);
  if (cfg.num_modes < 1) throw std::invalid_argument("config: num_modes must be >= 1");

  cfg.solver.newton_tol = dual ? 1e-8 : 1e-10;
  if (j.contains("solver")) {
    const json& js = j.at("solver");
    reject_unknown_keys(js,
                        {"restarts", "max_outer_iters", "step_init", "step_shrink",
                         "step_grow", "grad_tol", "newton_tol", "seed",
                         "plateau_tangents", "infmax_rays", "force", "tol_cone"},
                        "solver");
    cfg.solver.restarts = get_or<int>(js, "restarts", cfg.solver.restarts);
    cfg.solver.max_outer_iters =
        get_or<int>(js, "max_outer_iters", cfg.solver.max_outer_iters);
    cfg.solver.step_init = get_or<double>(js, "step_init", cfg.solver.step_init);
    cfg.solver.step_shrink = get_or<double>(js, "step_shrink", cfg.solver.step_shrink);
    cfg.solver.step_grow = get_or<double>(js, "step_grow", cfg.solver.step_grow);
    cfg.solver.grad_tol = get_or<double>(js, "grad_tol", cfg.solver.grad_tol);
    cfg.solver.newton_tol = get_or<double>(js, "newton_tol", cfg.solver.newton_tol);
    cfg.solver.seed = get_or<std::uint64_t>(js, "seed", cfg.solver.seed);
    cfg.solver.plateau_tangents =
        get_or<int>(js, "plateau_tangents", cfg.solver.plateau_tangents);
    cfg.infmax_rays = get_or<int>(js, "infmax_rays", cfg.infmax_rays);
    cfg.force = get_or<bool>(js, "force", cfg.force);
    cfg.tol_cone = get_or<double>(js, "tol_cone", cfg.tol_cone);
  }
  if (cfg.solver.restarts < 1 || cfg.solver.grad_tol <= 0.0 || cfg.solver.newton_tol <= 0.0)
    throw std::invalid_argument("config: solver tolerances and restarts must be positive");

  if (j.contains("output")) {
    const json& jo = j.at("output");
    reject_unknown_keys(jo, {"dir", "document", "trajectory", "plot"}, "output");
    cfg.out_dir = get_or<std::string>(jo, "dir", cfg.out_dir);
    cfg.document_name = get_or<std::string>(jo, "document", cfg.document_name);
    cfg.trajectory_name = get_or<std::string>(jo, "trajectory", cfg.trajectory_name);
    cfg.plot_name = get_or<std::string>(jo, "plot", cfg.plot_name);
  }

  if (cfg.mode == "sweep") {
    if (!j.contains("periods") || !j.at("periods").is_array() || j.at("periods").empty())
      throw std::invalid_argument("config: sweep needs a nonempty 'periods' array");
    double prev = 0.0;
    for (const auto& p : j.at("periods")) {
      const double t = p.get<double>();
      if (!(t > prev))
        throw std::invalid_argument(
            "config: 'periods' must be strictly increasing and positive");
      cfg.periods.push_back(t);
      prev = t;
    }
  }
  if (cfg.mode == "certify") {
    if (!j.contains("candidate_document"))
      throw std::invalid_argument("config: certify needs 'candidate_document'");
    cfg.candidate_document = j.at("candidate_document").get<std::string>();
  }
  return cfg;
}

json RunConfig::echo() const {
  json j;
  j["mode"] = mode;
  if (!model_name.empty()) {
    j["model"] = {{"kind", model_kind}, {"name", model_name}};
    json p = json::object();
    for (const auto& [k, v] : model_params) p[k] = v;
    j["model"]["params"] = p;
  }
  if (period > 0.0) j["period_T"] = period;
  j["dimension"] = dimension;
  j["symmetry_class"] = to_string(symmetry);
  j["num_modes"] = num_modes;
  j["solver"] = {{"restarts", solver.restarts},
                 {"max_outer_iters", solver.max_outer_iters},
                 {"step_init", solver.step_init},
                 {"step_shrink", solver.step_shrink},
                 {"step_grow", solver.step_grow},
                 {"grad_tol", solver.grad_tol},
                 {"newton_tol", solver.newton_tol},
                 {"seed", solver.seed},
                 {"plateau_tangents", solver.plateau_tangents},
                 {"infmax_rays", infmax_rays},
                 {"force", force},
                 {"tol_cone", tol_cone}};
  j["output"] = {{"dir", out_dir},
                 {"document", document_name},
                 {"trajectory", trajectory_name},
                 {"plot", plot_name}};
  if (!periods.empty()) j["periods"] = periods;
  if (!candidate_document.empty()) j["candidate_document"] = candidate_document;
  return j;
}

namespace {

json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const size_t rows = j.size();
  const size_t cols = rows ? j.at(0).size() : 0;
  Eigen::MatrixXd m(rows, cols);
  for (size_t i = 0; i < rows; ++i)
    for (size_t c = 0; c < cols; ++c) m(i, c) = j.at(i).at(c).get<double>();
  return m;
}

json to_json(const FiberProfile& p) {
  return {{"status", to_string(p.status)}, {"s_star", p.s_star},
          {"crit_lo", p.crit_lo},          {"crit_hi", p.crit_hi},
          {"plateau", p.plateau},          {"value", p.value}};
}

json to_json(const ResidualReport& r) {
  return {{"sup", r.sup}, {"scale", r.scale}, {"rel", r.rel}};
}

json to_json(const MinimalPeriodReport& r) {
  json subs = json::array();
  for (const auto& s : r.subperiods)
    subs.push_back({{"k", s.k}, {"violation", s.violation}, {"rejected", s.rejected}});
  json margins = json::array();
  for (const auto& m : r.compression_margins)
    margins.push_back({{"k", m.k},
                       {"margin", m.degenerate ? 0.0 : m.margin},
                       {"positive", m.positive},
                       {"degenerate", m.degenerate}});
  return {{"certified", r.certified},
          {"certified_T", r.period_T},
          {"indeterminate", r.indeterminate},
          {"gcd", r.gcd},
          {"active_frequencies", r.active_freqs},
          {"amplitude", r.amplitude},
          {"subperiods", subs},
          {"compression_margins", margins},
          {"note", r.note}};
}

json to_json(const ConditionReport& rep) {
  json entries = json::array();
  for (const auto& e : rep.entries) {
    json je = {{"id", e.id},
               {"verdict", to_string(e.verdict)},
               {"margin", std::isfinite(e.margin) ? e.margin : 0.0},
               {"note", e.note}};
    if (e.witness.size()) {
      json w = json::array();
      for (Eigen::Index i = 0; i < e.witness.size(); ++i) w.push_back(e.witness[i]);
      je["witness"] = w;
      je["witness_value"] = e.witness_value;
    }
    entries.push_back(je);
  }
  return {{"family", rep.family}, {"entries", entries}, {"all_pass", rep.all_pass}};
}

json to_json(const Certificate& cert) {
  json j;
  j["certified"] = cert.certified;
  j["ode_residual"] = to_json(cert.ode);
  if (cert.has_energy)
    j["energy_drift"] = {{"drift", cert.energy.drift},
                         {"e0", cert.energy.e0},
                         {"rel", cert.energy.rel}};
  j["minimal_period"] = to_json(cert.period);
  j["infmax_audit"] = {{"rays", cert.infmax.rays},
                       {"min_margin", cert.infmax.min_margin},
                       {"self_gap", cert.infmax.self_gap}};
  j["truncation_agreement"] = cert.truncation_agreement;
  j["failures"] = cert.failures;
  return j;
}

json space_json(const SpaceConfig& s) {
  return {{"period_T", s.period},
          {"dimension", s.dim},
          {"symmetry_class", to_string(s.symmetry)},
          {"num_modes", s.num_modes},
          {"grid_points", s.grid_points}};
}

json candidate_json(const SpaceConfig& space, const Candidate& c) {
  return {{"space", space_json(space)},
          {"coefficients", to_json(unflatten(c.point, space))},
          {"action", c.value},
          {"fiber", to_json(c.fiber)},
          {"refined", c.refined},
          {"residual_norm", c.residual_norm},
          {"restart_index", c.restart_index},
          {"outer_iters", c.outer_iters},
          {"solve_status", to_string(c.status)},
          {"note", c.note}};
}

PotentialModel make_potential(const RunConfig& cfg) {
  return builtin_potential(cfg.model_name, cfg.model_params, cfg.dimension);
}

HamiltonianModel make_hamiltonian(const RunConfig& cfg) {
  return builtin_hamiltonian(cfg.model_name, cfg.model_params, cfg.dimension);
}

// Re-solves at twice the mode budget by refining the lifted candidate there;
// returns the relative action change.
double direct_truncation_agreement(const RunConfig& cfg, const PotentialModel& model,
                                   const SpaceConfig& space, const Candidate& refined) {
  const SpaceConfig fine =
      make_space(space.period, space.dim, space.symmetry, 2 * space.num_modes);
  const DirectActionContext fctx = make_direct_context(fine, model);
  const FunctionalOps fops = direct_ops(fctx);
  Candidate lifted = refined;
  lifted.point = flatten(resize_modes(space, unflatten(refined.point, space), fine));
  lifted.direction = lifted.point / fops.norm(lifted.point);
  const Candidate fref = newton_refine(fops, lifted, cfg.solver);
  return std::abs(fref.value - refined.value) / std::max(1e-300, std::abs(refined.value));
}

double dual_truncation_agreement(const RunConfig& cfg, const FenchelPair& pair,
                                 const SpaceConfig& space, const Candidate& refined) {
  const SpaceConfig fine =
      make_space(space.period, space.dim, space.symmetry, 2 * space.num_modes);
  const DualActionContext fctx = make_dual_context(fine, pair);
  const FunctionalOps fops = dual_ops(fctx, cfg.tol_cone);
  Candidate lifted = refined;
  lifted.point = flatten(resize_modes(space, unflatten(refined.point, space), fine));
  lifted.direction = lifted.point / fops.norm(lifted.point);
  const Candidate fref = newton_refine(fops, lifted, cfg.solver);
  return std::abs(fref.value - refined.value) / std::max(1e-300, std::abs(refined.value));
}

json timings_json(const std::chrono::steady_clock::time_point& start) {
  const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
  return {{"total_seconds", dt.count()}};
}

PipelineResult solve_direct_impl(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  PipelineResult out;
  out.document["library_version"] = kLibraryVersion;
  out.document["seed"] = cfg.solver.seed;
  out.document["config"] = cfg.echo();

  const PotentialModel model = make_potential(cfg);
  const ConditionReport conditions = check_potential_conditions(model);
  out.document["conditions"] = to_json(conditions);
  if (!conditions.all_pass && !cfg.force) {
    out.document["error"] = "hypothesis checks failed; re-run with solver.force to override";
    out.exit_code = kExitConditionsFailed;
    out.document["timings"] = timings_json(start);
    return out;
  }

  const SpaceConfig space =
      make_space(cfg.period, cfg.dimension, cfg.symmetry, cfg.num_modes);
  const DirectActionContext ctx = make_direct_context(space, model);
  const FunctionalOps ops = direct_ops(ctx);

  Candidate cand = minimize_sphere(ops, cfg.solver);
  if (cand.status == SolveStatus::AllFibersUnbounded) {
    out.document["error"] = "all fibers unbounded: " + cand.note;
    out.exit_code = kExitNotCertified;
    out.document["timings"] = timings_json(start);
    return out;
  }
  cand = newton_refine(ops, cand, cfg.solver);
  const Eigen::MatrixXd coeffs = unflatten(cand.point, space);
  out.document["candidate"] = candidate_json(space, cand);

  Certificate cert;
  cert.ode = ode_residual_direct(ctx, coeffs);
  cert.has_energy = true;
  const SampledField f = synthesize(space, coeffs, ctx.grid);
  cert.energy = energy_drift(model, f.values, f.derivs);
  cert.period = minimal_period_certificate(
      space, coeffs, {}, fiber_max_fn(ops, cfg.solver.fiber), cand.value);
  cert.infmax =
      infmax_audit(ops, cand, cfg.infmax_rays, cfg.solver.seed + 1000, cfg.solver.fiber);
  cert.truncation_agreement = direct_truncation_agreement(cfg, model, space, cand);
  finalize_certificate(cert);
  if (!cand.refined) {
    cert.failures.push_back("newton refinement did not converge");
    cert.certified = false;
  }
  out.document["certificate"] = to_json(cert);

  out.exit_code = cert.certified ? kExitOk : kExitNotCertified;
  out.document["timings"] = timings_json(start);
  return out;
}

PipelineResult solve_dual_impl(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  PipelineResult out;
  out.document["library_version"] = kLibraryVersion;
  out.document["seed"] = cfg.solver.seed;
  out.document["config"] = cfg.echo();

  const HamiltonianModel model = make_hamiltonian(cfg);
  const FenchelPair pair = fenchel_transform(model);
  const ConditionReport conditions = check_hamiltonian_conditions(pair);
  out.document["conditions"] = to_json(conditions);
  if (!conditions.all_pass && !cfg.force) {
    out.document["error"] = "hypothesis checks failed; re-run with solver.force to override";
    out.exit_code = kExitConditionsFailed;
    out.document["timings"] = timings_json(start);
    return out;
  }

  const SpaceConfig space =
      make_space(cfg.period, cfg.dimension, SymmetryClass::FullMeanZero, cfg.num_modes);
  const DualActionContext ctx = make_dual_context(space, pair);
  const FunctionalOps ops = dual_ops(ctx, cfg.tol_cone);

  Candidate cand = minimize_sphere(ops, cfg.solver);
  if (cand.status == SolveStatus::AllFibersUnbounded) {
    out.document["error"] = "all fibers unbounded: " + cand.note;
    out.exit_code = kExitNotCertified;
    out.document["timings"] = timings_json(start);
    return out;
  }
  cand = newton_refine(ops, cand, cfg.solver);
  out.document["candidate"] = candidate_json(space, cand);

  const RecoveredOrbit orbit = recover_orbit(ctx, cand);
  out.document["recovered_orbit"] = {
      {"xi", std::vector<double>(orbit.xi.data(), orbit.xi.data() + orbit.xi.size())},
      {"consistency_sup", orbit.consistency_sup},
      {"accepted", orbit.accepted},
      {"mean_radius", orbit.x_samples.rowwise().norm().mean()},
      {"orbit_coefficients", to_json(orbit.mean_zero_part.coeffs)}};

  Certificate cert;
  cert.ode = ode_residual_dual(model, orbit.x_samples, orbit.v_samples);
  cert.has_energy = false;
  cert.period = minimal_period_certificate(
      space, orbit.mean_zero_part.coeffs, {}, fiber_max_fn(ops, cfg.solver.fiber),
      cand.value, unflatten(cand.point, space));
  cert.infmax =
      infmax_audit(ops, cand, cfg.infmax_rays, cfg.solver.seed + 1000, cfg.solver.fiber);
  cert.truncation_agreement = dual_truncation_agreement(cfg, pair, space, cand);
  finalize_certificate(cert);
  if (!cand.refined) {
    cert.failures.push_back("newton refinement did not converge");
    cert.certified = false;
  }
  if (!orbit.accepted) {
    cert.failures.push_back("orbit recovery consistency check failed");
    cert.certified = false;
  }
  out.document["certificate"] = to_json(cert);

  out.exit_code = cert.certified ? kExitOk : kExitNotCertified;
  out.document["timings"] = timings_json(start);
  return out;
}

PipelineResult check_conditions_impl(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  PipelineResult out;
  out.document["library_version"] = kLibraryVersion;
  out.document["seed"] = cfg.solver.seed;
  out.document["config"] = cfg.echo();

  ConditionReport rep;
  if (cfg.model_kind == "potential") {
    rep = check_potential_conditions(make_potential(cfg));
  } else {
    const FenchelPair pair = fenchel_transform(make_hamiltonian(cfg));
    rep = check_hamiltonian_conditions(pair);
  }
  out.document["conditions"] = to_json(rep);
  out.exit_code = rep.all_pass ? kExitOk : kExitConditionsFailed;
  out.document["timings"] = timings_json(start);
  return out;
}

PipelineResult fenchel_table_impl(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  PipelineResult out;
  out.document["library_version"] = kLibraryVersion;
  out.document["seed"] = cfg.solver.seed;
  out.document["config"] = cfg.echo();

  const HamiltonianModel model = make_hamiltonian(cfg);
  const FenchelPair pair = fenchel_transform(model);
  json rows = json::array();
  const auto dirs = unit_directions(model.dim, 4, 51);
  for (double r : {1e-2, 1e-1, 1.0, 1e1, 1e2}) {
    for (const auto& e : dirs) {
      const Eigen::VectorXd y = r * e;
      json row;
      row["y"] = std::vector<double>(y.data(), y.data() + y.size());
      const double gnum = pair.conj_numeric(y);
      row["G"] = gnum;
      const Eigen::VectorXd gp = pair.conj_grad_numeric(y);
      row["G_grad"] = std::vector<double>(gp.data(), gp.data() + gp.size());
      if (pair.has_closed_form)
        row["closed_form_rel_err"] =
            std::abs(gnum - pair.conj(y)) / std::max(1.0, std::abs(pair.conj(y)));
      row["young_residual"] = std::abs(pair.conj_numeric(model.grad(gp)) + model.eval(gp) -
                                       gp.dot(model.grad(gp)));
      rows.push_back(row);
    }
  }
  out.document["fenchel_table"] = {{"alpha", pair.alpha},
                                   {"beta", pair.beta_hat},
                                   {"has_closed_form", pair.has_closed_form},
                                   {"rows", rows}};
  out.exit_code = kExitOk;
  out.document["timings"] = timings_json(start);
  return out;
}

PipelineResult certify_impl(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  std::ifstream in(cfg.candidate_document);
  if (!in) throw std::invalid_argument("certify: cannot read " + cfg.candidate_document);
  json doc = json::parse(in);
  if (!doc.contains("config") || !doc.contains("candidate"))
    throw std::invalid_argument("certify: document lacks config/candidate sections");

  RunConfig inner = parse_config(doc.at("config"));
  if (inner.mode != "solve_direct")
    throw std::invalid_argument("certify: only solve_direct documents are supported");

  PipelineResult out;
  out.document["library_version"] = kLibraryVersion;
  out.document["seed"] = inner.solver.seed;
  out.document["config"] = cfg.echo();
  out.document["certified_config"] = inner.echo();

  const Eigen::MatrixXd coeffs = matrix_from_json(doc.at("candidate").at("coefficients"));

  const PotentialModel model = make_potential(inner);
  const SpaceConfig space =
      make_space(inner.period, inner.dimension, inner.symmetry, inner.num_modes);
  const DirectActionContext ctx = make_direct_context(space, model);
  const FunctionalOps ops = direct_ops(ctx);
  Candidate cand;
  cand.point = flatten(coeffs);
  cand.direction = cand.point / ops.norm(cand.point);
  cand.value = ops.value(cand.point);
  cand.residual_norm = ops.gradient(cand.point).norm();
  cand.refined = cand.residual_norm <= inner.solver.newton_tol;
  cand.fiber = fiber_profile(make_fiber(ops, cand.direction), inner.solver.fiber);
  out.document["candidate"] = candidate_json(space, cand);

  Certificate cert;
  cert.ode = ode_residual_direct(ctx, coeffs);
  cert.has_energy = true;
  const SampledField f = synthesize(space, coeffs, ctx.grid);
  cert.energy = energy_drift(model, f.values, f.derivs);
  cert.period = minimal_period_certificate(
      space, coeffs, {}, fiber_max_fn(ops, inner.solver.fiber), cand.value);
  cert.infmax = infmax_audit(ops, cand, inner.infmax_rays, inner.solver.seed + 1000,
                             inner.solver.fiber);
  cert.truncation_agreement = direct_truncation_agreement(inner, model, space, cand);
  finalize_certificate(cert);
  if (!cand.refined) {
    cert.failures.push_back("candidate is not a refined critical point");
    cert.certified = false;
  }
  out.document["certificate"] = to_json(cert);
  out.exit_code = cert.certified ? kExitOk : kExitNotCertified;
  out.document["timings"] = timings_json(start);
  return out;
}

PipelineResult sweep_impl(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  PipelineResult out;
  out.document["library_version"] = kLibraryVersion;
  out.document["seed"] = cfg.solver.seed;
  out.document["config"] = cfg.echo();

  json entries = json::array();
  bool all_certified = true;
  for (double period : cfg.periods) {
    RunConfig sub = cfg;
    sub.mode = "solve_direct";
    sub.period = period;
    sub.periods.clear();
    json entry;
    entry["period_T"] = period;
    try {
      const PipelineResult r = solve_direct_impl(sub);
      entry["exit_code"] = r.exit_code;
      if (r.document.contains("candidate")) {
        entry["action"] = r.document.at("candidate").at("action");
        entry["certified"] = r.document.at("certificate").at("certified");
        entry["ode_residual_rel"] =
            r.document.at("certificate").at("ode_residual").at("rel");
      } else {
        entry["certified"] = false;
        if (r.document.contains("error")) entry["error"] = r.document.at("error");
      }
      all_certified = all_certified && r.exit_code == kExitOk;
      entry["document"] = r.document;
    } catch (const std::exception& e) {
      entry["certified"] = false;
      entry["error"] = e.what();
      all_certified = false;
    }
    entries.push_back(entry);
  }
  out.document["sweep"] = {{"entries", entries}};
  out.exit_code = all_certified ? kExitOk : kExitNotCertified;
  out.document["timings"] = timings_json(start);
  return out;
}

// ---------------------------------------------------------------------------
// output files

void write_text_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << body;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trajectory_csv(const SpaceConfig& space, const Eigen::MatrixXd& coeffs) {
  const QuadratureGrid grid = make_grid(space);
  const SampledField f = synthesize(space, coeffs, grid);
  std::string body = "t";
  for (int d = 1; d <= space.dim; ++d) body += ",x_" + std::to_string(d);
  for (int d = 1; d <= space.dim; ++d) body += ",v_" + std::to_string(d);
  body += "\n";
  for (int i = 0; i < grid.size(); ++i) {
    body += format_double(grid.times[i]);
    for (int d = 0; d < space.dim; ++d) body += "," + format_double(f.values(i, d));
    for (int d = 0; d < space.dim; ++d) body += "," + format_double(f.derivs(i, d));
    body += "\n";
  }
  return body;
}

std::string polyline_svg(const std::vector<std::pair<double, double>>& pts,
                         const std::string& x_label, const std::string& y_label,
                         bool close_path) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& [x, y] : pts) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  const double dx = std::max(xmax - xmin, 1e-12);
  const double dy = std::max(ymax - ymin, 1e-12);
  const double w = 480, h = 480, pad = 50;
  auto sx = [&](double x) { return pad + (x - xmin) / dx * (w - 2 * pad); };
  auto sy = [&](double y) { return h - pad - (y - ymin) / dy * (h - 2 * pad); };

  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" "
      "viewBox=\"0 0 480 480\">\n<rect width=\"480\" height=\"480\" fill=\"white\"/>\n";
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"#999\"/>\n",
                pad, h - pad, w - pad, h - pad);
  svg += buf;
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"#999\"/>\n",
                pad, pad, pad, h - pad);
  svg += buf;
  svg += "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" points=\"";
  for (const auto& [x, y] : pts) {
    std::snprintf(buf, sizeof(buf), "%.3f,%.3f ", sx(x), sy(y));
    svg += buf;
  }
  if (close_path && !pts.empty()) {
    std::snprintf(buf, sizeof(buf), "%.3f,%.3f", sx(pts.front().first),
                  sy(pts.front().second));
    svg += buf;
  }
  svg += "\"/>\n";
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%g\" y=\"%g\" font-size=\"13\" fill=\"#333\">%s</text>\n",
                w / 2 - 20, h - 14, x_label.c_str());
  svg += buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"14\" y=\"%g\" font-size=\"13\" fill=\"#333\" "
                "transform=\"rotate(-90 14 %g)\">%s</text>\n",
                h / 2, h / 2, y_label.c_str());
  svg += buf;
  svg += "</svg>\n";
  return svg;
}

std::string orbit_svg(const SpaceConfig& space, const Eigen::MatrixXd& coeffs) {
  const QuadratureGrid grid = make_grid(space);
  const SampledField f = synthesize(space, coeffs, grid);
  std::vector<std::pair<double, double>> pts;
  if (space.dim == 1) {
    for (int i = 0; i < grid.size(); ++i) pts.push_back({f.values(i, 0), f.derivs(i, 0)});
    return polyline_svg(pts, "x", "xdot", true);
  }
  for (int i = 0; i < grid.size(); ++i) pts.push_back({f.values(i, 0), f.values(i, 1)});
  return polyline_svg(pts, "x_1", "x_2", true);
}

std::string sweep_svg(const json& sweep) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& e : sweep.at("entries"))
    if (e.contains("action")) pts.push_back({e.at("period_T"), e.at("action")});
  if (pts.empty()) pts.push_back({0.0, 0.0});
  return polyline_svg(pts, "T", "action", false);
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& config) {
  if (config.mode == "solve_direct") return solve_direct_impl(config);
  if (config.mode == "solve_dual") return solve_dual_impl(config);
  if (config.mode == "check_conditions") return check_conditions_impl(config);
  if (config.mode == "fenchel_table") return fenchel_table_impl(config);
  if (config.mode == "certify") return certify_impl(config);
  if (config.mode == "sweep") return sweep_impl(config);
  throw std::invalid_argument("unknown mode " + config.mode);
}

void emit_outputs(const RunConfig& config, PipelineResult& result) {
  namespace fs = std::filesystem;
  const fs::path dir(config.out_dir);
  fs::create_directories(dir);

  if (result.document.contains("candidate")) {
    const json& cj = result.document.at("candidate");
    const json& sj = cj.at("space");
    const SpaceConfig space = make_space(
        sj.at("period_T").get<double>(), sj.at("dimension").get<int>(),
        symmetry_class_from_string(sj.at("symmetry_class").get<std::string>()),
        sj.at("num_modes").get<int>());
    Eigen::MatrixXd coeffs = matrix_from_json(cj.at("coefficients"));
    std::string csv;
    // Dual runs tabulate the recovered orbit rather than the dual field.
    if (result.document.contains("recovered_orbit")) {
      const json& oj = result.document.at("recovered_orbit");
      coeffs = matrix_from_json(oj.at("orbit_coefficients"));
      const QuadratureGrid grid = make_grid(space);
      SampledField f = synthesize(space, coeffs, grid);
      const auto& xi = oj.at("xi");
      for (int d = 0; d < space.dim; ++d)
        f.values.col(d).array() += xi.at(static_cast<size_t>(d)).get<double>();
      std::string body = "t";
      for (int d = 1; d <= space.dim; ++d) body += ",x_" + std::to_string(d);
      for (int d = 1; d <= space.dim; ++d) body += ",v_" + std::to_string(d);
      body += "\n";
      for (int i = 0; i < grid.size(); ++i) {
        body += format_double(grid.times[i]);
        for (int d = 0; d < space.dim; ++d) body += "," + format_double(f.values(i, d));
        for (int d = 0; d < space.dim; ++d) body += "," + format_double(f.derivs(i, d));
        body += "\n";
      }
      csv = body;
    } else {
      csv = trajectory_csv(space, coeffs);
    }
    write_text_file(dir / config.trajectory_name, csv);
    try {
      write_text_file(dir / config.plot_name, orbit_svg(space, coeffs));
    } catch (const std::exception& e) {
      result.document["warnings"].push_back(std::string("plot emission failed: ") +
                                            e.what());
    }
  } else if (result.document.contains("sweep")) {
    try {
      write_text_file(dir / config.plot_name, sweep_svg(result.document.at("sweep")));
    } catch (const std::exception& e) {
      result.document["warnings"].push_back(std::string("plot emission failed: ") +
                                            e.what());
    }
  }

  write_text_file(dir / config.document_name, result.document.dump(2) + "\n");
}

std::string document_fingerprint(const nlohmann::json& document) {
  json copy = document;
  copy.erase("timings");
  if (copy.contains("sweep"))
    for (auto& e : copy["sweep"]["entries"])
      if (e.contains("document")) e["document"].erase("timings");
  return copy.dump(2);
}

}  // namespace minper
