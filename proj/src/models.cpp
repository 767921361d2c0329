#include "minper/models.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace minper {

Eigen::VectorXd fd_gradient(const ScalarField& f, const Eigen::VectorXd& x,
                            double step_scale) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = step_scale * (1.0 + std::abs(x[i]));
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

Eigen::MatrixXd fd_jacobian(const VectorField& f, const Eigen::VectorXd& x,
                            double step_scale) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd jac(f(x).size(), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = step_scale * (1.0 + std::abs(x[i]));
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    jac.col(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return jac;
}

void validate_gradient(const ScalarField& f, const VectorField& g, int dim,
                       double rel_tol, int points, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int p = 0; p < points; ++p) {
    Eigen::VectorXd x(dim);
    for (int d = 0; d < dim; ++d) x[d] = normal(rng);
    const Eigen::VectorXd ga = g(x);
    const Eigen::VectorXd gn = fd_gradient(f, x);
    const double scale = std::max(1.0, std::max(ga.norm(), gn.norm()));
    if ((ga - gn).norm() > rel_tol * scale)
      throw std::runtime_error("validate_gradient: analytic gradient disagrees with "
                               "finite differences");
  }
}

std::vector<Eigen::VectorXd> unit_directions(int dim, int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Eigen::VectorXd> dirs;
  dirs.reserve(static_cast<size_t>(count));
  Eigen::VectorXd first = Eigen::VectorXd::Zero(dim);
  first[0] = 1.0;
  dirs.push_back(first);
  while (static_cast<int>(dirs.size()) < count) {
    Eigen::VectorXd v(dim);
    for (int d = 0; d < dim; ++d) v[d] = normal(rng);
    const double n = v.norm();
    if (n > 1e-12) dirs.push_back(v / n);
  }
  return dirs;
}

namespace {

double get_param(const std::map<std::string, double>& params, const std::string& key,
                 double fallback, bool required = false) {
  auto it = params.find(key);
  if (it != params.end()) return it->second;
  if (required) throw std::invalid_argument("missing model parameter: " + key);
  return fallback;
}

Eigen::VectorXd lambda_weights(const std::map<std::string, double>& params, int dim) {
  Eigen::VectorXd lam = Eigen::VectorXd::Ones(dim);
  for (int d = 0; d < dim; ++d) {
    auto it = params.find("lambda" + std::to_string(d));
    if (it != params.end()) lam[d] = it->second;
  }
  if ((lam.array() <= 0.0).any())
    throw std::invalid_argument("anisotropic weights must be positive");
  return lam;
}

void attach_fd_hessian(PotentialModel& model) {
  const VectorField grad = model.grad;
  model.hess = [grad](const Eigen::VectorXd& x) { return fd_jacobian(grad, x); };
}

PotentialModel power_potential(const std::map<std::string, double>& params, int dim) {
  const double beta = get_param(params, "beta", 0.0, true);
  if (!(beta > 2.0)) throw std::invalid_argument("power potential needs beta > 2");
  PotentialModel m;
  m.name = "power";
  m.params = {{"beta", beta}};
  m.dim = dim;
  m.claims_even = true;
  m.eval = [beta](const Eigen::VectorXd& x) { return std::pow(x.norm(), beta) / beta; };
  m.grad = [beta](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const double r = x.norm();
    if (r == 0.0) return Eigen::VectorXd::Zero(x.size());
    return std::pow(r, beta - 2.0) * x;
  };
  m.hess = [beta](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
    const double r = x.norm();
    const Eigen::Index n = x.size();
    if (r == 0.0) return Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd h = std::pow(r, beta - 2.0) * Eigen::MatrixXd::Identity(n, n);
    h += (beta - 2.0) * std::pow(r, beta - 4.0) * (x * x.transpose());
    return h;
  };
  return m;
}

PotentialModel log_quadratic_potential(const std::map<std::string, double>& params,
                                       int dim) {
  const double p = get_param(params, "p", 1.0);
  const double q = get_param(params, "q", 1.0);
  if (!(p > 0.0) || !(q > 0.0))
    throw std::invalid_argument("log_quadratic potential needs p, q > 0");
  PotentialModel m;
  m.name = "log_quadratic";
  m.params = {{"p", p}, {"q", q}};
  m.dim = dim;
  m.claims_even = true;
  m.eval = [p, q](const Eigen::VectorXd& x) {
    const double r = x.norm();
    if (r == 0.0) return 0.0;
    return r * r * std::pow(std::log1p(std::pow(r, p)), q);
  };
  m.grad = [p, q](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const double r = x.norm();
    if (r == 0.0) return Eigen::VectorXd::Zero(x.size());
    const double rp = std::pow(r, p);
    const double L = std::log1p(rp);
    // d/dr [r^2 L^q] = 2 r L^q + p q r^{p+1} L^{q-1} / (1 + r^p), radial field.
    const double fr = 2.0 * r * std::pow(L, q) +
                      p * q * std::pow(r, p + 1.0) * std::pow(L, q - 1.0) / (1.0 + rp);
    return (fr / r) * x;
  };
  attach_fd_hessian(m);
  return m;
}

PotentialModel quadratic_potential(const std::map<std::string, double>& params, int dim) {
  const double omega = get_param(params, "omega", 1.0);
  if (!(omega > 0.0)) throw std::invalid_argument("quadratic potential needs omega > 0");
  PotentialModel m;
  m.name = "quadratic";
  m.params = {{"omega", omega}};
  m.dim = dim;
  m.claims_even = true;
  const double w2 = omega * omega;
  m.eval = [w2](const Eigen::VectorXd& x) { return 0.5 * w2 * x.squaredNorm(); };
  m.grad = [w2](const Eigen::VectorXd& x) -> Eigen::VectorXd { return w2 * x; };
  m.hess = [w2](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
    return w2 * Eigen::MatrixXd::Identity(x.size(), x.size());
  };
  return m;
}

PotentialModel anisotropic_power_potential(const std::map<std::string, double>& params,
                                           int dim) {
  const double beta = get_param(params, "beta", 0.0, true);
  if (!(beta > 2.0)) throw std::invalid_argument("anisotropic_power needs beta > 2");
  const Eigen::VectorXd lam = lambda_weights(params, dim);
  PotentialModel m;
  m.name = "anisotropic_power";
  m.params = params;
  m.params["beta"] = beta;
  m.dim = dim;
  m.claims_even = true;
  m.eval = [beta, lam](const Eigen::VectorXd& x) {
    double v = 0.0;
    for (Eigen::Index d = 0; d < x.size(); ++d)
      v += lam[d] * std::pow(std::abs(x[d]), beta) / beta;
    return v;
  };
  m.grad = [beta, lam](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    Eigen::VectorXd g(x.size());
    for (Eigen::Index d = 0; d < x.size(); ++d)
      g[d] = lam[d] * std::pow(std::abs(x[d]), beta - 2.0) * x[d];
    return g;
  };
  m.hess = [beta, lam](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(x.size(), x.size());
    for (Eigen::Index d = 0; d < x.size(); ++d)
      h(d, d) = lam[d] * (beta - 1.0) * std::pow(std::abs(x[d]), beta - 2.0);
    return h;
  };
  return m;
}

void normalize_origin(ScalarField& eval, int dim) {
  // Shift so the value at the origin is 0; immaterial for the dynamics.
  const ScalarField raw = eval;
  const double off = raw(Eigen::VectorXd::Zero(dim));
  if (off == 0.0) return;
  eval = [raw, off](const Eigen::VectorXd& x) { return raw(x) - off; };
}

}  // namespace

PotentialModel builtin_potential(const std::string& name,
                                 const std::map<std::string, double>& params, int dim) {
  if (dim < 1) throw std::invalid_argument("potential dimension must be >= 1");
  PotentialModel m;
  if (name == "power")
    m = power_potential(params, dim);
  else if (name == "log_quadratic")
    m = log_quadratic_potential(params, dim);
  else if (name == "quadratic")
    m = quadratic_potential(params, dim);
  else if (name == "anisotropic_power")
    m = anisotropic_power_potential(params, dim);
  else
    throw std::invalid_argument("unknown potential: " + name);
  normalize_origin(m.eval, dim);
  if (!m.hess) attach_fd_hessian(m);
  validate_gradient(m.eval, m.grad, dim);
  return m;
}

HamiltonianModel builtin_hamiltonian(const std::string& name,
                                     const std::map<std::string, double>& params, int dim) {
  if (dim < 2 || dim % 2 != 0)
    throw std::invalid_argument("hamiltonian dimension must be even and >= 2");
  const double beta = get_param(params, "beta", 0.0, true);
  if (!(beta > 2.0)) throw std::invalid_argument("hamiltonian needs beta > 2");

  HamiltonianModel h;
  h.dim = dim;
  h.claims_strictly_convex = true;
  h.growth_beta = beta;
  if (name == "power") {
    PotentialModel base = power_potential(params, dim);
    h.name = "power";
    h.params = base.params;
    h.eval = base.eval;
    h.grad = base.grad;
  } else if (name == "anisotropic_power") {
    PotentialModel base = anisotropic_power_potential(params, dim);
    h.name = "anisotropic_power";
    h.params = base.params;
    h.eval = base.eval;
    h.grad = base.grad;
  } else {
    throw std::invalid_argument("unknown hamiltonian: " + name);
  }
  normalize_origin(h.eval, dim);
  validate_gradient(h.eval, h.grad, dim);
  return h;
}

GrowthFit fit_growth_exponent(const ScalarField& f, int dim, double r_lo, double r_hi,
                              int ladder, int directions, unsigned seed) {
  if (!(r_lo > 0.0) || !(r_hi > r_lo) || ladder < 2)
    throw std::invalid_argument("fit_growth_exponent: bad radius ladder");
  const auto dirs = unit_directions(dim, directions, seed);
  std::vector<double> logs_r, logs_f;
  GrowthFit fit;
  for (int i = 0; i < ladder; ++i) {
    const double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / (ladder - 1));
    for (const auto& e : dirs) {
      const double v = f(r * e);
      if (!std::isfinite(v) || v <= 0.0) {
        fit.finite = false;
        continue;
      }
      logs_r.push_back(std::log(r));
      logs_f.push_back(std::log(v));
    }
  }
  if (logs_r.size() < 2) {
    fit.finite = false;
    return fit;
  }
  // Least-squares slope of log f against log r.
  const double n = static_cast<double>(logs_r.size());
  double sr = 0, sf = 0, srr = 0, srf = 0;
  for (size_t i = 0; i < logs_r.size(); ++i) {
    sr += logs_r[i];
    sf += logs_f[i];
    srr += logs_r[i] * logs_r[i];
    srf += logs_r[i] * logs_f[i];
  }
  fit.exponent = (n * srf - sr * sf) / (n * srr - sr * sr);
  fit.c_lo = std::numeric_limits<double>::infinity();
  fit.c_hi = 0.0;
  for (size_t i = 0; i < logs_r.size(); ++i) {
    const double c = std::exp(logs_f[i] - fit.exponent * logs_r[i]);
    fit.c_lo = std::min(fit.c_lo, c);
    fit.c_hi = std::max(fit.c_hi, c);
  }
  return fit;
}

}  // namespace minper
