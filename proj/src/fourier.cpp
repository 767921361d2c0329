#include "minper/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace minper {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<BasisMode> build_basis(SymmetryClass symmetry, int num_modes) {
  std::vector<BasisMode> basis;
  switch (symmetry) {
    case SymmetryClass::E1:
      // Odd-frequency cosines; verified against the reflection identities
      // in make_space rather than taken on faith.
      for (int j = 0; j < num_modes; ++j) basis.push_back({2 * j + 1, false});
      break;
    case SymmetryClass::E2:
      for (int j = 0; j < num_modes; ++j) {
        basis.push_back({2 * j + 1, false});
        basis.push_back({2 * j + 1, true});
      }
      break;
    case SymmetryClass::E3:
      for (int k = 1; k <= num_modes; ++k) basis.push_back({k, true});
      break;
    case SymmetryClass::FullMeanZero:
      for (int k = 1; k <= num_modes; ++k) {
        basis.push_back({k, false});
        basis.push_back({k, true});
      }
      break;
  }
  return basis;
}

Eigen::VectorXd basis_samples(const BasisMode& mode, double period,
                              const Eigen::VectorXd& times) {
  const double omega = kTwoPi * mode.freq / period;
  Eigen::VectorXd out(times.size());
  for (Eigen::Index i = 0; i < times.size(); ++i)
    out[i] = mode.sine ? std::sin(omega * times[i]) : std::cos(omega * times[i]);
  return out;
}

}  // namespace

std::string to_string(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::E1: return "E1";
    case SymmetryClass::E2: return "E2";
    case SymmetryClass::E3: return "E3";
    case SymmetryClass::FullMeanZero: return "FULL_MEANZERO";
  }
  return "?";
}

SymmetryClass symmetry_class_from_string(const std::string& s) {
  if (s == "E1") return SymmetryClass::E1;
  if (s == "E2") return SymmetryClass::E2;
  if (s == "E3") return SymmetryClass::E3;
  if (s == "FULL_MEANZERO") return SymmetryClass::FullMeanZero;
  throw std::invalid_argument("unknown symmetry class: " + s);
}

int SpaceConfig::max_freq() const {
  int m = 0;
  for (const auto& b : basis) m = std::max(m, b.freq);
  return m;
}

double SpaceConfig::omega(int basis_index) const {
  return kTwoPi * basis[static_cast<size_t>(basis_index)].freq / period;
}

SpaceConfig make_space(double period_T, int dim_N, SymmetryClass symmetry, int num_modes) {
  if (!(period_T > 0.0) || !std::isfinite(period_T))
    throw std::invalid_argument("make_space: period must be positive");
  if (dim_N < 1) throw std::invalid_argument("make_space: dimension must be >= 1");
  if (num_modes < 1) throw std::invalid_argument("make_space: need at least one mode");

  SpaceConfig space;
  space.period = period_T;
  space.dim = dim_N;
  space.symmetry = symmetry;
  space.num_modes = num_modes;
  space.basis = build_basis(symmetry, num_modes);
  space.grid_points = std::max(64, 8 * space.max_freq());

  // Basis self-test: every basis function must satisfy its class identities.
  const QuadratureGrid grid = make_grid(space);
  for (const auto& mode : space.basis) {
    Eigen::MatrixXd samples = basis_samples(mode, period_T, grid.times);
    const SymmetryReport rep = symmetry_check(samples, symmetry, 1e-12);
    if (!rep.pass)
      throw std::logic_error("make_space: basis function freq " + std::to_string(mode.freq) +
                             (mode.sine ? " sin" : " cos") + " violates " +
                             to_string(symmetry) + " identities");
  }
  return space;
}

QuadratureGrid make_grid(double period, int points) {
  if (points < 1) throw std::invalid_argument("make_grid: need at least one point");
  QuadratureGrid grid;
  grid.period = period;
  grid.weight = period / points;
  grid.times.resize(points);
  for (int i = 0; i < points; ++i) grid.times[i] = period * i / points;
  return grid;
}

QuadratureGrid make_grid(const SpaceConfig& space) {
  return make_grid(space.period, space.grid_points);
}

TrajectoryCoeffs make_trajectory(const SpaceConfig& space) {
  return {space, Eigen::MatrixXd::Zero(space.basis_size(), space.dim)};
}

DualFieldCoeffs make_dual_field(const SpaceConfig& space) {
  if (space.symmetry != SymmetryClass::FullMeanZero)
    throw std::invalid_argument("make_dual_field: space must be FULL_MEANZERO");
  if (space.dim % 2 != 0)
    throw std::invalid_argument("make_dual_field: dual fields need even dimension");
  return {space, Eigen::MatrixXd::Zero(space.basis_size(), space.dim)};
}

SampledField synthesize(const SpaceConfig& space, const Eigen::MatrixXd& coeffs,
                        const QuadratureGrid& grid) {
  if (coeffs.rows() != space.basis_size() || coeffs.cols() != space.dim)
    throw std::invalid_argument("synthesize: coefficient shape does not match space");
  if (std::abs(grid.period - space.period) > 1e-14 * space.period)
    throw std::invalid_argument("synthesize: grid period does not match space");

  const int m = grid.size();
  SampledField out;
  out.values = Eigen::MatrixXd::Zero(m, space.dim);
  out.derivs = Eigen::MatrixXd::Zero(m, space.dim);
  for (int b = 0; b < space.basis_size(); ++b) {
    const BasisMode& mode = space.basis[static_cast<size_t>(b)];
    const double omega = space.omega(b);
    for (int i = 0; i < m; ++i) {
      const double arg = omega * grid.times[i];
      const double c = std::cos(arg);
      const double s = std::sin(arg);
      const double val = mode.sine ? s : c;
      const double der = mode.sine ? omega * c : -omega * s;
      for (int d = 0; d < space.dim; ++d) {
        out.values(i, d) += coeffs(b, d) * val;
        out.derivs(i, d) += coeffs(b, d) * der;
      }
    }
  }
  return out;
}

SampledField synthesize(const TrajectoryCoeffs& x, const QuadratureGrid& grid) {
  return synthesize(x.space, x.coeffs, grid);
}

SampledField synthesize(const DualFieldCoeffs& u, const QuadratureGrid& grid) {
  return synthesize(u.space, u.coeffs, grid);
}

Eigen::MatrixXd synthesize_at(const SpaceConfig& space, const Eigen::MatrixXd& coeffs,
                              const Eigen::VectorXd& times) {
  Eigen::MatrixXd values = Eigen::MatrixXd::Zero(times.size(), space.dim);
  for (int b = 0; b < space.basis_size(); ++b) {
    const BasisMode& mode = space.basis[static_cast<size_t>(b)];
    const double omega = space.omega(b);
    for (Eigen::Index i = 0; i < times.size(); ++i) {
      const double arg = omega * times[i];
      const double val = mode.sine ? std::sin(arg) : std::cos(arg);
      for (int d = 0; d < space.dim; ++d) values(i, d) += coeffs(b, d) * val;
    }
  }
  return values;
}

AnalysisResult analyze(const Eigen::MatrixXd& samples, const SpaceConfig& space) {
  if (samples.rows() != space.grid_points)
    throw std::invalid_argument("analyze: sample count does not match the space grid");
  if (samples.cols() != space.dim)
    throw std::invalid_argument("analyze: sample dimension does not match the space");

  const QuadratureGrid grid = make_grid(space);
  const int m = grid.size();
  AnalysisResult res;
  res.coeffs = Eigen::MatrixXd::Zero(space.basis_size(), space.dim);
  // Discrete orthogonality on the uniform grid: each mode is recovered by
  // (2/M) sum samples * basis, exact while max_freq < M/2.
  for (int b = 0; b < space.basis_size(); ++b) {
    const Eigen::VectorXd phi = basis_samples(space.basis[static_cast<size_t>(b)],
                                              space.period, grid.times);
    for (int d = 0; d < space.dim; ++d)
      res.coeffs(b, d) = 2.0 / m * phi.dot(samples.col(d));
  }
  res.mean_remainder = samples.colwise().mean().transpose();
  const SampledField back = synthesize(space, res.coeffs, grid);
  res.residual_sup = (samples - back.values).cwiseAbs().maxCoeff();
  return res;
}

double h1_seminorm(const SpaceConfig& space, const Eigen::MatrixXd& coeffs) {
  double sq = 0.0;
  for (int b = 0; b < space.basis_size(); ++b) {
    const double w = space.omega(b);
    sq += w * w * (space.period / 2.0) * coeffs.row(b).squaredNorm();
  }
  return std::sqrt(sq);
}

double h1_seminorm(const TrajectoryCoeffs& x) { return h1_seminorm(x.space, x.coeffs); }

double lalpha_norm(const SpaceConfig& space, const Eigen::MatrixXd& coeffs, double alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha))
    throw std::invalid_argument("lalpha_norm: alpha must lie in (1, inf)");
  const QuadratureGrid grid = make_grid(space);
  const SampledField f = synthesize(space, coeffs, grid);
  double acc = 0.0;
  for (int i = 0; i < grid.size(); ++i)
    acc += grid.weight * std::pow(f.values.row(i).norm(), alpha);
  return std::pow(acc, 1.0 / alpha);
}

double lalpha_norm(const DualFieldCoeffs& u, double alpha) {
  return lalpha_norm(u.space, u.coeffs, alpha);
}

DualFieldCoeffs pi_operator(const DualFieldCoeffs& u) {
  DualFieldCoeffs out = u;
  out.coeffs.setZero();
  // cos_k -> sin_k / omega, sin_k -> -cos_k / omega; zero mean by construction.
  for (int k = 0; k < u.space.num_modes; ++k) {
    const int bc = 2 * k;
    const int bs = 2 * k + 1;
    const double omega = u.space.omega(bc);
    out.coeffs.row(bs) += u.coeffs.row(bc) / omega;
    out.coeffs.row(bc) -= u.coeffs.row(bs) / omega;
  }
  return out;
}

namespace {

double reflection_violation(const Eigen::MatrixXd& x, int center, double sign) {
  // Checks x(c + s) == sign * x(c - s) for grid shifts s; center is a grid
  // index (M divisible by 4 keeps all four centers on the grid).
  const int m = static_cast<int>(x.rows());
  double worst = 0.0;
  for (int i = 0; i < m; ++i) {
    const int plus = ((center + i) % m + m) % m;
    const int minus = ((center - i) % m + m) % m;
    const double v = (x.row(plus) - sign * x.row(minus)).cwiseAbs().maxCoeff();
    worst = std::max(worst, v);
  }
  return worst;
}

double antiperiod_violation(const Eigen::MatrixXd& x) {
  const int m = static_cast<int>(x.rows());
  double worst = 0.0;
  for (int i = 0; i < m; ++i) {
    const double v = (x.row((i + m / 2) % m) + x.row(i)).cwiseAbs().maxCoeff();
    worst = std::max(worst, v);
  }
  return worst;
}

}  // namespace

SymmetryReport symmetry_check(const Eigen::MatrixXd& samples, SymmetryClass symmetry,
                              double tol) {
  const int m = static_cast<int>(samples.rows());
  if (m % 4 != 0)
    throw std::invalid_argument("symmetry_check: sample count must be divisible by 4");

  SymmetryReport rep;
  switch (symmetry) {
    case SymmetryClass::E1:
      rep.identities.push_back({"even_about_0", reflection_violation(samples, 0, +1.0)});
      rep.identities.push_back({"even_about_T2", reflection_violation(samples, m / 2, +1.0)});
      rep.identities.push_back({"odd_about_T4", reflection_violation(samples, m / 4, -1.0)});
      rep.identities.push_back(
          {"odd_about_3T4", reflection_violation(samples, 3 * m / 4, -1.0)});
      break;
    case SymmetryClass::E2:
      rep.identities.push_back({"antiperiodic_T2", antiperiod_violation(samples)});
      break;
    case SymmetryClass::E3:
      rep.identities.push_back({"odd_about_0", reflection_violation(samples, 0, -1.0)});
      break;
    case SymmetryClass::FullMeanZero:
      rep.identities.push_back(
          {"zero_mean", samples.colwise().mean().cwiseAbs().maxCoeff()});
      break;
  }
  for (const auto& id : rep.identities) rep.max_violation = std::max(rep.max_violation, id.violation);
  rep.pass = rep.max_violation <= tol;
  return rep;
}

Eigen::VectorXd flatten(const Eigen::MatrixXd& coeffs) {
  return Eigen::Map<const Eigen::VectorXd>(coeffs.data(), coeffs.size());
}

Eigen::MatrixXd unflatten(const Eigen::VectorXd& v, const SpaceConfig& space) {
  if (v.size() != space.coeff_count())
    throw std::invalid_argument("unflatten: size mismatch");
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), space.basis_size(), space.dim);
}

Eigen::MatrixXd resize_modes(const SpaceConfig& from, const Eigen::MatrixXd& coeffs,
                             const SpaceConfig& to) {
  if (from.symmetry != to.symmetry || from.dim != to.dim ||
      std::abs(from.period - to.period) > 1e-14 * from.period)
    throw std::invalid_argument("resize_modes: spaces differ beyond truncation");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(to.basis_size(), to.dim);
  for (int b = 0; b < from.basis_size(); ++b) {
    const BasisMode& mode = from.basis[static_cast<size_t>(b)];
    for (int c = 0; c < to.basis_size(); ++c) {
      const BasisMode& target = to.basis[static_cast<size_t>(c)];
      if (target.freq == mode.freq && target.sine == mode.sine) {
        out.row(c) = coeffs.row(b);
        break;
      }
    }
  }
  return out;
}

}  // namespace minper
