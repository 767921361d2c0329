#include "minper/fourier.hpp"
#include "testkit.hpp"

#include <numbers>
#include <random>

using namespace minper;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd random_coeffs(const SpaceConfig& space, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd c(space.basis_size(), space.dim);
  for (int b = 0; b < c.rows(); ++b)
    for (int d = 0; d < c.cols(); ++d) c(b, d) = normal(rng);
  return c;
}

void test_make_space() {
  const SpaceConfig e1 = make_space(1.0, 1, SymmetryClass::E1, 3);
  CHECK(e1.basis_size() == 3);
  CHECK(e1.basis[0].freq == 1 && !e1.basis[0].sine);
  CHECK(e1.basis[1].freq == 3 && !e1.basis[1].sine);
  CHECK(e1.basis[2].freq == 5 && !e1.basis[2].sine);
  CHECK(e1.grid_points == 64);  // max(64, 8 * 5)

  const SpaceConfig e3 = make_space(1.0, 1, SymmetryClass::E3, 3);
  CHECK(e3.basis_size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(e3.basis[k].freq == k + 1 && e3.basis[k].sine);

  CHECK_THROWS(make_space(1.0, 1, SymmetryClass::E1, 0));
  CHECK_THROWS(make_space(-2.0, 1, SymmetryClass::E1, 3));
  CHECK_THROWS(make_space(1.0, 0, SymmetryClass::E1, 3));
  CHECK_THROWS(make_dual_field(make_space(1.0, 3, SymmetryClass::FullMeanZero, 3)));

  const SpaceConfig big = make_space(1.0, 1, SymmetryClass::E1, 16);
  CHECK(big.grid_points == 8 * 31);
}

void test_synthesize_single_mode() {
  const SpaceConfig space = make_space(1.0, 1, SymmetryClass::E1, 3);
  const QuadratureGrid grid = make_grid(space);
  TrajectoryCoeffs x = make_trajectory(space);
  x.coeffs(0, 0) = 1.0;  // cos(2 pi t)
  const SampledField f = synthesize(x, grid);
  double worst_v = 0.0, worst_d = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    worst_v = std::max(worst_v, std::abs(f.values(i, 0) - std::cos(2.0 * kPi * grid.times[i])));
    worst_d = std::max(worst_d,
                       std::abs(f.derivs(i, 0) + 2.0 * kPi * std::sin(2.0 * kPi * grid.times[i])));
  }
  CHECK(worst_v < 1e-14);
  CHECK(worst_d < 1e-13);

  // Zero coefficients synthesize to zero; two-mode sums are linear.
  TrajectoryCoeffs zero = make_trajectory(space);
  CHECK(synthesize(zero, grid).values.cwiseAbs().maxCoeff() == 0.0);

  TrajectoryCoeffs y = make_trajectory(space);
  y.coeffs(1, 0) = 0.7;
  TrajectoryCoeffs both = make_trajectory(space);
  both.coeffs = x.coeffs + y.coeffs;
  const Eigen::MatrixXd sum = synthesize(x, grid).values + synthesize(y, grid).values;
  CHECK((synthesize(both, grid).values - sum).cwiseAbs().maxCoeff() < 1e-14);
}

void test_analyze_round_trip() {
  for (SymmetryClass cls : {SymmetryClass::E1, SymmetryClass::E2, SymmetryClass::E3,
                            SymmetryClass::FullMeanZero}) {
    const int dim = (cls == SymmetryClass::FullMeanZero) ? 2 : 2;
    const SpaceConfig space = make_space(1.7, dim, cls, 5);
    const Eigen::MatrixXd c = random_coeffs(space, 42);
    const SampledField f = synthesize(space, c, make_grid(space));
    const AnalysisResult res = analyze(f.values, space);
    CHECK((res.coeffs - c).cwiseAbs().maxCoeff() < 1e-12 * c.cwiseAbs().maxCoeff());
    CHECK(res.residual_sup < 1e-12);
  }

  // Frequency 2 is not representable in E1: the analysis reports a residual.
  const SpaceConfig e1 = make_space(1.0, 1, SymmetryClass::E1, 3);
  const QuadratureGrid grid = make_grid(e1);
  Eigen::MatrixXd alien(grid.size(), 1);
  for (int i = 0; i < grid.size(); ++i) alien(i, 0) = std::cos(4.0 * kPi * grid.times[i]);
  const AnalysisResult res = analyze(alien, e1);
  CHECK(res.residual_sup > 0.5);

  // Constants project to nothing in the mean-zero space; the mean is reported.
  const SpaceConfig fmz = make_space(1.0, 2, SymmetryClass::FullMeanZero, 3);
  Eigen::MatrixXd constant = Eigen::MatrixXd::Constant(fmz.grid_points, 2, 3.25);
  const AnalysisResult cres = analyze(constant, fmz);
  CHECK(cres.coeffs.cwiseAbs().maxCoeff() < 1e-13);
  CHECK_NEAR(cres.mean_remainder[0], 3.25, 1e-13);

  CHECK_THROWS(analyze(Eigen::MatrixXd::Zero(10, 1), e1));
}

void test_h1_seminorm() {
  const SpaceConfig space = make_space(1.0, 1, SymmetryClass::E1, 4);
  TrajectoryCoeffs x = make_trajectory(space);
  x.coeffs(0, 0) = 1.0;
  CHECK_REL(h1_seminorm(x) * h1_seminorm(x), 2.0 * kPi * kPi, 1e-12);

  CHECK(h1_seminorm(make_trajectory(space)) == 0.0);

  TrajectoryCoeffs y = {space, random_coeffs(space, 3)};
  CHECK_REL(h1_seminorm({space, 2.5 * y.coeffs}), 2.5 * h1_seminorm(y), 1e-13);

  // Parseval: the spectral value agrees with quadrature of |xdot|^2.
  const QuadratureGrid grid = make_grid(space);
  const SampledField f = synthesize(y, grid);
  double quad = 0.0;
  for (int i = 0; i < grid.size(); ++i) quad += grid.weight * f.derivs.row(i).squaredNorm();
  CHECK_REL(h1_seminorm(y) * h1_seminorm(y), quad, 1e-10);
}

void test_lalpha_norm() {
  const SpaceConfig space = make_space(2.0, 2, SymmetryClass::FullMeanZero, 3);
  DualFieldCoeffs u = make_dual_field(space);
  u.coeffs(0, 0) = 1.0;  // (cos, sin) with |u| = 1 pointwise
  u.coeffs(1, 1) = 1.0;
  const double alpha = 1.5;
  CHECK_REL(lalpha_norm(u, alpha), std::pow(2.0, 1.0 / alpha), 1e-12);

  CHECK(lalpha_norm(make_dual_field(space), alpha) == 0.0);
  CHECK_THROWS(lalpha_norm(u, 0.9));

  // alpha = 2 matches the Parseval value.
  DualFieldCoeffs w = {space, random_coeffs(space, 5)};
  double parseval_sq = 0.0;
  for (int b = 0; b < space.basis_size(); ++b)
    parseval_sq += (space.period / 2.0) * w.coeffs.row(b).squaredNorm();
  CHECK_REL(lalpha_norm(w, 2.0), std::sqrt(parseval_sq), 1e-10);
}

void test_pi_operator() {
  const SpaceConfig space = make_space(3.0, 2, SymmetryClass::FullMeanZero, 4);
  DualFieldCoeffs u = make_dual_field(space);
  u.coeffs(2, 0) = 2.0;  // 2 cos(2 pi 2 t / T) in component 0
  const DualFieldCoeffs piu = pi_operator(u);
  const double expected = 2.0 * space.period / (2.0 * kPi * 2.0);
  CHECK_REL(piu.coeffs(3, 0), expected, 1e-14);

  // d/dt (Pi u) = u on the grid and mean(Pi u) = 0, for random u.
  DualFieldCoeffs r = {space, random_coeffs(space, 9)};
  const QuadratureGrid grid = make_grid(space);
  const DualFieldCoeffs pir = pi_operator(r);
  const SampledField dpi = synthesize(pir, grid);
  const SampledField ru = synthesize(r, grid);
  CHECK((dpi.derivs - ru.values).cwiseAbs().maxCoeff() <
        1e-12 * ru.values.cwiseAbs().maxCoeff());
  CHECK(dpi.values.colwise().mean().cwiseAbs().maxCoeff() < 1e-14);
}

void test_symmetry_check() {
  const int m = 64;
  const QuadratureGrid grid = make_grid(1.0, m);
  auto sample = [&](double freq, bool sine) {
    Eigen::MatrixXd s(m, 1);
    for (int i = 0; i < m; ++i)
      s(i, 0) = sine ? std::sin(2.0 * kPi * freq * grid.times[i])
                     : std::cos(2.0 * kPi * freq * grid.times[i]);
    return s;
  };

  CHECK(symmetry_check(sample(3, false), SymmetryClass::E1, 1e-14).pass);
  CHECK(!symmetry_check(sample(2, false), SymmetryClass::E1, 1e-10).pass);
  CHECK(symmetry_check(sample(1, true), SymmetryClass::E3, 1e-14).pass);
  CHECK(symmetry_check(sample(1, true), SymmetryClass::E2, 1e-13).pass);
  CHECK(!symmetry_check(sample(2, true), SymmetryClass::E2, 1e-10).pass);

  CHECK_THROWS(symmetry_check(Eigen::MatrixXd::Zero(30, 1), SymmetryClass::E1, 1e-10));

  // Every E1 basis function satisfies all four identities tightly.
  const SpaceConfig e1 = make_space(1.0, 1, SymmetryClass::E1, 8);
  const QuadratureGrid g1 = make_grid(e1);
  for (int b = 0; b < e1.basis_size(); ++b) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(e1.basis_size(), 1);
    c(b, 0) = 1.0;
    const SymmetryReport rep =
        symmetry_check(synthesize(e1, c, g1).values, SymmetryClass::E1, 1e-13);
    CHECK(rep.pass);
  }
}

void test_wirtinger_and_sobolev() {
  const SpaceConfig space = make_space(1.3, 1, SymmetryClass::E1, 6);
  const QuadratureGrid grid = make_grid(space);
  const double T = space.period;

  for (unsigned seed : {1u, 2u, 3u, 4u}) {
    const Eigen::MatrixXd c = random_coeffs(space, seed);
    const SampledField f = synthesize(space, c, grid);
    double x2 = 0.0, dx2 = 0.0, sup = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
      x2 += grid.weight * f.values.row(i).squaredNorm();
      dx2 += grid.weight * f.derivs.row(i).squaredNorm();
      sup = std::max(sup, f.values.row(i).squaredNorm());
    }
    CHECK(x2 <= T * T / (4.0 * kPi * kPi) * dx2 * (1.0 + 1e-12));
    CHECK(sup <= T / 12.0 * dx2 * (1.0 + 1e-12));
  }

  // Wirtinger equality case: x = cos(2 pi t / T) at frequency one.
  const SpaceConfig f1 = make_space(1.0, 1, SymmetryClass::FullMeanZero, 2);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(f1.basis_size(), 1);
  c(0, 0) = 1.0;
  const QuadratureGrid g = make_grid(f1);
  const SampledField f = synthesize(f1, c, g);
  double x2 = 0.0, dx2 = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    x2 += g.weight * f.values.row(i).squaredNorm();
    dx2 += g.weight * f.derivs.row(i).squaredNorm();
  }
  CHECK_REL(x2, 0.5, 1e-12);                                       // T/2 at T = 1
  CHECK_REL(1.0 / (4.0 * kPi * kPi) * dx2, 0.5, 1e-12);            // equality
  CHECK(0.5 / (2.0 * kPi * kPi) <= 1.0 / 12.0);                    // Sobolev case
}

void run_all() {
  test_make_space();
  test_synthesize_single_mode();
  test_analyze_round_trip();
  test_h1_seminorm();
  test_lalpha_norm();
  test_pi_operator();
  test_symmetry_check();
  test_wirtinger_and_sobolev();
}

}  // namespace

TEST_MAIN()
