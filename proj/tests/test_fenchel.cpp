#include "minper/fenchel.hpp"
#include "testkit.hpp"

#include <random>

using namespace minper;

namespace {

void test_quartic_closed_form() {
  const HamiltonianModel h = builtin_hamiltonian("power", {{"beta", 4.0}}, 2);
  const FenchelPair pair = fenchel_transform(h);
  CHECK(pair.has_closed_form);
  CHECK_REL(pair.alpha, 4.0 / 3.0, 1e-15);

  Eigen::VectorXd y(2);
  y << 0.6, -0.8;  // |y| = 1
  CHECK_REL(pair.conj(y), 0.75, 1e-12);
  CHECK_REL(pair.conj_numeric(y), 0.75, 1e-9);

  y.setZero();
  CHECK(pair.conj(y) == 0.0);
  CHECK(pair.conj_grad(y).norm() == 0.0);
  CHECK_NEAR(pair.conj_numeric(y), 0.0, 1e-14);
}

void test_numeric_matches_closed_form() {
  const HamiltonianModel h = builtin_hamiltonian("power", {{"beta", 4.0}}, 2);
  const FenchelPair pair = fenchel_transform(h);
  std::mt19937_64 rng(23);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  double worst_v = 0.0, worst_g = 0.0;
  for (int i = 0; i < 100; ++i) {
    Eigen::VectorXd y(2);
    y << normal(rng), normal(rng);
    y *= std::pow(10.0, unif(rng)) / y.norm();  // |y| in [1e-2, 1e2]
    const double ref = pair.conj(y);
    worst_v = std::max(worst_v, std::abs(pair.conj_numeric(y) - ref) / std::max(1.0, ref));
    worst_g = std::max(worst_g, (pair.conj_grad_numeric(y) - pair.conj_grad(y)).norm() /
                                    std::max(1.0, pair.conj_grad(y).norm()));
  }
  CHECK(worst_v < 1e-8);
  CHECK(worst_g < 1e-8);
}

void test_young_equality_and_inversion() {
  for (const char* name : {"power", "anisotropic_power"}) {
    std::map<std::string, double> params = {{"beta", 4.0}};
    if (std::string(name) == "anisotropic_power") params["lambda1"] = 2.0;
    const HamiltonianModel h = builtin_hamiltonian(name, params, 2);
    const FenchelPair pair = fenchel_transform(h);

    std::mt19937_64 rng(31);
    std::normal_distribution<double> normal(0.0, 1.0);
    double worst_young = 0.0, worst_inv = 0.0;
    for (int i = 0; i < 100; ++i) {
      Eigen::VectorXd x(2);
      x << normal(rng), normal(rng);
      const Eigen::VectorXd y = h.grad(x);
      const double young = pair.conj(y) + h.eval(x) - x.dot(y);
      worst_young = std::max(worst_young, std::abs(young) / std::max(1.0, std::abs(x.dot(y))));
      worst_inv = std::max(worst_inv,
                           (h.grad(pair.conj_grad(y)) - y).norm() / std::max(1.0, y.norm()));
    }
    CHECK(worst_young < 1e-8);
    CHECK(worst_inv < 1e-8);
  }
}

void test_invert_gradient() {
  const HamiltonianModel h = builtin_hamiltonian("power", {{"beta", 4.0}}, 2);
  Eigen::VectorXd y(2);
  y << 3.0, 4.0;
  const Eigen::VectorXd x = invert_gradient(h, 4.0, y);
  CHECK((h.grad(x) - y).norm() < 1e-9 * y.norm());

  // The radial guess is exact for the power family: |x| = |y|^{1/(beta-1)}.
  CHECK_REL(x.norm(), std::pow(5.0, 1.0 / 3.0), 1e-10);
}

void test_unreachable_gradient_reports_failure() {
  // H = sqrt(1 + |z|^2) has |H'| < 1, so y outside the unit ball is not a
  // gradient value and the inversion must stall with a diagnostic.
  HamiltonianModel flat;
  flat.name = "relativistic";
  flat.dim = 2;
  flat.growth_beta = 2.0;  // deliberate misdeclaration; only seeds the guess
  flat.eval = [](const Eigen::VectorXd& z) { return std::sqrt(1.0 + z.squaredNorm()); };
  flat.grad = [](const Eigen::VectorXd& z) -> Eigen::VectorXd {
    return z / std::sqrt(1.0 + z.squaredNorm());
  };
  Eigen::VectorXd y(2);
  y << 2.0, 0.0;
  CHECK_THROWS(invert_gradient(flat, 2.0, y));
}

void test_anisotropic_growth_of_conjugate() {
  const HamiltonianModel h =
      builtin_hamiltonian("anisotropic_power", {{"beta", 4.0}, {"lambda1", 2.0}}, 2);
  const FenchelPair pair = fenchel_transform(h);
  CHECK(!pair.has_closed_form);
  const GrowthFit fit = fit_growth_exponent(pair.conj, 2);
  CHECK_NEAR(fit.exponent, 4.0 / 3.0, 1e-3);
}

void run_all() {
  test_quartic_closed_form();
  test_numeric_matches_closed_form();
  test_young_equality_and_inversion();
  test_invert_gradient();
  test_unreachable_gradient_reports_failure();
  test_anisotropic_growth_of_conjugate();
}

}  // namespace

TEST_MAIN()
