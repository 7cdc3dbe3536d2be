#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "kernmetric/embeddings.hpp"
#include "kernmetric/errors.hpp"
#include "kernmetric/kernels.hpp"
#include "kernmetric/phi_profile.hpp"

using namespace kernmetric;

namespace {

std::vector<double> grid(double step, double end) {
  std::vector<double> g;
  for (int i = 0; i * step <= end + 1e-12; ++i) g.push_back(i * step);
  return g;
}

std::vector<PhiProfile> shipped() {
  return {PhiProfile::discrete_laplace({{1.0, 0.5}, {2.0, 0.5}}), PhiProfile::gaussian(0.5),
          PhiProfile::exp_sqrt(1.0), PhiProfile::inverse_rational(1.0, 1.0)};
}

}  // namespace

TEST_CASE("phi_eval closed forms") {
  CHECK(PhiProfile::gaussian(1.0)(0.0) == 1.0);
  CHECK(PhiProfile::gaussian(1.0)(std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(PhiProfile::discrete_laplace({{1.0, 0.5}, {2.0, 0.5}})(0.0) == 1.0);
  CHECK(PhiProfile::exp_sqrt(1.0)(4.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK(PhiProfile::inverse_rational(2.0, 4.0)(4.0) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("phi_eval rejects negative arguments") {
  for (const auto& p : shipped()) {
    CHECK_THROWS_AS(p(-1e-9), DomainError);
    CHECK_THROWS_AS(p(std::nan("")), DomainError);
  }
}

TEST_CASE("profile constructors validate parameters") {
  CHECK_THROWS_AS(PhiProfile::gaussian(0.0), DomainError);
  CHECK_THROWS_AS(PhiProfile::exp_sqrt(-1.0), DomainError);
  CHECK_THROWS_AS(PhiProfile::inverse_rational(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(PhiProfile::discrete_laplace({}), DomainError);
  CHECK_THROWS_AS(PhiProfile::discrete_laplace({{-1.0, 1.0}}), DomainError);
  CHECK_THROWS_AS(PhiProfile::discrete_laplace({{1.0, 0.0}}), DomainError);
}

TEST_CASE("phi(0) is the total mass and bounds phi") {
  const auto p = PhiProfile::discrete_laplace({{0.0, 0.2}, {1.0, 0.3}, {5.0, 1.5}});
  CHECK(p.at_zero() == doctest::Approx(2.0));
  CHECK(p(0.0) == doctest::Approx(p.at_zero()).epsilon(1e-15));
  for (const auto& q : shipped()) {
    CHECK(q(0.0) == q.at_zero());
    for (double t : grid(0.5, 20.0)) {
      CHECK(q(t) > 0.0);
      CHECK(q(t) <= q.at_zero());
    }
  }
}

TEST_CASE("strictly positive definite class membership") {
  CHECK_FALSE(PhiProfile::discrete_laplace({{0.0, 1.0}}).is_strictly_pd_class());
  CHECK(PhiProfile::gaussian(2.0).is_strictly_pd_class());
  CHECK(PhiProfile::discrete_laplace({{0.0, 0.5}, {3.0, 0.5}}).is_strictly_pd_class());
  CHECK(PhiProfile::exp_sqrt(0.1).is_strictly_pd_class());
  CHECK(PhiProfile::inverse_rational(0.5, 3.0).is_strictly_pd_class());
}

TEST_CASE("complete monotonicity check") {
  const auto g = grid(0.5, 5.0);
  CHECK(complete_monotonicity_check(PhiProfile::gaussian(1.0), g, 4));
  CHECK(complete_monotonicity_check(PhiProfile::inverse_rational(1.0, 1.0), g, 4));
  CHECK_FALSE(complete_monotonicity_check([](double t) { return std::cos(t); }, g, 4));
  // positive, but its second derivative changes sign
  CHECK_FALSE(complete_monotonicity_check([](double t) { return std::exp(-t) + 0.01 * t * t; }, g, 4));

  SUBCASE("all shipped variants pass on a fine grid") {
    for (const auto& p : shipped()) CHECK(complete_monotonicity_check(p, grid(0.25, 10.0), 4));
  }
  SUBCASE("non-uniform grids use divided differences") {
    const std::vector<double> ragged{0.0, 0.1, 0.35, 0.9, 1.7, 3.0, 4.2, 6.5};
    for (const auto& p : shipped()) CHECK(complete_monotonicity_check(p, ragged, 5));
    CHECK_FALSE(complete_monotonicity_check([](double t) { return std::cos(t); }, ragged, 5));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(complete_monotonicity_check(PhiProfile::gaussian(1.0), {}, 2), DomainError);
    const std::vector<double> bad{0.0, 1.0, 1.0};
    CHECK_THROWS_AS(complete_monotonicity_check(PhiProfile::gaussian(1.0), bad, 2), DomainError);
    CHECK_THROWS_AS(complete_monotonicity_check(PhiProfile::gaussian(1.0), g, 7), DomainError);
  }
}

TEST_CASE("profiles are nonincreasing on increasing grids") {
  const auto g = grid(0.01, 10.0);
  for (const auto& p : shipped()) {
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(p(g[i]) <= p(g[i - 1]) + 1e-12 * p.at_zero());
  }
}

TEST_CASE("discrete Laplace matches direct summation") {
  const std::vector<PhiProfile::Atom> atoms{{0.0, 0.1}, {0.3, 0.7}, {2.5, 0.2}, {9.0, 1.1}};
  const auto p = PhiProfile::discrete_laplace(atoms);
  for (double t : grid(0.1, 8.0)) {
    double direct = 0.0;
    for (const auto& a : atoms) direct += a.weight * std::exp(-a.rate * t);
    CHECK(std::abs(p(t) - direct) <= 1e-14 * direct);
  }
}

TEST_CASE("profile outside the strict class yields a rank-one Gram matrix") {
  // The constant profile cannot be wrapped in a kernel, so build its Gram
  // matrix directly: every entry is phi(||x_i - x_j||^2) = 1.
  const auto c = PhiProfile::discrete_laplace({{0.0, 1.0}});
  const std::vector<double> xs{0.0, 0.4, 1.3, 2.0};
  Eigen::MatrixXd g(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) g(i, j) = c((xs[i] - xs[j]) * (xs[i] - xs[j]));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  CHECK(std::abs(es.eigenvalues()[0]) < 1e-12);
  CHECK(std::abs(es.eigenvalues()[2]) < 1e-12);
  CHECK(es.eigenvalues()[3] == doctest::Approx(4.0));
  CHECK_THROWS_AS(make_radial_hilbert(c, PointSpace::euclidean(1)), ClassError);
}
