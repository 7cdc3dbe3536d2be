#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../oracles.hpp"
#include "kernmetric/embeddings.hpp"
#include "kernmetric/errors.hpp"
#include "kernmetric/kernels.hpp"
#include "kernmetric/random.hpp"
#include "kernmetric/testkit.hpp"

using namespace kernmetric;

namespace {

const PointSpace R1 = PointSpace::euclidean(1);

Kernel gauss_r1(double alpha) { return make_radial_hilbert(PhiProfile::gaussian(alpha), R1); }

DiscreteMeasure line_measure(const Vector& xs, const Vector& ws) {
  std::vector<Point> pts;
  for (double x : xs) pts.emplace_back(Vector{x});
  return DiscreteMeasure(R1, pts, ws);
}

}  // namespace

TEST_CASE("radial Hilbert kernel") {
  const auto k = make_radial_hilbert(PhiProfile::gaussian(0.5), PointSpace::euclidean(2));
  CHECK(k(Point{0.3, 0.1}, Point{0.3, 0.1}) == 1.0);
  CHECK(k(Point{0.0, 0.0}, Point{1.0, 1.0}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK_THROWS_AS(make_radial_hilbert(PhiProfile::discrete_laplace({{0.0, 1.0}}), R1), ClassError);
  const auto g = make_grid(QuadratureGrid::trapezoid(0.0, 1.0, 5));
  CHECK_THROWS_AS(make_radial_hilbert(PhiProfile::gaussian(1.0), PointSpace::func_lp(g, 1.5)), DomainError);
  CHECK_NOTHROW(make_radial_hilbert(PhiProfile::gaussian(1.0), PointSpace::func_lp(g, 2.0)));
  CHECK_THROWS_AS(k(Point{0.0}, Point{1.0, 1.0}), ShapeError);
}

TEST_CASE("radial Hilbert kernel on L^2 uses the weighted norm") {
  const auto g = make_grid(QuadratureGrid::trapezoid(0.0, 1.0, 5));
  const auto k = make_radial_hilbert(PhiProfile::gaussian(1.0), PointSpace::func_lp(g, 2.0));
  const FunctionSample one(g, Vector(5, 1.0)), zero(g, Vector(5, 0.0));
  CHECK(k(one, zero) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("tee radial kernel") {
  const auto phi = PhiProfile::gaussian(0.5);
  const auto id = make_tee_radial(phi, MapSpec::identity(), PointSpace::euclidean(2));
  const auto rh = make_radial_hilbert(phi, PointSpace::euclidean(2));
  CounterRng rng(1, 0);
  for (int t = 0; t < 50; ++t) {
    const Point x{rng.normal(), rng.normal()}, y{rng.normal(), rng.normal()};
    CHECK(id(x, y) == rh(x, y));
  }
  const auto scaled = make_tee_radial(phi, MapSpec::diagonal_scale({2.0}), R1);
  CHECK(scaled(Point{0.0}, Point{1.0}) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(MapSpec::diagonal_scale({1.0, 0.0}), InjectivityError);

  Eigen::MatrixXd rank1(2, 2);
  rank1 << 1.0, 2.0, 2.0, 4.0;
  CHECK_THROWS_AS(MapSpec::linear(rank1), InjectivityError);
  Eigen::MatrixXd rot(2, 2);
  rot << 0.0, -1.0, 1.0, 0.0;
  const auto rk = make_tee_radial(phi, MapSpec::linear(rot), PointSpace::euclidean(2));
  CHECK(rk(Point{0.0, 0.0}, Point{1.0, 1.0}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK_THROWS_AS(make_tee_radial(phi, MapSpec::diagonal_scale({1.0, 2.0}), R1), ShapeError);
}

TEST_CASE("L^p operator kernel") {
  const auto g = make_grid(QuadratureGrid::trapezoid(0.0, 1.0, 6));
  const auto phi = PhiProfile::gaussian(1.0);
  const auto k1 = gauss_r1(1.0);
  const auto k = make_lp_operator(phi, k1, g, 1.5);
  const FunctionSample f(g, {0.1, 0.5, -0.2, 0.3, 0.9, 1.1});
  CHECK(k(f, f) == 1.0);

  SUBCASE("constant difference matches the double loop") {
    const double c = 0.7;
    Vector gv(f.values);
    for (auto& v : gv) v -= c;
    const double q = oracle::lp_quadratic_form(g->nodes(), g->weights(), Vector(6, c),
                                               [](double a, double b) { return std::exp(-(a - b) * (a - b)); });
    CHECK(k(f, FunctionSample(g, gv)) == doctest::Approx(std::exp(-q)).epsilon(1e-14));
  }
  SUBCASE("random differences match the double loop") {
    CounterRng rng(2, 0);
    for (int t = 0; t < 30; ++t) {
      Vector a(6), b(6), h(6);
      for (int i = 0; i < 6; ++i) {
        a[i] = rng.normal();
        b[i] = rng.normal();
        h[i] = a[i] - b[i];
      }
      const double q = oracle::lp_quadratic_form(g->nodes(), g->weights(), h,
                                                 [](double x, double y) { return std::exp(-(x - y) * (x - y)); });
      CHECK(std::abs(k(FunctionSample(g, a), FunctionSample(g, b)) - std::exp(-q)) <= 1e-13 * std::exp(-q));
    }
  }
  SUBCASE("rejections") {
    CHECK_THROWS_AS(make_lp_operator(phi, k1, g, 1.0), DomainError);
    CHECK_THROWS_AS(make_lp_operator(phi, k1, g, std::numeric_limits<double>::infinity()), DomainError);
    // k1 == 1 in double precision
    const auto constant_k1 = gauss_r1(1e-20);
    CHECK(constant_k1(Point{0.0}, Point{1.0}) == 1.0);
    CHECK_THROWS_AS(make_lp_operator(phi, constant_k1, g, 1.5), NondegeneracyError);
    CHECK_THROWS_AS(make_lp_operator(PhiProfile::discrete_laplace({{0.0, 1.0}}), k1, g, 1.5), ClassError);
    CHECK_THROWS_AS(make_lp_operator(phi, make_radial_hilbert(phi, PointSpace::euclidean(2)), g, 1.5),
                    ShapeError);
  }
}

TEST_CASE("kernelqint and nondegeneracy") {
  const auto g = QuadratureGrid::trapezoid(0.0, 1.0, 11);
  for (double q : {1.5, 2.0, 3.0}) CHECK(check_kernelqint(gauss_r1(0.5), q, g) == doctest::Approx(1.0).epsilon(1e-14));
  const auto four = make_radial_hilbert(PhiProfile::discrete_laplace({{1.0, 4.0}}), R1);
  CHECK(check_kernelqint(four, 2.0, g) == doctest::Approx(4.0).epsilon(1e-14));
  const auto mix = make_mixture({{gauss_r1(1.0), 0.25}, {gauss_r1(3.0), 0.75}});
  CHECK(check_kernelqint(mix, 2.0, g) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(check_kernelqint(gauss_r1(1.0), 1.0, g), DomainError);

  CHECK(check_lp_nondegeneracy(gauss_r1(1.0), QuadratureGrid::trapezoid(0.0, 1.0, 5)));
  CHECK(check_lp_nondegeneracy(gauss_r1(5.0), g));
  // A wide Gaussian on a dense grid is numerically rank deficient at the
  // 1e-10 relative threshold even though it is strictly PD in exact arithmetic.
  CHECK_FALSE(check_lp_nondegeneracy(gauss_r1(1.0), g));
  CHECK_FALSE(check_lp_nondegeneracy(gauss_r1(1e-20), g));
  CHECK(check_lp_nondegeneracy(gauss_r1(1e-20), QuadratureGrid({0.5}, {1.0}, 0.0, 1.0)));
}

TEST_CASE("metric phi kernel") {
  const auto k = make_metric_phi(PhiProfile::gaussian(1.0), MetricSpec::euclidean(1));
  CHECK(k(Point{0.0}, Point{2.5}) == doctest::Approx(std::exp(-2.5)).epsilon(1e-15));
  CHECK(k(Point{1.0}, Point{1.0}) == 1.0);
  CHECK_THROWS_AS(make_metric_phi(PhiProfile::discrete_laplace({{0.0, 1.0}}), MetricSpec::euclidean(1)), ClassError);
}

TEST_CASE("distance kernel") {
  const auto k = make_distance_kernel(MetricSpec::euclidean(1), Point{0.0});
  CHECK(k(Point{-4.2}, Point{0.0}) == 0.0);
  CHECK(k(Point{3.0}, Point{3.0}) == 6.0);
  CHECK(k(Point{0.0}, Point{1.0}) == 0.0);
  CHECK_FALSE(k.phi_at_zero().has_value());
  CHECK_FALSE(k.is_bounded());
  CHECK_THROWS_AS(make_distance_kernel(MetricSpec::euclidean(2), Point{0.0}), ShapeError);
}

TEST_CASE("mixture kernel") {
  const auto single = make_mixture({{gauss_r1(1.0), 1.0}});
  CHECK(single(Point{0.0}, Point{0.7}) == gauss_r1(1.0)(Point{0.0}, Point{0.7}));
  const auto mix = make_mixture({{gauss_r1(1.0), 0.5}, {gauss_r1(2.0), 0.5}});
  CHECK(mix(Point{0.0}, Point{1.0}) == doctest::Approx(0.2516074).epsilon(1e-7));
  CHECK(mix(Point{0.0}, Point{1.0}) == doctest::Approx(0.5 * std::exp(-1.0) + 0.5 * std::exp(-2.0)).epsilon(1e-15));
  CHECK(*mix.phi_at_zero() == 1.0);
  CHECK_THROWS_AS(make_mixture({}), DomainError);
  CHECK_THROWS_AS(make_mixture({{gauss_r1(1.0), 0.0}}), DomainError);
  CHECK_THROWS_AS(make_mixture({{gauss_r1(1.0), 0.5},
                                {make_radial_hilbert(PhiProfile::gaussian(1.0), PointSpace::euclidean(2)), 0.5}}),
                  ShapeError);

  CounterRng rng(4, 0);
  std::vector<Point> pts;
  for (int i = 0; i < 8; ++i) pts.emplace_back(Vector{2.0 * rng.normal()});
  const Eigen::MatrixXd expect = 0.5 * gram(gauss_r1(1.0), pts).entries + 0.5 * gram(gauss_r1(2.0), pts).entries;
  CHECK((gram(mix, pts).entries - expect).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("mean-embedding kernel on measures") {
  const auto k = make_kme_measure(PhiProfile::gaussian(1.0), make_radial_hilbert(PhiProfile::gaussian(0.5),
                                                                                 PointSpace::euclidean(2)));
  const DiscreteMeasure dx(PointSpace::euclidean(2), {Point{0.0, 0.0}}, {1.0});
  const DiscreteMeasure dy(PointSpace::euclidean(2), {Point{1.0, 1.0}}, {1.0});
  CHECK(k(dx, dx) == 1.0);
  const double arg = 2.0 - 2.0 * std::exp(-1.0);
  CHECK(arg == doctest::Approx(1.2642411).epsilon(1e-7));
  CHECK(k(dx, dy) == doctest::Approx(std::exp(-arg)).epsilon(1e-14));

  SUBCASE("random 3-atom measures against the double loop") {
    const auto kk = make_kme_measure(PhiProfile::inverse_rational(1.0, 2.0), gauss_r1(0.5));
    CounterRng rng(9, 0);
    for (int t = 0; t < 50; ++t) {
      const auto mu = testkit::random_line_measure(rng, 3, false);
      const auto nu = testkit::random_line_measure(rng, 3, false);
      std::vector<oracle::Vec> z;
      oracle::Vec c;
      for (std::size_t i = 0; i < 3; ++i) {
        z.push_back(mu.points()[i].coords());
        c.push_back(mu.weights()[i]);
      }
      for (std::size_t i = 0; i < 3; ++i) {
        z.push_back(nu.points()[i].coords());
        c.push_back(-nu.weights()[i]);
      }
      const double s = oracle::double_sum(z, c, [](const oracle::Vec& a, const oracle::Vec& b) {
        return oracle::gaussian(0.5, a, b);
      });
      const double expect = 1.0 / (1.0 + std::max(s, 0.0) / 2.0);
      CHECK(std::abs(kk(mu, nu) - expect) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(make_kme_measure(PhiProfile::gaussian(1.0),
                                   make_distance_kernel(MetricSpec::euclidean(1), Point{0.0})),
                  DomainError);
  CHECK_THROWS_AS(k(dx, line_measure({0.0}, {1.0})), ShapeError);
}

TEST_CASE("Fourier kernel on measures") {
  const auto k = make_fourier_measure(PhiProfile::gaussian(1.0), {{1.0}}, {1.0});
  const auto d0 = line_measure({0.0}, {1.0});
  const auto dpi = line_measure({std::numbers::pi}, {1.0});
  CHECK(k(d0, d0) == 1.0);
  CHECK(k(d0, dpi) == doctest::Approx(std::exp(-4.0)).epsilon(1e-14));
  CHECK(std::exp(-4.0) == doctest::Approx(0.0183156).epsilon(1e-6));
  CHECK_THROWS_AS(make_fourier_measure(PhiProfile::gaussian(1.0), {{1.0}, {2.0}}, {0.5, 0.4}), DomainError);

  SUBCASE("Gaussian frequencies against the trigonometric oracle") {
    auto [freqs, w] = gaussian_frequencies(1, 64, 7);
    CHECK(freqs.size() == 64);
    const auto kg = make_fourier_measure(PhiProfile::gaussian(0.5), freqs, w);
    CounterRng rng(12, 0);
    for (int t = 0; t < 20; ++t) {
      const auto mu = testkit::random_line_measure(rng, 5, false);
      const auto nu = testkit::random_line_measure(rng, 5, false);
      std::vector<oracle::Vec> z;
      oracle::Vec c;
      for (std::size_t i = 0; i < 5; ++i) {
        z.push_back(mu.points()[i].coords());
        c.push_back(mu.weights()[i]);
        z.push_back(nu.points()[i].coords());
        c.push_back(-nu.weights()[i]);
      }
      double arg = 0.0;
      for (std::size_t s = 0; s < freqs.size(); ++s) arg += w[s] * oracle::fourier_trig(z, c, freqs[s]);
      const double expect = std::exp(-0.5 * arg);
      CHECK(std::abs(kg(mu, nu) - expect) <= 1e-12 * expect);
    }
  }
  SUBCASE("frequency draws are deterministic") {
    CHECK(gaussian_frequencies(2, 16, 3).first == gaussian_frequencies(2, 16, 3).first);
    CHECK(gaussian_frequencies(2, 16, 3).first != gaussian_frequencies(2, 16, 4).first);
  }
}

TEST_CASE("quantile kernel") {
  const auto u = make_grid(QuadratureGrid::trapezoid(0.0, 1.0, 101));
  const auto k = make_quantile_monge(PhiProfile::gaussian(1.0), u);
  CHECK(k(line_measure({0.0}, {1.0}), line_measure({1.0}, {1.0})) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  const auto a = line_measure({0.0, 1.0}, {0.5, 0.5});
  const auto b = line_measure({0.5, 1.5}, {0.5, 0.5});
  CHECK(std::sqrt(quantile_sq_distance(a, b)) == 0.5);
  CHECK(k(a, a) == 1.0);

  CounterRng rng(21, 0);
  for (int t = 0; t < 50; ++t) {
    Vector xs(5), ys(5);
    for (auto& v : xs) v = rng.normal();
    for (auto& v : ys) v = rng.normal();
    const auto mu = line_measure(xs, Vector(5, 0.2));
    const auto nu = line_measure(ys, Vector(5, 0.2));
    CHECK(std::abs(std::sqrt(quantile_sq_distance(mu, nu)) - oracle::sorted_w2(xs, ys)) <= 1e-12);
  }
  CHECK_THROWS_AS(quantile_sq_distance(line_measure({0.0, 1.0}, {1.5, -0.5}), a), DomainError);
  CHECK_THROWS_AS(quantile_sq_distance(line_measure({0.0}, {2.0}), a), DomainError);
  CHECK_THROWS_AS(make_quantile_monge(PhiProfile::gaussian(1.0),
                                      make_grid(QuadratureGrid::trapezoid(0.0, 2.0, 5))),
                  DomainError);

  const auto emb = monge_embedding(line_measure({3.0, -1.0}, {0.5, 0.5}), make_grid(QuadratureGrid::trapezoid(0.0, 1.0, 5)));
  CHECK(emb.values.front() == -1.0);
  CHECK(emb.values.back() == 3.0);
}

TEST_CASE("kernel invariants over every rule") {
  CounterRng rng(77, 0);
  for (const auto& fam : testkit::standard_families()) {
    CAPTURE(fam.name);
    const auto& k = fam.kernel;
    int asym = 0, diag = 0, bound = 0;
    for (int t = 0; t < 1000; ++t) {
      const Point x = fam.sample(rng), y = fam.sample(rng);
      const double kxy = k(x, y);
      if (kxy != k(y, x)) ++asym;
      if (t < 100) {
        if (auto phi0 = k.phi_at_zero()) {
          if (k(x, x) != *phi0) ++diag;
          if (std::abs(kxy) > *phi0) ++bound;
        }
      }
    }
    CHECK(asym == 0);
    CHECK(diag == 0);
    CHECK(bound == 0);

    for (int rep = 0; rep < 5; ++rep) {
      std::vector<Point> pts;
      for (int i = 0; i < 25; ++i) pts.push_back(fam.sample(rng));
      const auto g = gram(k, pts);
      CHECK(min_eigenvalue(g) >= -1e-8 * std::max(1.0, g.entries.trace()));
    }
  }
}

TEST_CASE("distance kernel diagonal") {
  const auto z0 = Point{0.3, -0.2};
  const auto m = MetricSpec::euclidean(2);
  const auto k = make_distance_kernel(m, z0);
  CounterRng rng(8, 0);
  for (int t = 0; t < 100; ++t) {
    const Point x{rng.normal(), rng.normal()};
    CHECK(k(x, x) == doctest::Approx(2.0 * m(x, z0)).epsilon(1e-15));
    CHECK(k(x, Point{rng.normal(), rng.normal()}) >= 0.0);
  }
}
