#include "kernmetric/testkit.hpp"

#include <cmath>

#include "kernmetric/errors.hpp"

namespace kernmetric::testkit {
namespace {

Vector uniform_vector(CounterRng& rng, std::size_t n, double lo, double hi) {
  Vector v(n);
  for (double& x : v) x = lo + (hi - lo) * rng.uniform();
  return v;
}

double euclidean(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.coords().size(); ++i) {
    const double d = a.coords()[i] - b.coords()[i];
    s += d * d;
  }
  return std::sqrt(s);
}

std::function<double(const Point&, const Point&)> weighted_l2(GridPtr grid) {
  return [grid](const Point& a, const Point& b) {
    return std::sqrt(sq_dist_l2(FunctionSample(grid, a.coords()), FunctionSample(grid, b.coords())));
  };
}

double quantile_separation(const Point& a, const Point& b) {
  return std::sqrt(quantile_sq_distance(a.measure(), b.measure()));
}

// Smooth random function: c0 + sum_k c_k sin(k pi t) / k on the grid.
Vector random_function(CounterRng& rng, const QuadratureGrid& grid) {
  double c[5];
  for (double& v : c) v = rng.normal();
  Vector values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid.nodes()[i];
    double f = c[0];
    for (int k = 1; k < 5; ++k) f += c[k] * std::sin(k * 3.141592653589793 * t) / k;
    values[i] = f;
  }
  return values;
}

}  // namespace

DiscreteMeasure random_line_measure(CounterRng& rng, std::size_t atoms, bool equal_weights) {
  const PointSpace line = PointSpace::euclidean(1);
  std::vector<Point> pts;
  Vector w;
  double total = 0.0;
  for (std::size_t i = 0; i < atoms; ++i) {
    pts.emplace_back(Vector{-2.0 + 4.0 * rng.uniform()});
    w.push_back(equal_weights ? 1.0 : 0.1 + rng.uniform());
    total += w.back();
  }
  for (double& v : w) v /= total;
  if (equal_weights) {
    for (double& v : w) v = 1.0 / static_cast<double>(atoms);
  }
  return DiscreteMeasure(line, std::move(pts), std::move(w));
}

std::vector<KernelFamily> standard_families() {
  std::vector<KernelFamily> out;
  const PointSpace r2 = PointSpace::euclidean(2);
  const PointSpace r1 = PointSpace::euclidean(1);
  auto r2_sample = [](CounterRng& rng) { return Point(uniform_vector(rng, 2, -3.0, 3.0)); };

  out.push_back({"radial_hilbert", make_radial_hilbert(PhiProfile::gaussian(0.5), r2), true,
                 r2_sample, euclidean});

  out.push_back({"tee_radial",
                 make_tee_radial(PhiProfile::exp_sqrt(1.0), MapSpec::diagonal_scale({2.0, 0.5}), r2),
                 true, r2_sample, euclidean});

  {
    const GridPtr grid = make_grid(QuadratureGrid::trapezoid(0.0, 1.0, 9));
    const Kernel k1 = make_radial_hilbert(PhiProfile::exp_sqrt(5.0), r1);
    out.push_back({"lp_operator",
                   make_lp_operator(PhiProfile::inverse_rational(1.0, 1.0), k1, grid, 1.5), true,
                   [grid](CounterRng& rng) { return Point(random_function(rng, *grid)); },
                   weighted_l2(grid)});
  }

  {
    const GridPtr grid = make_grid(QuadratureGrid::trapezoid(0.0, 1.0, 8));
    out.push_back({"metric_phi", make_metric_phi(PhiProfile::gaussian(1.0), MetricSpec::lp(grid, 1.5)),
                   true, [grid](CounterRng& rng) { return Point(random_function(rng, *grid)); },
                   weighted_l2(grid)});
  }

  out.push_back({"distance",
                 make_distance_kernel(MetricSpec::euclidean(2), Point(Vector{0.3, -0.2})), false,
                 r2_sample, euclidean});

  out.push_back({"mixture",
                 make_mixture({{make_radial_hilbert(PhiProfile::gaussian(1.0), r2), 0.5},
                               {make_radial_hilbert(PhiProfile::gaussian(0.2), r2), 0.3},
                               {make_radial_hilbert(PhiProfile::inverse_rational(2.0, 0.5), r2), 0.2}}),
                 true, r2_sample, euclidean});

  auto line_measure = [](CounterRng& rng) {
    return Point(random_line_measure(rng, 1 + rng.below(4), false));
  };

  out.push_back({"kme_measure",
                 make_kme_measure(PhiProfile::gaussian(1.0),
                                  make_radial_hilbert(PhiProfile::gaussian(2.0), r1)),
                 true, line_measure, quantile_separation});

  {
    auto [freqs, weights] = gaussian_frequencies(1, 32, 7);
    out.push_back({"fourier_measure",
                   make_fourier_measure(PhiProfile::gaussian(0.5), std::move(freqs), std::move(weights)),
                   true, line_measure, quantile_separation});
  }

  out.push_back({"quantile_monge",
                 make_quantile_monge(PhiProfile::gaussian(1.0),
                                     make_grid(QuadratureGrid::trapezoid(0.0, 1.0, 101))),
                 true, line_measure, quantile_separation});
  return out;
}

std::vector<Point> separated_points(const KernelFamily& family, CounterRng& rng,
                                    std::size_t count, double min_sep) {
  std::vector<Point> pts;
  std::size_t attempts = 0;
  while (pts.size() < count) {
    if (++attempts > 100000) throw Error("could not place separated points for " + family.name);
    Point candidate = family.sample(rng);
    bool ok = true;
    for (const auto& p : pts) {
      if (family.separation(p, candidate) < min_sep) {
        ok = false;
        break;
      }
    }
    if (ok) pts.push_back(std::move(candidate));
  }
  return pts;
}

DiscreteMeasure random_signed_measure(const KernelFamily& family, CounterRng& rng,
                                      std::size_t atoms, bool zero_mass) {
  std::vector<Point> pts = separated_points(family, rng, atoms, 0.1);
  Vector w(atoms);
  double mean = 0.0;
  for (double& v : w) {
    v = rng.normal();
    mean += v;
  }
  mean /= static_cast<double>(atoms);
  if (zero_mass) {
    for (double& v : w) v -= mean;
  }
  return DiscreteMeasure(family.kernel.space(), std::move(pts), std::move(w));
}

DiscreteMeasure random_probability_measure(const KernelFamily& family, CounterRng& rng,
                                           std::size_t atoms) {
  std::vector<Point> pts = separated_points(family, rng, atoms, 0.1);
  Vector w(atoms);
  double total = 0.0;
  for (double& v : w) {
    v = 0.1 + rng.uniform();
    total += v;
  }
  for (double& v : w) v /= total;
  return DiscreteMeasure(family.kernel.space(), std::move(pts), std::move(w));
}

}  // namespace kernmetric::testkit
