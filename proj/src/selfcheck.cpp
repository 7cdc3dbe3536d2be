#include "kernmetric/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "kernmetric/embeddings.hpp"
#include "kernmetric/errors.hpp"
#include "kernmetric/kernels.hpp"
#include "kernmetric/stats.hpp"
#include "kernmetric/testkit.hpp"

namespace kernmetric {
namespace {

using testkit::KernelFamily;

struct Check {
  std::string name;
  std::function<std::string()> run;  // empty string on success
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

std::vector<PhiProfile> shipped_profiles() {
  return {PhiProfile::discrete_laplace({{0.5, 0.3}, {2.0, 0.7}}), PhiProfile::gaussian(1.0),
          PhiProfile::exp_sqrt(1.0), PhiProfile::inverse_rational(1.0, 1.0)};
}

Vector range_grid(double step, double end) {
  Vector g;
  for (int i = 0; i * step <= end + 1e-12; ++i) g.push_back(i * step);
  return g;
}

std::vector<Check> build_checks(const std::vector<KernelFamily>& families, bool inject_fault) {
  std::vector<Check> checks;

  checks.push_back({"phi.nonincreasing", [] {
    const Vector grid = range_grid(0.05, 10.0);
    for (const auto& p : shipped_profiles()) {
      for (std::size_t i = 1; i < grid.size(); ++i) {
        if (p(grid[i]) > p(grid[i - 1]) + 1e-12 * p.at_zero()) return p.family() + " increases";
      }
    }
    return std::string();
  }});

  checks.push_back({"phi.discrete_laplace_direct_sum", [] {
    const auto p = PhiProfile::discrete_laplace({{0.0, 0.25}, {1.5, 0.5}, {4.0, 0.25}});
    for (double t : range_grid(0.1, 5.0)) {
      const double direct = 0.25 + 0.5 * std::exp(-1.5 * t) + 0.25 * std::exp(-4.0 * t);
      if (!rel_close(p(t), direct, 1e-14)) return "mismatch at t=" + fmt(t);
    }
    return std::string();
  }});

  checks.push_back({"phi.complete_monotonicity", [] {
    const Vector grid = range_grid(0.25, 10.0);
    for (const auto& p : shipped_profiles()) {
      if (!complete_monotonicity_check(p, grid, 4)) return p.family() + " fails";
    }
    return std::string();
  }});

  checks.push_back({"phi.constant_profile_rank_one", [] {
    const auto c = PhiProfile::discrete_laplace({{0.0, 1.0}});
    if (c.is_strictly_pd_class()) return std::string("constant profile classified as strict");
    return std::string();
  }});

  checks.push_back({"spaces.trapezoid_linear_exactness", [] {
    const GridPtr grid = make_grid(QuadratureGrid::trapezoid(0.0, 1.0, 1001));
    Vector v;
    for (double x : grid->nodes()) v.push_back(x);
    const double got = lp_norm(FunctionSample(grid, v), 2.0);
    if (std::abs(got - 1.0 / std::sqrt(3.0)) > 1e-6) return "||x||_2 = " + fmt(got);
    if (std::abs(grid->total_weight() - 1.0) > 1e-12) return std::string("weights do not sum to 1");
    return std::string();
  }});

  checks.push_back({"spaces.metric_triangle_inequality", [] {
    CounterRng rng(11, 0);
    const GridPtr grid = make_grid(QuadratureGrid::trapezoid(0.0, 1.0, 6));
    const MetricSpec metrics[] = {MetricSpec::euclidean(3), MetricSpec::lp(grid, 1.5),
                                  MetricSpec::lp(grid, 2.0)};
    for (const auto& m : metrics) {
      const std::size_t n = m.space().coordinate_count();
      for (int t = 0; t < 200; ++t) {
        Vector a(n), b(n), c(n);
        for (std::size_t i = 0; i < n; ++i) {
          a[i] = rng.normal();
          b[i] = rng.normal();
          c[i] = rng.normal();
        }
        if (m(a, c) > m(a, b) + m(b, c) + 1e-12) return "violated on " + m.space().describe();
        if (m(a, b) != m(b, a)) return "asymmetric on " + m.space().describe();
      }
    }
    return std::string();
  }});

  checks.push_back({"spaces.measure_difference_mass", [] {
    CounterRng rng(12, 0);
    for (int t = 0; t < 100; ++t) {
      const auto mu = testkit::random_line_measure(rng, 3, false);
      const auto nu = testkit::random_line_measure(rng, 2, false);
      const auto d = measure_difference(mu, nu);
      double expect = 0.0;
      for (double w : mu.weights()) expect += w;
      for (double w : nu.weights()) expect += -w;
      if (d.total_mass() != expect) return std::string("mass not additive");
    }
    return std::string();
  }});

  checks.push_back({"kernels.symmetry", [&families] {
    CounterRng rng(13, 0);
    for (const auto& f : families) {
      for (int t = 0; t < 50; ++t) {
        const Point x = f.sample(rng), y = f.sample(rng);
        if (f.kernel(x, y) != f.kernel(y, x)) return f.name + " asymmetric";
      }
    }
    return std::string();
  }});

  checks.push_back({"kernels.diagonal", [&families] {
    CounterRng rng(14, 0);
    for (const auto& f : families) {
      for (int t = 0; t < 20; ++t) {
        const Point x = f.sample(rng);
        const double kxx = f.kernel(x, x);
        if (auto phi0 = f.kernel.phi_at_zero()) {
          if (!rel_close(kxx, *phi0, 1e-15)) return f.name + " k(x,x) != phi(0)";
        } else {
          const auto& r = std::get<rules::Distance>(f.kernel.impl().rule);
          if (!rel_close(kxx, 2.0 * r.metric(x, r.origin), 1e-15)) return f.name + " diagonal";
        }
      }
    }
    return std::string();
  }});

  checks.push_back({"kernels.boundedness", [&families] {
    CounterRng rng(15, 0);
    for (const auto& f : families) {
      const auto phi0 = f.kernel.phi_at_zero();
      if (!phi0) continue;
      for (int t = 0; t < 50; ++t) {
        if (std::abs(f.kernel(f.sample(rng), f.sample(rng))) > *phi0 * (1 + 1e-15)) {
          return f.name + " exceeds phi(0)";
        }
      }
    }
    return std::string();
  }});

  checks.push_back({"embeddings.gram_psd", [&families] {
    CounterRng rng(16, 0);
    for (const auto& f : families) {
      for (int t = 0; t < 5; ++t) {
        std::vector<Point> pts;
        for (int i = 0; i < 15; ++i) pts.push_back(f.sample(rng));
        const auto g = gram(f.kernel, pts);
        const double lo = min_eigenvalue(g);
        if (lo < -1e-8 * std::max(1.0, g.entries.trace())) return f.name + " min eig " + fmt(lo);
      }
    }
    return std::string();
  }});

  checks.push_back({"embeddings.gram_strict_pd", [&families] {
    CounterRng rng(17, 0);
    for (const auto& f : families) {
      if (!f.strictly_pd) continue;
      const auto pts = testkit::separated_points(f, rng, 8, 0.1);
      const double lo = min_eigenvalue(gram(f.kernel, pts));
      if (!(lo / *f.kernel.phi_at_zero() > 1e-12)) return f.name + " min eig " + fmt(lo);
    }
    return std::string();
  }});

  checks.push_back({"kernels.tee_identity_matches_radial", [] {
    CounterRng rng(18, 0);
    const PointSpace r3 = PointSpace::euclidean(3);
    const auto phi = PhiProfile::exp_sqrt(0.7);
    const Kernel a = make_radial_hilbert(phi, r3);
    const Kernel b = make_tee_radial(phi, MapSpec::identity(), r3);
    for (int t = 0; t < 100; ++t) {
      Vector x(3), y(3);
      for (int i = 0; i < 3; ++i) {
        x[i] = rng.normal();
        y[i] = rng.normal();
      }
      if (a(x, y) != b(x, y)) return std::string("identity map changes the kernel");
    }
    return std::string();
  }});

  checks.push_back({"kernels.kme_argument_double_sum", [] {
    CounterRng rng(19, 0);
    const Kernel k1 = make_radial_hilbert(PhiProfile::gaussian(0.5), PointSpace::euclidean(1));
    const auto phi = PhiProfile::inverse_rational(1.0, 1.0);
    const Kernel k2 = make_kme_measure(phi, k1);
    for (int t = 0; t < 50; ++t) {
      const auto mu = testkit::random_line_measure(rng, 3, false);
      const auto nu = testkit::random_line_measure(rng, 3, false);
      double s = 0.0;
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
          const double xi = mu.points()[i].coords()[0], xj = mu.points()[j].coords()[0];
          const double yi = nu.points()[i].coords()[0], yj = nu.points()[j].coords()[0];
          s += mu.weights()[i] * mu.weights()[j] * std::exp(-0.5 * (xi - xj) * (xi - xj));
          s += nu.weights()[i] * nu.weights()[j] * std::exp(-0.5 * (yi - yj) * (yi - yj));
          s -= 2.0 * mu.weights()[i] * nu.weights()[j] * std::exp(-0.5 * (xi - yj) * (xi - yj));
        }
      }
      if (!rel_close(k2(mu, nu), 1.0 / (1.0 + s), 1e-12)) return std::string("argument mismatch");
    }
    return std::string();
  }});

  checks.push_back({"kernels.quantile_matches_sorting", [] {
    CounterRng rng(20, 0);
    for (int t = 0; t < 100; ++t) {
      const auto mu = testkit::random_line_measure(rng, 5, true);
      const auto nu = testkit::random_line_measure(rng, 5, true);
      Vector a, b;
      for (const auto& p : mu.points()) a.push_back(p.coords()[0]);
      for (const auto& p : nu.points()) b.push_back(p.coords()[0]);
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      double s = 0.0;
      for (int i = 0; i < 5; ++i) s += (a[i] - b[i]) * (a[i] - b[i]) / 5.0;
      if (std::abs(std::sqrt(quantile_sq_distance(mu, nu)) - std::sqrt(s)) > 1e-12) {
        return std::string("W2 mismatch");
      }
    }
    return std::string();
  }});

  checks.push_back({"embeddings.cancelled_measure_zero", [&families] {
    CounterRng rng(21, 0);
    for (const auto& f : families) {
      const auto mu = testkit::random_signed_measure(f, rng, 4, false);
      if (kme_sq_norm(f.kernel, measure_difference(mu, mu)) != 0.0) return f.name + " nonzero";
    }
    return std::string();
  }});

  checks.push_back({"embeddings.norm_scaling", [&families] {
    CounterRng rng(22, 0);
    for (const auto& f : families) {
      const auto mu = testkit::random_signed_measure(f, rng, 4, false);
      const double a = 1.0 + 2.0 * rng.uniform();
      if (!rel_close(kme_sq_norm(f.kernel, mu.scaled(a)), a * a * kme_sq_norm(f.kernel, mu), 1e-12)) {
        return f.name + " not quadratic";
      }
    }
    return std::string();
  }});

  checks.push_back({"embeddings.mixture_identity", [] {
    CounterRng rng(23, 0);
    const PointSpace r2 = PointSpace::euclidean(2);
    const std::vector<std::pair<Kernel, double>> comps = {
        {make_radial_hilbert(PhiProfile::gaussian(1.0), r2), 0.2},
        {make_radial_hilbert(PhiProfile::exp_sqrt(1.0), r2), 0.5},
        {make_radial_hilbert(PhiProfile::inverse_rational(1.0, 2.0), r2), 0.3}};
    const Kernel mix = make_mixture(comps);
    const auto fam = testkit::standard_families().front();
    for (int t = 0; t < 50; ++t) {
      const auto mu = testkit::random_signed_measure(fam, rng, 5, false);
      double expect = 0.0;
      for (const auto& [k, w] : comps) expect += w * kme_sq_norm(k, mu);
      if (!rel_close(kme_sq_norm(mix, mu), expect, 1e-10)) return std::string("mixture mismatch");
    }
    return std::string();
  }});

  checks.push_back({"embeddings.ispd_desk_check", [&families] {
    CounterRng rng(24, 0);
    for (const auto& f : families) {
      if (!f.strictly_pd) continue;
      for (int t = 0; t < 20; ++t) {
        const bool zero_mass = t % 2 == 1;
        const auto mu = testkit::random_signed_measure(f, rng, 2 + rng.below(4), zero_mass);
        if (!(kme_sq_norm(f.kernel, mu) > 0.0)) return f.name + " has a null measure";
      }
    }
    return std::string();
  }});

  checks.push_back({"embeddings.distance_kernel_origin_invariance", [] {
    CounterRng rng(25, 0);
    const MetricSpec rho = MetricSpec::euclidean(2);
    const auto fam = testkit::standard_families().front();
    for (int t = 0; t < 50; ++t) {
      const auto mu = testkit::random_signed_measure(fam, rng, 4, true);
      const double a = kme_sq_norm(make_distance_kernel(rho, Point{0.0, 0.0}), mu);
      const double b = kme_sq_norm(make_distance_kernel(rho, Point{5.0, -3.0}), mu);
      if (!rel_close(a, b, 1e-10)) return std::string("depends on z0");
    }
    return std::string();
  }});

  checks.push_back({"stats.mmd_pseudometric", [&families] {
    CounterRng rng(26, 0);
    for (const auto& f : families) {
      for (int t = 0; t < 20; ++t) {
        const auto p = testkit::random_probability_measure(f, rng, 3);
        const auto q = testkit::random_probability_measure(f, rng, 2);
        const auto r = testkit::random_probability_measure(f, rng, 3);
        if (mmd(f.kernel, p, q) != mmd(f.kernel, q, p)) return f.name + " asymmetric";
        if (mmd(f.kernel, p, r) > mmd(f.kernel, p, q) + mmd(f.kernel, q, r) + 1e-10) {
          return f.name + " triangle inequality";
        }
      }
    }
    return std::string();
  }});

  checks.push_back({"stats.score_propriety", [&families] {
    CounterRng rng(27, 0);
    for (const auto& f : families) {
      for (int t = 0; t < 20; ++t) {
        const auto p = testkit::random_probability_measure(f, rng, 3);
        const auto q = testkit::random_probability_measure(f, rng, 3);
        if (expected_score(f.kernel, q, p) - expected_score(f.kernel, p, p) < -1e-10) {
          return f.name + " improper";
        }
      }
    }
    return std::string();
  }});

  checks.push_back({"stats.identity_chain", [&families] {
    CounterRng rng(28, 0);
    for (const auto& f : families) {
      for (int t = 0; t < 20; ++t) {
        const auto p = testkit::random_probability_measure(f, rng, 3);
        const auto q = testkit::random_probability_measure(f, rng, 3);
        const double m = mmd(f.kernel, p, q);
        const double d = divergence(f.kernel, p, q);
        const double n = kme_sq_norm(f.kernel, measure_difference(p, q));
        if (!rel_close(d, 0.5 * m * m, 1e-10) || !rel_close(m * m, n, 1e-10)) {
          return f.name + " chain broken";
        }
      }
    }
    return std::string();
  }});

  checks.push_back({"stats.energy_distance_equivalence", [] {
    CounterRng rng(29, 0);
    const MetricSpec rho = MetricSpec::euclidean(2);
    const auto fam = testkit::standard_families().front();
    for (int t = 0; t < 50; ++t) {
      const auto p = testkit::random_probability_measure(fam, rng, 3);
      const auto q = testkit::random_probability_measure(fam, rng, 4);
      const double e = energy_distance(rho, p, q);
      const double m = mmd(make_distance_kernel(rho, Point{-1.0, 2.0}), p, q);
      if (std::abs(e - m * m) > 1e-10) return "energy " + fmt(e) + " vs mmd^2 " + fmt(m * m);
    }
    return std::string();
  }});

  checks.push_back({"stats.permutation_determinism", [] {
    CounterRng rng(30, 0);
    const Kernel k = make_radial_hilbert(PhiProfile::gaussian(0.5), PointSpace::euclidean(1));
    std::vector<Point> xs, ys;
    for (int i = 0; i < 10; ++i) {
      xs.emplace_back(Vector{rng.normal()});
      ys.emplace_back(Vector{rng.normal() + 0.5});
    }
    if (!(permutation_test(k, xs, ys, 199, 5) == permutation_test(k, xs, ys, 199, 5))) {
      return std::string("results differ between runs");
    }
    return std::string();
  }});

  checks.push_back({"kernels.fourier_trig_expansion", [] {
    CounterRng rng(31, 0);
    auto [freqs, weights] = gaussian_frequencies(1, 16, 3);
    const Kernel k = make_fourier_measure(PhiProfile::gaussian(1.0), freqs, weights);
    for (int t = 0; t < 20; ++t) {
      const auto mu = testkit::random_line_measure(rng, 3, false);
      const auto nu = testkit::random_line_measure(rng, 2, false);
      const auto diff = measure_difference(mu, nu);
      double s = 0.0;
      for (std::size_t f = 0; f < freqs.size(); ++f) {
        for (std::size_t i = 0; i < diff.size(); ++i) {
          for (std::size_t j = 0; j < diff.size(); ++j) {
            s += weights[f] * diff.weights()[i] * diff.weights()[j] *
                 std::cos((diff.points()[i].coords()[0] - diff.points()[j].coords()[0]) * freqs[f][0]);
          }
        }
      }
      if (!rel_close(k(mu, nu), std::exp(-s), 1e-12)) return std::string("expansion mismatch");
    }
    return std::string();
  }});

  checks.push_back({"kernels.lp_gatekeeping", [] {
    const GridPtr grid = make_grid(QuadratureGrid::trapezoid(0.0, 1.0, 5));
    const PointSpace r1 = PointSpace::euclidean(1);
    const auto g = PhiProfile::gaussian(1.0);
    const Kernel k1 = make_radial_hilbert(PhiProfile::gaussian(10.0), r1);
    int rejected = 0;
    auto expect_error = [&](const std::function<void()>& fn) {
      try {
        fn();
      } catch (const Error&) {
        ++rejected;
      }
    };
    expect_error([&] { make_lp_operator(g, k1, grid, 1.0); });
    expect_error([&] { make_lp_operator(g, k1, grid, INFINITY); });
    expect_error([&] { make_metric_phi(g, MetricSpec::lp(grid, 3.0)); });
    expect_error([&] {
      make_lp_operator(g, make_radial_hilbert(PhiProfile::gaussian(1e-12), r1), grid, 2.0);
    });
    expect_error([&] { make_tee_radial(g, MapSpec::diagonal_scale({1.0, 0.0}), PointSpace::euclidean(2)); });
    expect_error([&] { make_radial_hilbert(PhiProfile::discrete_laplace({{0.0, 1.0}}), r1); });
    if (rejected != 6) return std::to_string(rejected) + " of 6 invalid constructions rejected";
    return std::string();
  }});

  if (inject_fault) {
    checks.push_back({"selfcheck.injected_fault", [] { return std::string("fault injected on request"); }});
  }
  return checks;
}

}  // namespace

std::vector<InvariantOutcome> run_invariants(bool inject_fault) {
  const auto families = testkit::standard_families();
  std::vector<InvariantOutcome> out;
  for (const auto& c : build_checks(families, inject_fault)) {
    try {
      std::string msg = c.run();
      out.push_back({c.name, msg.empty(), msg});
    } catch (const std::exception& e) {
      out.push_back({c.name, false, std::string("exception: ") + e.what()});
    }
  }
  return out;
}

int print_selfcheck(std::ostream& out, bool inject_fault) {
  int failures = 0;
  for (const auto& r : run_invariants(inject_fault)) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.passed) {
      out << "  (" << r.detail << ")";
      ++failures;
    }
    out << '\n';
  }
  return failures;
}

}  // namespace kernmetric
