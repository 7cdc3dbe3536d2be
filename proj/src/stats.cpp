#include "kernmetric/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "kernmetric/embeddings.hpp"
#include "kernmetric/errors.hpp"
#include "kernmetric/random.hpp"
#include "kernmetric/summation.hpp"

namespace kernmetric {
namespace {

void require_probability(const DiscreteMeasure& m, const char* what) {
  if (!m.is_probability()) {
    throw DomainError(std::string(what) +
                      " must be a probability measure (positive weights summing to 1)");
  }
}

// U-statistic over a pooled Gram matrix; the first n indices form X.
double u_statistic(const Eigen::MatrixXd& g, const std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t m = idx.size() - n;
  double xx = 0.0, yy = 0.0, xy = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const auto a = static_cast<Eigen::Index>(idx[i]);
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      const double v = g(a, static_cast<Eigen::Index>(idx[j]));
      const bool ix = i < n;
      const bool jx = j < n;
      if (ix && jx) {
        xx += v;
      } else if (!ix && !jx) {
        yy += v;
      } else {
        xy += v;
      }
    }
  }
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  // Off-diagonal sums were accumulated over i < j, hence the factor 2.
  return 2.0 * xx / (dn * (dn - 1.0)) + 2.0 * yy / (dm * (dm - 1.0)) - 2.0 * xy / (dn * dm);
}

Eigen::MatrixXd pooled_gram(const Kernel& k, const std::vector<Point>& xs,
                            const std::vector<Point>& ys) {
  if (xs.size() < 2 || ys.size() < 2) {
    throw DomainError("two-sample statistics need at least two points per sample");
  }
  std::vector<Point> pooled = xs;
  pooled.insert(pooled.end(), ys.begin(), ys.end());
  return gram(k, pooled).entries;
}

std::vector<std::size_t> identity_labels(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

}  // namespace

std::string to_string(Estimator e) {
  switch (e) {
    case Estimator::exact_discrete:
      return "exact_discrete";
    case Estimator::u_statistic:
      return "u_statistic";
    case Estimator::v_statistic:
      return "v_statistic";
  }
  return "unknown";
}

double mmd(const Kernel& k, const DiscreteMeasure& p, const DiscreteMeasure& q) {
  require_probability(p, "P");
  require_probability(q, "Q");
  return std::sqrt(kme_sq_norm(k, measure_difference(p, q)));
}

double kernel_score(const Kernel& k, const DiscreteMeasure& forecast, const Point& x) {
  require_probability(forecast, "forecast");
  if (!forecast.space().same_as(k.space())) {
    throw ShapeError("forecast lives on " + forecast.space().describe() + " but the kernel on " +
                     k.space().describe());
  }
  check_point(k.space(), x);
  const auto& z = forecast.points();
  const auto& w = forecast.weights();
  double cross = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) cross += w[i] * k.eval_trusted(z[i], x);
  const double self = kme_inner(k, forecast, forecast);
  const double score = -cross + 0.5 * self + 0.5 * k.eval_trusted(x, x);
  if (score < 0.0 && score >= -1e-10) return 0.0;
  return score;
}

double expected_score(const Kernel& k, const DiscreteMeasure& forecast,
                      const DiscreteMeasure& truth) {
  require_probability(truth, "outcome distribution");
  if (!truth.space().same_as(k.space())) {
    throw ShapeError("outcome distribution lives on " + truth.space().describe() +
                     " but the kernel on " + k.space().describe());
  }
  double s = 0.0;
  for (std::size_t j = 0; j < truth.size(); ++j) {
    s += truth.weights()[j] * kernel_score(k, forecast, truth.points()[j]);
  }
  return s;
}

double divergence(const Kernel& k, const DiscreteMeasure& p, const DiscreteMeasure& q) {
  const double d = expected_score(k, q, p) - expected_score(k, p, p);
  if (d < 0.0 && d >= -1e-10) return 0.0;
  return d;
}

double mmd_u_statistic(const Kernel& k, const std::vector<Point>& xs,
                       const std::vector<Point>& ys) {
  const Eigen::MatrixXd g = pooled_gram(k, xs, ys);
  return u_statistic(g, identity_labels(xs.size() + ys.size()), xs.size());
}

TestResult permutation_test(const Kernel& k, const std::vector<Point>& xs,
                            const std::vector<Point>& ys, std::size_t n_permutations,
                            std::uint64_t seed) {
  if (n_permutations < 1) throw DomainError("permutation test needs at least one permutation");
  const Eigen::MatrixXd g = pooled_gram(k, xs, ys);
  const std::size_t n = xs.size();
  const std::size_t total = n + ys.size();
  const double observed = u_statistic(g, identity_labels(total), n);

  std::vector<double> replicate(n_permutations);
  auto run = [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> idx(total);
    for (std::size_t r = begin; r < end; ++r) {
      std::iota(idx.begin(), idx.end(), 0);
      CounterRng rng(seed, r);
      rng.shuffle(idx.begin(), idx.end());
      replicate[r] = u_statistic(g, idx, n);
    }
  };
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()),
                            n_permutations / 64 + 1);
  if (workers <= 1) {
    run(0, n_permutations);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n_permutations + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n_permutations, begin + chunk);
      if (begin < end) pool.emplace_back(run, begin, end);
    }
  }

  // Permuted statistics that differ from the observed one only by summation
  // order count as ties.
  const double tie_tol = 1e-12 * std::max(1.0, std::abs(observed));
  std::size_t exceed = 0;
  for (double v : replicate) {
    if (v >= observed - tie_tol) ++exceed;
  }
  return TestResult{observed,
                    static_cast<double>(1 + exceed) / static_cast<double>(n_permutations + 1),
                    n_permutations, seed, Estimator::u_statistic};
}

double energy_distance(const MetricSpec& metric, const DiscreteMeasure& p,
                       const DiscreteMeasure& q) {
  require_probability(p, "P");
  require_probability(q, "Q");
  if (!p.space().same_as(metric.space()) || !q.space().same_as(metric.space())) {
    throw ShapeError("energy distance: measures do not live on the metric's space " +
                     metric.space().describe());
  }
  auto mean_dist = [&](const DiscreteMeasure& a, const DiscreteMeasure& b) {
    Accumulator acc(needs_compensation(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        acc.add(a.weights()[i] * b.weights()[j] * metric(a.points()[i], b.points()[j]));
      }
    }
    return acc.value();
  };
  const double e = 2.0 * mean_dist(p, q) - mean_dist(p, p) - mean_dist(q, q);
  return e < 0.0 && e >= -1e-10 ? 0.0 : e;
}

}  // namespace kernmetric
