#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kernmetric/kernels.hpp"
#include "kernmetric/spaces.hpp"

namespace kernmetric {

enum class Estimator { exact_discrete, u_statistic, v_statistic };

std::string to_string(Estimator e);

struct TestResult {
  double statistic;
  double p_value;  // (1 + #{permuted >= observed}) / (n_permutations + 1)
  std::size_t n_permutations;
  std::uint64_t seed;
  Estimator estimator;

  friend bool operator==(const TestResult&, const TestResult&) = default;
};

// gamma_k(P, Q) = ||Phi_k(P - Q)||. P and Q must be probability measures.
double mmd(const Kernel& k, const DiscreteMeasure& p, const DiscreteMeasure& q);

// S_k(P, x) = -sum_i w_i k(z_i, x) + 1/2 sum_ij w_i w_j k(z_i, z_j) + 1/2 k(x, x),
// clamped at 0 within -1e-10.
double kernel_score(const Kernel& k, const DiscreteMeasure& forecast, const Point& x);

// S_k(Q, P) = sum_j p_j S_k(Q, x_j): the forecast Q scored against outcomes
// drawn from P.
double expected_score(const Kernel& k, const DiscreteMeasure& forecast,
                      const DiscreteMeasure& truth);

// d(P, Q) = S_k(Q, P) - S_k(P, P), clamped at 0 within -1e-10.
double divergence(const Kernel& k, const DiscreteMeasure& p, const DiscreteMeasure& q);

// Unbiased estimate of gamma_k^2 from two equal-weight samples (may be negative).
double mmd_u_statistic(const Kernel& k, const std::vector<Point>& xs,
                       const std::vector<Point>& ys);

// Permutation two-sample test with the U-statistic. Replicate r draws its
// relabeling from CounterRng(seed, r), so the result is deterministic.
TestResult permutation_test(const Kernel& k, const std::vector<Point>& xs,
                            const std::vector<Point>& ys, std::size_t n_permutations,
                            std::uint64_t seed);

// 2 E rho(X, Y) - E rho(X, X') - E rho(Y, Y').
double energy_distance(const MetricSpec& metric, const DiscreteMeasure& p,
                       const DiscreteMeasure& q);

}  // namespace kernmetric
