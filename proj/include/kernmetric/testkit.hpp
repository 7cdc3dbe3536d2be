#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kernmetric/kernels.hpp"
#include "kernmetric/random.hpp"
#include "kernmetric/spaces.hpp"

// Representative kernels and random data generators shared by the
// self-check command and the test suites.
namespace kernmetric::testkit {

struct KernelFamily {
  std::string name;
  Kernel kernel;
  // Profile lies in the strictly positive definite class (every rule except
  // the distance kernel).
  bool strictly_pd;
  // Draws one random point of the kernel's space.
  std::function<Point(CounterRng&)> sample;
  // Distance used to enforce separation between random points.
  std::function<double(const Point&, const Point&)> separation;
};

// One family per kernel rule, in rule order.
std::vector<KernelFamily> standard_families();

// Random probability measure on R^1 with `atoms` atoms in [-2, 2].
DiscreteMeasure random_line_measure(CounterRng& rng, std::size_t atoms, bool equal_weights);

// `count` points with pairwise separation >= min_sep (rejection sampling).
std::vector<Point> separated_points(const KernelFamily& family, CounterRng& rng,
                                    std::size_t count, double min_sep);

// Signed measure with standard normal weights on separated support. With
// zero_mass the weights are centered to sum to zero.
DiscreteMeasure random_signed_measure(const KernelFamily& family, CounterRng& rng,
                                      std::size_t atoms, bool zero_mass);

DiscreteMeasure random_probability_measure(const KernelFamily& family, CounterRng& rng,
                                           std::size_t atoms);

}  // namespace kernmetric::testkit
