#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "kernmetric/kernels.hpp"
#include "kernmetric/spaces.hpp"

namespace kernmetric {

struct GramMatrix {
  Eigen::MatrixXd entries;
  std::string kernel_kind;
  std::size_t point_count() const { return static_cast<std::size_t>(entries.rows()); }
};

// entries(i, j) = k(x_i, x_j). Upper triangle is evaluated and mirrored, so
// the result is exactly symmetric.
GramMatrix gram(const Kernel& k, const std::vector<Point>& points);

// Cross Gram matrix k(x_i, y_j).
Eigen::MatrixXd cross_gram(const Kernel& k, const std::vector<Point>& xs,
                           const std::vector<Point>& ys);

// ||Phi_k(mu)||^2 = sum_ij w_i w_j k(z_i, z_j), clamped to 0 when it lies in
// [-1e-10 (sum |w_i|)^2 max_i k(z_i, z_i), 0).
double kme_sq_norm(const Kernel& k, const DiscreteMeasure& mu);

// <Phi_k(mu), Phi_k(nu)> = sum_ij a_i b_j k(x_i, y_j), unclamped.
double kme_inner(const Kernel& k, const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// Smallest eigenvalue via a symmetric eigen-solver. Throws NumericError on
// non-finite entries.
double min_eigenvalue(const GramMatrix& g);
double min_eigenvalue(const Eigen::MatrixXd& symmetric);

}  // namespace kernmetric
