#include "kernmetric/embeddings.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "kernmetric/errors.hpp"
#include "kernmetric/summation.hpp"

namespace kernmetric {
namespace {

void check_all(const PointSpace& space, const std::vector<Point>& points) {
  for (const auto& p : points) check_point(space, p);
}

void check_measure(const Kernel& k, const DiscreteMeasure& mu) {
  if (!mu.space().same_as(k.space())) {
    throw ShapeError("measure lives on " + mu.space().describe() + " but the kernel on " +
                     k.space().describe());
  }
}

}  // namespace

GramMatrix gram(const Kernel& k, const std::vector<Point>& points) {
  check_all(k.space(), points);
  const auto m = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd g(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      const double v = k.eval_trusted(points[i], points[j]);
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return GramMatrix{std::move(g), k.kind()};
}

Eigen::MatrixXd cross_gram(const Kernel& k, const std::vector<Point>& xs,
                           const std::vector<Point>& ys) {
  check_all(k.space(), xs);
  check_all(k.space(), ys);
  Eigen::MatrixXd g(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ys.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = k.eval_trusted(xs[i], ys[j]);
    }
  }
  return g;
}

double kme_inner(const Kernel& k, const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  check_measure(k, mu);
  check_measure(k, nu);
  Accumulator acc(needs_compensation(mu.size(), nu.size()));
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      acc.add(mu.weights()[i] * nu.weights()[j] * k.eval_trusted(mu.points()[i], nu.points()[j]));
    }
  }
  return acc.value();
}

double kme_sq_norm(const Kernel& k, const DiscreteMeasure& measure) {
  // Coalescing makes exact cancellations (mu - mu) sum to exactly zero.
  const DiscreteMeasure mu = measure.coalesced();
  const double raw = kme_inner(k, mu, mu);
  if (raw >= 0.0) return raw;
  double abs_mass = 0.0;
  double max_diag = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    abs_mass += std::abs(mu.weights()[i]);
    max_diag = std::max(max_diag, std::abs(k.eval_trusted(mu.points()[i], mu.points()[i])));
  }
  if (raw >= -1e-10 * abs_mass * abs_mass * max_diag) return 0.0;
  return raw;
}

double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
  if (symmetric.rows() == 0 || symmetric.rows() != symmetric.cols()) {
    throw ShapeError("min_eigenvalue needs a non-empty square matrix");
  }
  if (!symmetric.allFinite()) throw NumericError("matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()[0];
}

double min_eigenvalue(const GramMatrix& g) { return min_eigenvalue(g.entries); }

}  // namespace kernmetric
