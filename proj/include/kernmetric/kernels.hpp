#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kernmetric/phi_profile.hpp"
#include "kernmetric/spaces.hpp"

namespace kernmetric {

// Injective map into a Hilbert space, used by TeeRadial kernels.
class MapSpec {
 public:
  struct Identity {};
  struct DiagonalScale {
    Vector factors;
  };
  struct LinearGridMap {
    Eigen::MatrixXd matrix;
  };
  using Variant = std::variant<Identity, DiagonalScale, LinearGridMap>;

  static MapSpec identity() { return MapSpec(Identity{}); }
  // Throws InjectivityError on a zero factor.
  static MapSpec diagonal_scale(Vector factors);
  // Throws InjectivityError unless the matrix is square with
  // sigma_min > 1e-10 * sigma_max.
  static MapSpec linear(Eigen::MatrixXd matrix);

  Vector apply(const Vector& x) const;
  const Variant& variant() const { return rep_; }

 private:
  explicit MapSpec(Variant rep) : rep_(std::move(rep)) {}
  Variant rep_;
};

struct KernelImpl;

// Immutable, cheaply copyable handle to a symmetric kernel on a PointSpace.
class Kernel {
 public:
  // Checks both points against space() and evaluates with canonicalized
  // argument order, so k(x, y) == k(y, x) bit for bit.
  double operator()(const Point& x, const Point& y) const;

  // Same as operator() without the membership checks. Callers must have
  // validated the points already.
  double eval_trusted(const Point& x, const Point& y) const;

  const PointSpace& space() const;
  std::string kind() const;

  // phi(0) for profile-based rules, the weighted sum for mixtures of such
  // rules, nullopt otherwise.
  std::optional<double> phi_at_zero() const;
  bool is_bounded() const;

  const KernelImpl& impl() const { return *impl_; }

  explicit Kernel(std::shared_ptr<const KernelImpl> impl) : impl_(std::move(impl)) {}

 private:
  std::shared_ptr<const KernelImpl> impl_;
};

namespace rules {

struct RadialHilbert {
  PhiProfile phi;
};
struct TeeRadial {
  PhiProfile phi;
  MapSpec map;
};
struct LpOperator {
  PhiProfile phi;
  Kernel base;
  double p;
  // lambda_i k1(x_i, x_j) lambda_j
  Eigen::MatrixXd weighted_gram;
};
struct MetricPhi {
  PhiProfile phi;
  MetricSpec metric;
};
struct Distance {
  MetricSpec metric;
  Point origin;
};
struct Mixture {
  std::vector<std::pair<Kernel, double>> components;
};
struct KmeMeasure {
  PhiProfile phi;
  Kernel base;
};
struct FourierMeasure {
  PhiProfile phi;
  std::vector<Vector> freqs;
  Vector freq_weights;
};
struct QuantileMonge {
  PhiProfile phi;
  GridPtr u_grid;
};

}  // namespace rules

using KernelRule = std::variant<rules::RadialHilbert, rules::TeeRadial, rules::LpOperator,
                                rules::MetricPhi, rules::Distance, rules::Mixture,
                                rules::KmeMeasure, rules::FourierMeasure, rules::QuantileMonge>;

struct KernelImpl {
  PointSpace space;
  KernelRule rule;
};

// phi(||x - y||^2) on R^d or on L^2(lambda).
Kernel make_radial_hilbert(const PhiProfile& phi, const PointSpace& space);

// phi(||T(x) - T(y)||^2); the image norm is Euclidean for R^d and the
// weighted L^2(lambda) norm for function spaces.
Kernel make_tee_radial(const PhiProfile& phi, const MapSpec& map, const PointSpace& space);

// phi(Q(f - g)) on L^p(lambda) with Q(h) = sum_ij lambda_i lambda_j k1(x_i, x_j) h_i h_j.
Kernel make_lp_operator(const PhiProfile& phi, const Kernel& k1, const GridPtr& grid, double p);

// sum_i lambda_i k1(x_i, x_i)^(q/2). Throws NumericError on overflow.
double check_kernelqint(const Kernel& k1, double q, const QuadratureGrid& grid);

// Smallest eigenvalue of lambda_i k1(x_i, x_j) lambda_j exceeds 1e-10 * trace.
bool check_lp_nondegeneracy(const Kernel& k1, const QuadratureGrid& grid);

// phi(rho(x, y)) with rho unsquared.
Kernel make_metric_phi(const PhiProfile& phi, const MetricSpec& metric);

// rho(x, z0) + rho(y, z0) - rho(x, y).
Kernel make_distance_kernel(const MetricSpec& metric, const Point& z0);

Kernel make_mixture(std::vector<std::pair<Kernel, double>> components);

// phi(||Phi_k1(mu) - Phi_k1(nu)||^2) on measures over k1's space.
Kernel make_kme_measure(const PhiProfile& phi, const Kernel& k1);

// phi(sum_s w_s |mu^(s) - nu^(s)|^2) on measures over R^d.
Kernel make_fourier_measure(const PhiProfile& phi, std::vector<Vector> freqs,
                            Vector freq_weights);

// n equally weighted standard normal frequencies in R^dim.
std::pair<std::vector<Vector>, Vector> gaussian_frequencies(std::size_t dim, std::size_t n,
                                                            std::uint64_t seed);

// phi(W~_2^2(mu, nu)) on probability measures over R^1 where W~_2 is the
// L^2[0,1] distance of the quantile functions.
Kernel make_quantile_monge(const PhiProfile& phi, const GridPtr& u_grid);

// Exact int_0^1 (F_mu^-1(u) - F_nu^-1(u))^2 du for probability measures on R.
double quantile_sq_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// The 1-D Monge embedding: quantile function of mu sampled at u.
FunctionSample monge_embedding(const DiscreteMeasure& mu, const GridPtr& u_grid);

}  // namespace kernmetric
