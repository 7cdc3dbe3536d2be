#pragma once

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace kernmetric {

// Radial profiles phi(t) = \int_{[0,inf)} exp(-x t) dnu(x), t >= 0.
// Only discrete mixing measures and three closed forms are representable.
class PhiProfile {
 public:
  struct Atom {
    double rate;    // x_i >= 0
    double weight;  // w_i > 0
  };
  struct DiscreteLaplace {
    std::vector<Atom> atoms;
  };
  struct Gaussian {
    double alpha;  // exp(-alpha t), nu = delta_alpha
  };
  struct ExpSqrt {
    double c;  // exp(-c sqrt(t))
  };
  struct InverseRational {
    double beta;   // (1 + t/scale)^(-beta), Gamma(beta, scale) mixing
    double scale;
  };
  using Variant = std::variant<DiscreteLaplace, Gaussian, ExpSqrt, InverseRational>;

  static PhiProfile discrete_laplace(std::vector<Atom> atoms);
  static PhiProfile gaussian(double alpha);
  static PhiProfile exp_sqrt(double c);
  static PhiProfile inverse_rational(double beta, double scale);

  // Throws DomainError for t < 0 or NaN.
  double operator()(double t) const;

  // phi(0), the total mass of the mixing measure.
  double at_zero() const;

  // True iff nu != 0 and supp nu != {0}.
  bool is_strictly_pd_class() const;

  const Variant& variant() const { return rep_; }
  std::string family() const;

 private:
  explicit PhiProfile(Variant rep) : rep_(std::move(rep)) {}
  Variant rep_;
};

// Numerical complete-monotonicity sanity check: (-1)^n times the n-th
// forward difference of phi over t_grid must be >= -1e-10 * phi(0) for
// n = 0..max_order. Non-uniform grids use divided differences rescaled to
// forward-difference units. This is a heuristic, not a membership proof.
bool complete_monotonicity_check(const std::function<double(double)>& phi,
                                 std::span<const double> t_grid, int max_order);

bool complete_monotonicity_check(const PhiProfile& profile,
                                 std::span<const double> t_grid, int max_order);

}  // namespace kernmetric
