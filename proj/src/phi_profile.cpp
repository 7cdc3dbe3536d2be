#include "kernmetric/phi_profile.hpp"

#include <cmath>
#include <string>

#include "kernmetric/errors.hpp"

namespace kernmetric {
namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be a positive finite number");
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

PhiProfile PhiProfile::discrete_laplace(std::vector<Atom> atoms) {
  if (atoms.empty()) throw DomainError("discrete_laplace profile needs at least one atom");
  for (const auto& a : atoms) {
    if (!(a.rate >= 0.0) || !std::isfinite(a.rate)) {
      throw DomainError("discrete_laplace rates must be finite and nonnegative");
    }
    require_positive(a.weight, "discrete_laplace weight");
  }
  return PhiProfile(DiscreteLaplace{std::move(atoms)});
}

PhiProfile PhiProfile::gaussian(double alpha) {
  require_positive(alpha, "gaussian alpha");
  return PhiProfile(Gaussian{alpha});
}

PhiProfile PhiProfile::exp_sqrt(double c) {
  require_positive(c, "exp_sqrt c");
  return PhiProfile(ExpSqrt{c});
}

PhiProfile PhiProfile::inverse_rational(double beta, double scale) {
  require_positive(beta, "inverse_rational beta");
  require_positive(scale, "inverse_rational scale");
  return PhiProfile(InverseRational{beta, scale});
}

double PhiProfile::operator()(double t) const {
  if (!(t >= 0.0)) throw DomainError("profile argument must be nonnegative, got " + std::to_string(t));
  return std::visit(
      Overloaded{
          [t](const DiscreteLaplace& d) {
            double s = 0.0;
            for (const auto& a : d.atoms) s += a.weight * std::exp(-a.rate * t);
            return s;
          },
          [t](const Gaussian& g) { return std::exp(-g.alpha * t); },
          [t](const ExpSqrt& e) { return std::exp(-e.c * std::sqrt(t)); },
          [t](const InverseRational& r) { return std::pow(1.0 + t / r.scale, -r.beta); },
      },
      rep_);
}

double PhiProfile::at_zero() const {
  if (const auto* d = std::get_if<DiscreteLaplace>(&rep_)) {
    double s = 0.0;
    for (const auto& a : d->atoms) s += a.weight;
    return s;
  }
  return 1.0;
}

bool PhiProfile::is_strictly_pd_class() const {
  if (const auto* d = std::get_if<DiscreteLaplace>(&rep_)) {
    for (const auto& a : d->atoms) {
      if (a.rate > 0.0) return true;
    }
    return false;
  }
  return true;
}

std::string PhiProfile::family() const {
  return std::visit(Overloaded{
                        [](const DiscreteLaplace&) { return std::string("discrete_laplace"); },
                        [](const Gaussian&) { return std::string("gaussian"); },
                        [](const ExpSqrt&) { return std::string("exp_sqrt"); },
                        [](const InverseRational&) { return std::string("inverse_rational"); },
                    },
                    rep_);
}

bool complete_monotonicity_check(const std::function<double(double)>& phi,
                                 std::span<const double> t_grid, int max_order) {
  if (t_grid.empty()) throw DomainError("monotonicity check needs a non-empty grid");
  if (max_order < 0 || max_order > 6) throw DomainError("max_order must lie in [0, 6]");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw DomainError("t_grid must be strictly increasing");
  }
  const double tol = 1e-10 * phi(0.0);

  // table[i] holds the n-th divided difference starting at t_grid[i].
  std::vector<double> table(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) table[i] = phi(t_grid[i]);

  double factorial = 1.0;
  for (int n = 0; n <= max_order; ++n) {
    if (n > 0) {
      factorial *= n;
      const std::size_t count = t_grid.size() - static_cast<std::size_t>(n);
      for (std::size_t i = 0; i < count; ++i) {
        table[i] = (table[i + 1] - table[i]) / (t_grid[i + n] - t_grid[i]);
      }
      table.resize(count);
    }
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t i = 0; i < table.size(); ++i) {
      // n! h^n f[t_i..t_{i+n}] equals the forward difference on a uniform grid.
      const double h = n == 0 ? 1.0 : (t_grid[i + n] - t_grid[i]) / n;
      const double forward = factorial * std::pow(h, n) * table[i];
      if (sign * forward < -tol) return false;
    }
    if (table.empty()) break;
  }
  return true;
}

bool complete_monotonicity_check(const PhiProfile& profile, std::span<const double> t_grid,
                                 int max_order) {
  return complete_monotonicity_check([&profile](double t) { return profile(t); }, t_grid,
                                     max_order);
}

}  // namespace kernmetric
