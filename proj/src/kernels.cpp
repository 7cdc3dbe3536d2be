#include "kernmetric/kernels.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "kernmetric/errors.hpp"
#include "kernmetric/random.hpp"
#include "kernmetric/summation.hpp"

namespace kernmetric {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_strict_class(const PhiProfile& phi) {
  if (!phi.is_strictly_pd_class()) {
    throw ClassError("profile '" + phi.family() +
                     "' is not strictly positive definite: its mixing measure is zero or "
                     "concentrated at 0");
  }
}

Kernel wrap(PointSpace space, KernelRule rule) {
  return Kernel(std::make_shared<const KernelImpl>(KernelImpl{std::move(space), std::move(rule)}));
}

// ||a - b||^2 in R^d, or in L^2(lambda) for function spaces.
double hilbert_sq_dist(const PointSpace& space, const Vector& a, const Vector& b) {
  double s = 0.0;
  if (space.is_func()) {
    const auto& w = space.grid().weights();
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      s += w[i] * d * d;
    }
    return s;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// sum_ij a_i a_j k1(z_i, z_j) over the support of mu - nu, row-major.
double embedding_sq_dist(const Kernel& k1, const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  std::vector<const Point*> pts;
  Vector coef;
  pts.reserve(mu.size() + nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    pts.push_back(&mu.points()[i]);
    coef.push_back(mu.weights()[i]);
  }
  for (std::size_t i = 0; i < nu.size(); ++i) {
    pts.push_back(&nu.points()[i]);
    coef.push_back(-nu.weights()[i]);
  }
  Accumulator acc(needs_compensation(pts.size(), pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      acc.add(coef[i] * coef[j] * k1.eval_trusted(*pts[i], *pts[j]));
    }
  }
  return acc.value();
}

double fourier_sq_dist(const rules::FourierMeasure& r, const DiscreteMeasure& mu,
                       const DiscreteMeasure& nu) {
  double total = 0.0;
  for (std::size_t s = 0; s < r.freqs.size(); ++s) {
    const Vector& freq = r.freqs[s];
    double re = 0.0, im = 0.0;
    auto accumulate = [&](const DiscreteMeasure& m, double sign) {
      for (std::size_t j = 0; j < m.size(); ++j) {
        const Vector& x = m.points()[j].coords();
        double phase = 0.0;
        for (std::size_t d = 0; d < x.size(); ++d) phase += x[d] * freq[d];
        re += sign * m.weights()[j] * std::cos(phase);
        im += sign * m.weights()[j] * std::sin(phase);
      }
    };
    accumulate(mu, 1.0);
    accumulate(nu, -1.0);
    total += r.freq_weights[s] * (re * re + im * im);
  }
  return total;
}

struct SortedAtoms {
  Vector location;
  Vector cumulative;  // right end of each atom's quantile interval, last == 1
};

SortedAtoms sorted_atoms(const DiscreteMeasure& mu) {
  if (!mu.is_probability()) {
    throw DomainError("quantile embedding needs a probability measure (positive weights summing to 1)");
  }
  std::vector<std::size_t> order(mu.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return mu.points()[a].coords()[0] < mu.points()[b].coords()[0];
  });
  const double total = mu.total_mass();
  SortedAtoms out;
  double running = 0.0;
  for (std::size_t idx : order) {
    running += mu.weights()[idx];
    out.location.push_back(mu.points()[idx].coords()[0]);
    out.cumulative.push_back(running / total);
  }
  out.cumulative.back() = 1.0;
  return out;
}

double eval_rule(const KernelImpl& impl, const Point& x, const Point& y) {
  return std::visit(
      Overloaded{
          [&](const rules::RadialHilbert& r) {
            return r.phi(hilbert_sq_dist(impl.space, x.coords(), y.coords()));
          },
          [&](const rules::TeeRadial& r) {
            return r.phi(hilbert_sq_dist(impl.space, r.map.apply(x.coords()),
                                         r.map.apply(y.coords())));
          },
          [&](const rules::LpOperator& r) {
            const auto& a = x.coords();
            const auto& b = y.coords();
            const auto m = static_cast<Eigen::Index>(a.size());
            Eigen::VectorXd h(m);
            for (Eigen::Index i = 0; i < m; ++i) h[i] = a[i] - b[i];
            const double q = h.dot(r.weighted_gram * h);
            return r.phi(std::max(q, 0.0));
          },
          [&](const rules::MetricPhi& r) { return r.phi(r.metric(x, y)); },
          [&](const rules::Distance& r) {
            return r.metric(x, r.origin) + r.metric(y, r.origin) - r.metric(x, y);
          },
          [&](const rules::Mixture& r) {
            double s = 0.0;
            for (const auto& [k, w] : r.components) s += w * eval_rule(k.impl(), x, y);
            return s;
          },
          [&](const rules::KmeMeasure& r) {
            const auto& mu = x.measure();
            const auto& nu = y.measure();
            if (mu == nu) return r.phi.at_zero();
            return r.phi(std::max(embedding_sq_dist(r.base, mu, nu), 0.0));
          },
          [&](const rules::FourierMeasure& r) {
            return r.phi(fourier_sq_dist(r, x.measure(), y.measure()));
          },
          [&](const rules::QuantileMonge& r) {
            return r.phi(quantile_sq_distance(x.measure(), y.measure()));
          },
      },
      impl.rule);
}

}  // namespace

// ---------------------------------------------------------------------------
// MapSpec

MapSpec MapSpec::diagonal_scale(Vector factors) {
  if (factors.empty()) throw InjectivityError("diagonal scale needs at least one factor");
  for (double f : factors) {
    if (!std::isfinite(f)) throw DomainError("diagonal scale factors must be finite");
    if (f == 0.0) throw InjectivityError("diagonal scale with a zero factor is not injective");
  }
  return MapSpec(DiagonalScale{std::move(factors)});
}

MapSpec MapSpec::linear(Eigen::MatrixXd matrix) {
  if (matrix.rows() == 0 || matrix.rows() != matrix.cols()) {
    throw InjectivityError("linear grid map must be a non-empty square matrix");
  }
  if (!matrix.allFinite()) throw DomainError("linear grid map has non-finite entries");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix);
  const auto& sv = svd.singularValues();
  const double largest = sv[0];
  const double smallest = sv[sv.size() - 1];
  if (!(largest > 0.0) || !(smallest > 1e-10 * largest)) {
    throw InjectivityError("linear grid map is numerically rank deficient (sigma_min/sigma_max = " +
                           std::to_string(largest > 0.0 ? smallest / largest : 0.0) + ")");
  }
  return MapSpec(LinearGridMap{std::move(matrix)});
}

Vector MapSpec::apply(const Vector& x) const {
  return std::visit(Overloaded{
                        [&](const Identity&) { return x; },
                        [&](const DiagonalScale& d) {
                          Vector out(x.size());
                          for (std::size_t i = 0; i < x.size(); ++i) out[i] = d.factors[i] * x[i];
                          return out;
                        },
                        [&](const LinearGridMap& l) {
                          const Eigen::Map<const Eigen::VectorXd> v(
                              x.data(), static_cast<Eigen::Index>(x.size()));
                          const Eigen::VectorXd r = l.matrix * v;
                          return Vector(r.data(), r.data() + r.size());
                        },
                    },
                    rep_);
}

// ---------------------------------------------------------------------------
// Kernel

double Kernel::operator()(const Point& x, const Point& y) const {
  check_point(impl_->space, x);
  check_point(impl_->space, y);
  return eval_trusted(x, y);
}

double Kernel::eval_trusted(const Point& x, const Point& y) const {
  if (canonical_less(y, x)) return eval_rule(*impl_, y, x);
  return eval_rule(*impl_, x, y);
}

const PointSpace& Kernel::space() const { return impl_->space; }

std::string Kernel::kind() const {
  static constexpr const char* kNames[] = {"radial_hilbert", "tee_radial", "lp_operator",
                                           "metric_phi",     "distance",   "mixture",
                                           "kme_measure",    "fourier_measure",
                                           "quantile_monge"};
  return kNames[impl_->rule.index()];
}

std::optional<double> Kernel::phi_at_zero() const {
  return std::visit(Overloaded{
                        [](const rules::Distance&) -> std::optional<double> { return std::nullopt; },
                        [](const rules::Mixture& m) -> std::optional<double> {
                          double s = 0.0;
                          for (const auto& [k, w] : m.components) {
                            auto v = k.phi_at_zero();
                            if (!v) return std::nullopt;
                            s += w * *v;
                          }
                          return s;
                        },
                        [](const auto& r) -> std::optional<double> { return r.phi.at_zero(); },
                    },
                    impl_->rule);
}

bool Kernel::is_bounded() const {
  if (std::holds_alternative<rules::Distance>(impl_->rule)) return false;
  if (const auto* m = std::get_if<rules::Mixture>(&impl_->rule)) {
    return std::all_of(m->components.begin(), m->components.end(),
                       [](const auto& c) { return c.first.is_bounded(); });
  }
  return true;
}

// ---------------------------------------------------------------------------
// Constructors

Kernel make_radial_hilbert(const PhiProfile& phi, const PointSpace& space) {
  require_strict_class(phi);
  if (space.is_measure()) throw ShapeError("radial Hilbert kernels need R^d or L^2 points");
  if (space.is_func() && space.p() != 2.0) {
    throw DomainError("radial Hilbert kernel on L^p needs p = 2 (L^p is not a Hilbert space otherwise)");
  }
  return wrap(space, rules::RadialHilbert{phi});
}

Kernel make_tee_radial(const PhiProfile& phi, const MapSpec& map, const PointSpace& space) {
  require_strict_class(phi);
  if (space.is_measure()) throw ShapeError("tee radial kernels need R^d or function points");
  const std::size_t n = space.coordinate_count();
  if (const auto* d = std::get_if<MapSpec::DiagonalScale>(&map.variant())) {
    if (d->factors.size() != n) {
      throw ShapeError("diagonal scale has " + std::to_string(d->factors.size()) +
                       " factors for a space with " + std::to_string(n) + " coordinates");
    }
  }
  if (const auto* l = std::get_if<MapSpec::LinearGridMap>(&map.variant())) {
    if (static_cast<std::size_t>(l->matrix.cols()) != n) {
      throw ShapeError("linear map has " + std::to_string(l->matrix.cols()) +
                       " columns for a space with " + std::to_string(n) + " coordinates");
    }
  }
  return wrap(space, rules::TeeRadial{phi, map});
}

Kernel make_lp_operator(const PhiProfile& phi, const Kernel& k1, const GridPtr& grid, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw DomainError("L^p operator kernel needs 1 < p < inf; the cases p = 1 and p = inf are excluded");
  }
  require_strict_class(phi);
  if (!grid) throw ShapeError("L^p operator kernel needs a grid");
  if (!k1.space().same_as(PointSpace::euclidean(1))) {
    throw ShapeError("base kernel must live on R^1, got " + k1.space().describe());
  }
  if (!check_lp_nondegeneracy(k1, *grid)) {
    throw NondegeneracyError(
        "base kernel is degenerate on the grid: the weighted Gram matrix is numerically singular");
  }
  const double q = p / (p - 1.0);
  check_kernelqint(k1, q, *grid);

  const auto m = static_cast<Eigen::Index>(grid->size());
  Eigen::MatrixXd weighted(m, m);
  const auto& x = grid->nodes();
  const auto& w = grid->weights();
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      const double v = w[i] * k1.eval_trusted(Point{x[i]}, Point{x[j]}) * w[j];
      weighted(i, j) = v;
      weighted(j, i) = v;
    }
  }
  return wrap(PointSpace::func_lp(grid, p), rules::LpOperator{phi, k1, p, std::move(weighted)});
}

double check_kernelqint(const Kernel& k1, double q, const QuadratureGrid& grid) {
  if (!(q > 1.0) || !std::isfinite(q)) throw DomainError("kernelqint needs 1 < q < inf");
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point xi{grid.nodes()[i]};
    const double diag = k1(xi, xi);
    if (diag < 0.0) throw NumericError("base kernel has a negative diagonal entry");
    s += grid.weights()[i] * std::pow(diag, q / 2.0);
  }
  if (!std::isfinite(s)) throw NumericError("sum of lambda_i k1(x_i, x_i)^(q/2) overflowed");
  return s;
}

bool check_lp_nondegeneracy(const Kernel& k1, const QuadratureGrid& grid) {
  const auto m = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd weighted(m, m);
  const auto& x = grid.nodes();
  const auto& w = grid.weights();
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      const double v = w[i] * k1(Point{x[i]}, Point{x[j]}) * w[j];
      weighted(i, j) = v;
      weighted(j, i) = v;
    }
  }
  if (!weighted.allFinite()) return false;
  const double trace = weighted.trace();
  if (!(trace > 0.0)) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(weighted, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()[0] > 1e-10 * trace;
}

Kernel make_metric_phi(const PhiProfile& phi, const MetricSpec& metric) {
  require_strict_class(phi);
  return wrap(metric.space(), rules::MetricPhi{phi, metric});
}

Kernel make_distance_kernel(const MetricSpec& metric, const Point& z0) {
  check_point(metric.space(), z0);
  return wrap(metric.space(), rules::Distance{metric, z0});
}

Kernel make_mixture(std::vector<std::pair<Kernel, double>> components) {
  if (components.empty()) throw DomainError("a mixture needs at least one component");
  const PointSpace& space = components.front().first.space();
  for (const auto& [k, w] : components) {
    if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("mixture weights must be positive");
    if (!k.space().same_as(space)) {
      throw ShapeError("mixture components live on different spaces: " + space.describe() +
                       " vs " + k.space().describe());
    }
  }
  PointSpace s = space;
  return wrap(std::move(s), rules::Mixture{std::move(components)});
}

Kernel make_kme_measure(const PhiProfile& phi, const Kernel& k1) {
  require_strict_class(phi);
  if (k1.space().is_measure()) throw ShapeError("measure spaces cannot be nested");
  if (!k1.is_bounded()) throw DomainError("the base kernel of a mean-embedding kernel must be bounded");
  return wrap(PointSpace::measures_over(k1.space()), rules::KmeMeasure{phi, k1});
}

Kernel make_fourier_measure(const PhiProfile& phi, std::vector<Vector> freqs, Vector freq_weights) {
  require_strict_class(phi);
  if (freqs.empty()) throw DomainError("Fourier kernel needs at least one frequency");
  if (freqs.size() != freq_weights.size()) {
    throw ShapeError("Fourier kernel has " + std::to_string(freqs.size()) + " frequencies but " +
                     std::to_string(freq_weights.size()) + " weights");
  }
  const std::size_t dim = freqs.front().size();
  if (dim == 0) throw DomainError("frequencies must have positive dimension");
  double total = 0.0;
  for (std::size_t s = 0; s < freqs.size(); ++s) {
    if (freqs[s].size() != dim) throw ShapeError("frequencies differ in dimension");
    for (double v : freqs[s]) {
      if (!std::isfinite(v)) throw DomainError("frequencies must be finite");
    }
    if (!(freq_weights[s] > 0.0)) throw DomainError("frequency weights must be positive");
    total += freq_weights[s];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError("frequency weights must sum to 1, got " + std::to_string(total));
  }
  return wrap(PointSpace::measures_over(PointSpace::euclidean(dim)),
              rules::FourierMeasure{phi, std::move(freqs), std::move(freq_weights)});
}

std::pair<std::vector<Vector>, Vector> gaussian_frequencies(std::size_t dim, std::size_t n,
                                                            std::uint64_t seed) {
  if (dim == 0 || n == 0) throw DomainError("gaussian frequencies need dim >= 1 and n >= 1");
  CounterRng rng(seed, 0);
  std::vector<Vector> freqs(n, Vector(dim));
  for (auto& f : freqs) {
    for (double& v : f) v = rng.normal();
  }
  return {std::move(freqs), Vector(n, 1.0 / static_cast<double>(n))};
}

Kernel make_quantile_monge(const PhiProfile& phi, const GridPtr& u_grid) {
  require_strict_class(phi);
  if (!u_grid) throw ShapeError("quantile kernel needs a u grid");
  if (u_grid->lower() != 0.0 || u_grid->upper() != 1.0) {
    throw DomainError("quantile kernel u grid must live on [0, 1]");
  }
  return wrap(PointSpace::measures_over(PointSpace::euclidean(1)),
              rules::QuantileMonge{phi, u_grid});
}

double quantile_sq_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  const PointSpace line = PointSpace::euclidean(1);
  if (!mu.space().same_as(line) || !nu.space().same_as(line)) {
    throw ShapeError("quantile distance is only supported for measures on R^1");
  }
  const SortedAtoms a = sorted_atoms(mu);
  const SortedAtoms b = sorted_atoms(nu);
  std::size_t i = 0, j = 0;
  double u = 0.0;
  double total = 0.0;
  while (i < a.location.size() && j < b.location.size()) {
    const double next = std::min(a.cumulative[i], b.cumulative[j]);
    const double gap = a.location[i] - b.location[j];
    if (next > u) total += gap * gap * (next - u);
    u = std::max(u, next);
    if (a.cumulative[i] <= next) ++i;
    if (b.cumulative[j] <= next) ++j;
  }
  return total;
}

FunctionSample monge_embedding(const DiscreteMeasure& mu, const GridPtr& u_grid) {
  if (!mu.space().same_as(PointSpace::euclidean(1))) {
    throw ShapeError("Monge embedding is only supported for measures on R^1");
  }
  const SortedAtoms a = sorted_atoms(mu);
  Vector values;
  values.reserve(u_grid->size());
  for (double u : u_grid->nodes()) {
    // F^-1(u) = inf{x : F(x) >= u}
    auto it = std::lower_bound(a.cumulative.begin(), a.cumulative.end(), u);
    if (it == a.cumulative.end()) --it;
    values.push_back(a.location[static_cast<std::size_t>(it - a.cumulative.begin())]);
  }
  return FunctionSample(u_grid, std::move(values));
}

}  // namespace kernmetric
