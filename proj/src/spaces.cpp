#include "kernmetric/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kernmetric/errors.hpp"

namespace kernmetric {
namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
  }
}

int compare_vectors(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return -1;
    if (b[i] < a[i]) return 1;
  }
  return 0;
}

int compare_points(const Point& a, const Point& b);

int compare_measures(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (int c = compare_points(a.points()[i], b.points()[i]); c != 0) return c;
  }
  return compare_vectors(a.weights(), b.weights());
}

int compare_points(const Point& a, const Point& b) {
  if (a.is_measure() != b.is_measure()) return a.is_measure() ? 1 : -1;
  if (a.is_measure()) return compare_measures(a.measure(), b.measure());
  return compare_vectors(a.coords(), b.coords());
}

}  // namespace

QuadratureGrid QuadratureGrid::trapezoid(double a, double b, std::size_t m) {
  if (m < 2) throw DomainError("trapezoid grid needs at least two nodes");
  if (!(b > a)) throw DomainError("trapezoid grid needs a < b");
  Vector nodes(m), weights(m);
  const double h = (b - a) / static_cast<double>(m - 1);
  for (std::size_t i = 0; i < m; ++i) {
    nodes[i] = i + 1 == m ? b : a + h * static_cast<double>(i);
    weights[i] = (i == 0 || i + 1 == m) ? 0.5 * h : h;
  }
  return QuadratureGrid(std::move(nodes), std::move(weights), a, b);
}

QuadratureGrid::QuadratureGrid(Vector nodes, Vector weights, double a, double b)
    : nodes_(std::move(nodes)), weights_(std::move(weights)), a_(a), b_(b) {
  if (nodes_.empty()) throw DomainError("quadrature grid needs at least one node");
  if (nodes_.size() != weights_.size()) {
    throw ShapeError("quadrature grid has " + std::to_string(nodes_.size()) + " nodes but " +
                     std::to_string(weights_.size()) + " weights");
  }
  require_finite(nodes_, "grid nodes");
  require_finite(weights_, "grid weights");
  if (!std::isfinite(a_) || !std::isfinite(b_) || !(a_ <= b_)) {
    throw DomainError("grid domain must satisfy a <= b");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!(weights_[i] > 0.0)) throw DomainError("grid weights must be positive");
    if (nodes_[i] < a_ || nodes_[i] > b_) throw DomainError("grid node outside [a, b]");
    if (i > 0 && !(nodes_[i] > nodes_[i - 1])) {
      throw DomainError("grid nodes must be strictly increasing");
    }
  }
}

double QuadratureGrid::total_weight() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

GridPtr make_grid(QuadratureGrid grid) {
  return std::make_shared<const QuadratureGrid>(std::move(grid));
}

FunctionSample::FunctionSample(GridPtr g, Vector v) : grid(std::move(g)), values(std::move(v)) {
  if (!grid) throw ShapeError("function sample needs a grid");
  if (values.size() != grid->size()) {
    throw ShapeError("function sample has " + std::to_string(values.size()) +
                     " values but the grid has " + std::to_string(grid->size()) + " nodes");
  }
  require_finite(values, "function values");
}

double lp_norm(const FunctionSample& f, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("lp_norm needs 1 <= p < inf");
  const auto& w = f.grid->weights();
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * std::pow(std::abs(f.values[i]), p);
  return std::pow(s, 1.0 / p);
}

double sq_dist_l2(const FunctionSample& f, const FunctionSample& g) {
  if (f.grid != g.grid && !(*f.grid == *g.grid)) {
    throw ShapeError("sq_dist_l2: function samples live on different grids");
  }
  const auto& w = f.grid->weights();
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = f.values[i] - g.values[i];
    s += w[i] * d * d;
  }
  return s;
}

// ---------------------------------------------------------------------------
// PointSpace

PointSpace PointSpace::euclidean(std::size_t dim) {
  if (dim == 0) throw DomainError("Euclidean space needs dim >= 1");
  return PointSpace(Euclidean{dim});
}

PointSpace PointSpace::func_lp(GridPtr grid, double p) {
  if (!grid) throw ShapeError("function space needs a grid");
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw DomainError("function space exponent must lie in (1, inf)");
  }
  return PointSpace(FuncLp{std::move(grid), p});
}

PointSpace PointSpace::measures_over(const PointSpace& base) {
  if (base.is_measure()) throw DomainError("measure spaces cannot be nested");
  return PointSpace(MeasurePoints{std::make_shared<const PointSpace>(base)});
}

std::size_t PointSpace::coordinate_count() const {
  if (const auto* e = std::get_if<Euclidean>(&rep_)) return e->dim;
  if (const auto* f = std::get_if<FuncLp>(&rep_)) return f->grid->size();
  return 0;
}

const PointSpace& PointSpace::base() const {
  const auto* m = std::get_if<MeasurePoints>(&rep_);
  if (!m) throw ShapeError("space " + describe() + " is not a measure space");
  return *m->base;
}

const QuadratureGrid& PointSpace::grid() const { return *grid_ptr(); }

GridPtr PointSpace::grid_ptr() const {
  const auto* f = std::get_if<FuncLp>(&rep_);
  if (!f) throw ShapeError("space " + describe() + " is not a function space");
  return f->grid;
}

double PointSpace::p() const {
  const auto* f = std::get_if<FuncLp>(&rep_);
  if (!f) throw ShapeError("space " + describe() + " is not a function space");
  return f->p;
}

std::string PointSpace::describe() const {
  std::ostringstream os;
  if (const auto* e = std::get_if<Euclidean>(&rep_)) {
    os << "R^" << e->dim;
  } else if (const auto* f = std::get_if<FuncLp>(&rep_)) {
    os << "L^" << f->p << "(grid of " << f->grid->size() << " nodes)";
  } else {
    os << "M(" << base().describe() << ")";
  }
  return os.str();
}

bool PointSpace::same_as(const PointSpace& other) const {
  if (rep_.index() != other.rep_.index()) return false;
  if (const auto* e = std::get_if<Euclidean>(&rep_)) {
    return e->dim == std::get<Euclidean>(other.rep_).dim;
  }
  if (const auto* f = std::get_if<FuncLp>(&rep_)) {
    const auto& g = std::get<FuncLp>(other.rep_);
    return f->p == g.p && (f->grid == g.grid || *f->grid == *g.grid);
  }
  return base().same_as(other.base());
}

// ---------------------------------------------------------------------------
// Point

Point::Point(Vector coords) : rep_(std::move(coords)) {}

Point::Point(const FunctionSample& f) : rep_(f.values) {}

Point::Point(DiscreteMeasure measure)
    : rep_(std::make_shared<const DiscreteMeasure>(std::move(measure))) {}

bool Point::is_measure() const { return rep_.index() == 1; }

const Vector& Point::coords() const {
  if (is_measure()) throw ShapeError("expected a coordinate point, got a measure");
  return std::get<Vector>(rep_);
}

const DiscreteMeasure& Point::measure() const {
  if (!is_measure()) throw ShapeError("expected a measure point, got coordinates");
  return *std::get<1>(rep_);
}

bool canonical_less(const Point& a, const Point& b) { return compare_points(a, b) < 0; }

bool operator==(const Point& a, const Point& b) { return compare_points(a, b) == 0; }

void check_point(const PointSpace& space, const Point& x) {
  if (space.is_measure()) {
    if (!x.is_measure()) throw ShapeError("space " + space.describe() + " expects measure points");
    if (!x.measure().space().same_as(space.base())) {
      throw ShapeError("measure point lives on " + x.measure().space().describe() +
                       ", expected " + space.base().describe());
    }
    return;
  }
  if (x.is_measure()) throw ShapeError("space " + space.describe() + " expects coordinate points");
  if (x.coords().size() != space.coordinate_count()) {
    throw ShapeError("point has " + std::to_string(x.coords().size()) + " coordinates, space " +
                     space.describe() + " expects " + std::to_string(space.coordinate_count()));
  }
}

// ---------------------------------------------------------------------------
// DiscreteMeasure

DiscreteMeasure::DiscreteMeasure(PointSpace space, std::vector<Point> points, Vector weights)
    : space_(std::move(space)), points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.empty()) throw DomainError("a discrete measure needs at least one atom");
  if (points_.size() != weights_.size()) {
    throw ShapeError("measure has " + std::to_string(points_.size()) + " points but " +
                     std::to_string(weights_.size()) + " weights");
  }
  require_finite(weights_, "measure weights");
  for (const auto& x : points_) {
    check_point(space_, x);
    if (!x.is_measure()) require_finite(x.coords(), "point coordinates");
  }
}

DiscreteMeasure DiscreteMeasure::empirical(PointSpace space, std::vector<Point> points) {
  const double w = points.empty() ? 0.0 : 1.0 / static_cast<double>(points.size());
  Vector weights(points.size(), w);
  return DiscreteMeasure(std::move(space), std::move(points), std::move(weights));
}

double DiscreteMeasure::total_mass() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

bool DiscreteMeasure::is_probability() const {
  if (!std::all_of(weights_.begin(), weights_.end(), [](double w) { return w > 0.0; })) {
    return false;
  }
  return std::abs(total_mass() - 1.0) <= 1e-12;
}

bool DiscreteMeasure::is_zero_mass() const { return std::abs(total_mass()) <= 1e-12; }

DiscreteMeasure DiscreteMeasure::scaled(double factor) const {
  Vector w = weights_;
  for (double& v : w) v *= factor;
  return DiscreteMeasure(space_, points_, std::move(w));
}

DiscreteMeasure DiscreteMeasure::coalesced() const {
  std::vector<std::size_t> order(points_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return compare_points(points_[a], points_[b]) < 0;
  });
  std::vector<Point> points;
  Vector weights;
  for (std::size_t idx : order) {
    if (!points.empty() && compare_points(points.back(), points_[idx]) == 0) {
      weights.back() += weights_[idx];
    } else {
      points.push_back(points_[idx]);
      weights.push_back(weights_[idx]);
    }
  }
  return DiscreteMeasure(space_, std::move(points), std::move(weights));
}

bool operator==(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  return a.space().same_as(b.space()) && compare_measures(a, b) == 0;
}

DiscreteMeasure measure_difference(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (!mu.space().same_as(nu.space())) {
    throw ShapeError("measure_difference: " + mu.space().describe() + " vs " +
                     nu.space().describe());
  }
  std::vector<Point> points = mu.points();
  points.insert(points.end(), nu.points().begin(), nu.points().end());
  Vector weights = mu.weights();
  for (double w : nu.weights()) weights.push_back(-w);
  return DiscreteMeasure(mu.space(), std::move(points), std::move(weights));
}

// ---------------------------------------------------------------------------
// MetricSpec

MetricSpec MetricSpec::euclidean(std::size_t dim) { return MetricSpec(PointSpace::euclidean(dim)); }

MetricSpec MetricSpec::lp(GridPtr grid, double p) {
  if (!(p > 1.0 && p <= 2.0)) {
    throw DomainError("L^p metric is whitelisted as strong negative type only for 1 < p <= 2");
  }
  return MetricSpec(PointSpace::func_lp(std::move(grid), p));
}

double MetricSpec::operator()(const Point& x, const Point& y) const {
  check_point(space_, x);
  check_point(space_, y);
  const auto& a = x.coords();
  const auto& b = y.coords();
  if (space_.is_euclidean()) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      s += d * d;
    }
    return std::sqrt(s);
  }
  const double p = space_.p();
  const auto& w = space_.grid().weights();
  double s = 0.0;
  if (p == 2.0) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      s += w[i] * d * d;
    }
    return std::sqrt(s);
  }
  for (std::size_t i = 0; i < a.size(); ++i) s += w[i] * std::pow(std::abs(a[i] - b[i]), p);
  return std::pow(s, 1.0 / p);
}

double metric_dist(const MetricSpec& metric, const Point& x, const Point& y) {
  return metric(x, y);
}

}  // namespace kernmetric
