#pragma once

#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace kernmetric {

using Vector = std::vector<double>;

// Nodes and positive weights discretizing integration against lambda on [a, b].
class QuadratureGrid {
 public:
  // Composite trapezoid rule on m >= 2 uniform nodes over [a, b].
  static QuadratureGrid trapezoid(double a, double b, std::size_t m);

  // Explicit rule. Nodes strictly increasing inside [a, b], weights > 0.
  QuadratureGrid(Vector nodes, Vector weights, double a, double b);

  const Vector& nodes() const { return nodes_; }
  const Vector& weights() const { return weights_; }
  std::size_t size() const { return nodes_.size(); }
  double lower() const { return a_; }
  double upper() const { return b_; }
  double total_weight() const;

  friend bool operator==(const QuadratureGrid&, const QuadratureGrid&) = default;

 private:
  Vector nodes_;
  Vector weights_;
  double a_;
  double b_;
};

using GridPtr = std::shared_ptr<const QuadratureGrid>;

GridPtr make_grid(QuadratureGrid grid);

// An element of L^p(lambda) stored as its values on the grid nodes.
struct FunctionSample {
  FunctionSample(GridPtr grid, Vector values);

  GridPtr grid;
  Vector values;
};

// (sum_i w_i |f_i|^p)^(1/p). Accepts p >= 1 so it can serve as an oracle.
double lp_norm(const FunctionSample& f, double p);

// sum_i w_i (f_i - g_i)^2, the squared L^2(lambda) distance.
double sq_dist_l2(const FunctionSample& f, const FunctionSample& g);

class PointSpace;
using SpacePtr = std::shared_ptr<const PointSpace>;

class PointSpace {
 public:
  struct Euclidean {
    std::size_t dim;
  };
  struct FuncLp {
    GridPtr grid;
    double p;
  };
  struct MeasurePoints {
    SpacePtr base;
  };
  using Variant = std::variant<Euclidean, FuncLp, MeasurePoints>;

  static PointSpace euclidean(std::size_t dim);
  static PointSpace func_lp(GridPtr grid, double p);
  static PointSpace measures_over(const PointSpace& base);

  const Variant& variant() const { return rep_; }
  bool is_euclidean() const { return std::holds_alternative<Euclidean>(rep_); }
  bool is_func() const { return std::holds_alternative<FuncLp>(rep_); }
  bool is_measure() const { return std::holds_alternative<MeasurePoints>(rep_); }

  // Length of the coordinate vector of a point (dim or grid size); 0 for
  // measure spaces.
  std::size_t coordinate_count() const;
  const PointSpace& base() const;  // measure spaces only
  const QuadratureGrid& grid() const;  // function spaces only
  GridPtr grid_ptr() const;
  double p() const;

  std::string describe() const;

  // Structural equality. Grids compare by value.
  bool same_as(const PointSpace& other) const;

 private:
  explicit PointSpace(Variant rep) : rep_(std::move(rep)) {}
  Variant rep_;
};

class DiscreteMeasure;

// A point of some PointSpace: a coordinate vector (Euclidean or function
// values on a grid) or a finitely supported measure over a base space.
class Point {
 public:
  Point(Vector coords);  // NOLINT(google-explicit-constructor)
  Point(std::initializer_list<double> coords) : Point(Vector(coords)) {}
  Point(const FunctionSample& f);  // NOLINT(google-explicit-constructor)
  Point(DiscreteMeasure measure);  // NOLINT(google-explicit-constructor)

  bool is_measure() const;
  const Vector& coords() const;
  const DiscreteMeasure& measure() const;

  // Total order used to canonicalize argument order in kernel evaluation.
  friend bool canonical_less(const Point& a, const Point& b);
  friend bool operator==(const Point& a, const Point& b);

 private:
  std::variant<Vector, std::shared_ptr<const DiscreteMeasure>> rep_;
};

// Throws ShapeError when x does not belong to the space.
void check_point(const PointSpace& space, const Point& x);

// Finitely supported signed measure sum_i w_i delta_{z_i}. Duplicated
// support points are allowed.
class DiscreteMeasure {
 public:
  DiscreteMeasure(PointSpace space, std::vector<Point> points, Vector weights);

  // Equal-weight empirical measure of a sample.
  static DiscreteMeasure empirical(PointSpace space, std::vector<Point> points);

  const PointSpace& space() const { return space_; }
  const std::vector<Point>& points() const { return points_; }
  const Vector& weights() const { return weights_; }
  std::size_t size() const { return points_.size(); }

  // Left-to-right sum of weights.
  double total_mass() const;
  bool is_probability() const;
  bool is_zero_mass() const;

  DiscreteMeasure scaled(double factor) const;

  // Identical support points merged (weights summed left to right), atoms in
  // canonical order. Atoms whose weights cancel exactly are kept with weight 0.
  DiscreteMeasure coalesced() const;

  friend bool operator==(const DiscreteMeasure& a, const DiscreteMeasure& b);

 private:
  PointSpace space_;
  std::vector<Point> points_;
  Vector weights_;
};

// mu - nu: concatenated support, nu's weights negated.
DiscreteMeasure measure_difference(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// Metrics of strong negative type; the whitelist is Euclidean and L^p with
// 1 < p <= 2.
class MetricSpec {
 public:
  static MetricSpec euclidean(std::size_t dim);
  static MetricSpec lp(GridPtr grid, double p);

  double operator()(const Point& x, const Point& y) const;
  const PointSpace& space() const { return space_; }
  bool is_lp() const { return space_.is_func(); }

 private:
  explicit MetricSpec(PointSpace space) : space_(std::move(space)) {}
  PointSpace space_;
};

double metric_dist(const MetricSpec& metric, const Point& x, const Point& y);

}  // namespace kernmetric
