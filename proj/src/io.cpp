#include "kernmetric/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "kernmetric/errors.hpp"

namespace kernmetric::io {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return v;
}

[[noreturn]] void fail(const std::filesystem::path& path, std::size_t line, const std::string& msg) {
  throw ParseError(path.string() + ":" + std::to_string(line) + ": " + msg);
}

bool has_weight_column(const CsvTable& t) {
  return !t.header.empty() && t.header.back() == "weight";
}

std::vector<Point> vector_points(const CsvTable& t, const PointSpace& space, std::size_t skip_first,
                                 std::size_t skip_last) {
  std::vector<Point> points;
  points.reserve(t.rows.size());
  const std::size_t expected = space.coordinate_count();
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const Vector& row = t.rows[r];
    const std::size_t have = row.size() - skip_first - skip_last;
    if (have != expected) {
      throw ShapeError(t.source.string() + ":" + std::to_string(t.line_numbers[r]) + ": row has " +
                       std::to_string(have) + " coordinates, space " + space.describe() +
                       " expects " + std::to_string(expected));
    }
    points.emplace_back(Vector(row.begin() + static_cast<std::ptrdiff_t>(skip_first),
                               row.end() - static_cast<std::ptrdiff_t>(skip_last)));
  }
  return points;
}

}  // namespace

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  CsvTable table;
  table.source = path;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    std::vector<double> values;
    values.reserve(fields.size());
    bool numeric = true;
    for (const auto& f : fields) {
      auto v = parse_double(f);
      if (!v) {
        numeric = false;
        break;
      }
      values.push_back(*v);
    }
    if (!numeric) {
      if (table.rows.empty() && table.header.empty()) {
        table.header = fields;
        width = fields.size();
        continue;
      }
      fail(path, lineno, "non-numeric field in data row");
    }
    for (double v : values) {
      if (!std::isfinite(v)) fail(path, lineno, "non-finite value");
    }
    if (width == 0) width = values.size();
    if (values.size() != width) {
      fail(path, lineno, "expected " + std::to_string(width) + " fields, found " +
                             std::to_string(values.size()));
    }
    table.rows.push_back(std::move(values));
    table.line_numbers.push_back(lineno);
  }
  return table;
}

QuadratureGrid read_grid(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  if (t.header.size() != 2 || t.header[0] != "node" || t.header[1] != "weight") {
    fail(path, 1, "grid file needs the header \"node,weight\"");
  }
  if (t.rows.empty()) fail(path, 2, "grid file has no nodes");
  Vector nodes, weights;
  for (const auto& r : t.rows) {
    nodes.push_back(r[0]);
    weights.push_back(r[1]);
  }
  const double a = nodes.front();
  const double b = nodes.back();
  try {
    return QuadratureGrid(std::move(nodes), std::move(weights), a, b);
  } catch (const DomainError& e) {
    throw ParseError(path.string() + ": invalid grid: " + e.what());
  }
}

void write_grid(const std::filesystem::path& path, const QuadratureGrid& grid) {
  std::ostringstream os;
  os << "node,weight\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    os << format_double(grid.nodes()[i]) << ',' << format_double(grid.weights()[i]) << '\n';
  }
  write_atomic(path, os.str());
}

std::vector<Point> read_points(const std::filesystem::path& path, const PointSpace& space) {
  const CsvTable t = read_csv(path);
  if (!space.is_measure()) {
    return vector_points(t, space, 0, has_weight_column(t) ? 1 : 0);
  }
  if (t.header.empty() || t.header.front() != "id" || !has_weight_column(t)) {
    fail(path, 1, "measure-point files need a header \"id,<coordinates>,weight\"");
  }
  const PointSpace& base = space.base();
  const auto coords = vector_points(t, base, 1, 1);
  // Group rows by id, measures ordered by first appearance.
  std::vector<double> ids;
  std::map<double, std::pair<std::vector<Point>, Vector>> groups;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double id = t.rows[r].front();
    auto [it, inserted] = groups.try_emplace(id);
    if (inserted) ids.push_back(id);
    it->second.first.push_back(coords[r]);
    it->second.second.push_back(t.rows[r].back());
  }
  std::vector<Point> points;
  for (double id : ids) {
    auto& g = groups.at(id);
    points.emplace_back(DiscreteMeasure(base, std::move(g.first), std::move(g.second)));
  }
  return points;
}

DiscreteMeasure read_measure(const std::filesystem::path& path, const PointSpace& space,
                             const std::optional<std::filesystem::path>& weights_path) {
  if (space.is_measure()) {
    throw ShapeError("measure files over measure-valued points are not supported");
  }
  const CsvTable t = read_csv(path);
  if (t.rows.empty()) throw ShapeError(path.string() + ": measure file has no atoms");
  const bool inline_weights = has_weight_column(t);
  std::vector<Point> points = vector_points(t, space, 0, inline_weights ? 1 : 0);
  Vector weights;
  if (weights_path) {
    const CsvTable w = read_csv(*weights_path);
    for (std::size_t r = 0; r < w.rows.size(); ++r) {
      if (w.rows[r].size() != 1) fail(*weights_path, w.line_numbers[r], "expected one weight per line");
      weights.push_back(w.rows[r][0]);
    }
    if (weights.size() != points.size()) {
      throw ShapeError(weights_path->string() + ": " + std::to_string(weights.size()) +
                       " weights for " + std::to_string(points.size()) + " atoms");
    }
  } else if (inline_weights) {
    for (const auto& r : t.rows) weights.push_back(r.back());
  } else {
    return DiscreteMeasure::empirical(space, std::move(points));
  }
  return DiscreteMeasure(space, std::move(points), std::move(weights));
}

PointSpace infer_space(const std::filesystem::path& path, const GridPtr& grid) {
  if (grid) return PointSpace::func_lp(grid, 2.0);
  const CsvTable t = read_csv(path);
  std::size_t cols = t.rows.empty() ? t.header.size() : t.rows.front().size();
  if (has_weight_column(t)) --cols;
  if (cols == 0) throw ParseError(path.string() + ": cannot infer the dimension of an empty file");
  return PointSpace::euclidean(cols);
}

std::string matrix_to_csv(const Eigen::MatrixXd& m) {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) os << ',';
      os << format_double(m(i, j));
    }
    os << '\n';
  }
  return os.str();
}

Eigen::MatrixXd read_matrix(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  if (!t.header.empty()) fail(path, 1, "matrix files have no header");
  const auto rows = static_cast<Eigen::Index>(t.rows.size());
  const auto cols = rows == 0 ? 0 : static_cast<Eigen::Index>(t.rows.front().size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = t.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace kernmetric::io
