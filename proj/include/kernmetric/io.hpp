#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kernmetric/spaces.hpp"

namespace kernmetric::io {

// 17 significant digits, enough for a bit-exact round trip.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;  // empty when the file has no header line
  std::vector<Vector> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line of each row
  std::filesystem::path source;
};

// Reads a numeric CSV. A first line containing any non-numeric field is taken
// as the header. Throws ParseError naming the file and line on malformed
// input (ragged rows, non-numeric or non-finite fields).
CsvTable read_csv(const std::filesystem::path& path);

// Grid file with header "node,weight". The domain is [first node, last node].
QuadratureGrid read_grid(const std::filesystem::path& path);
void write_grid(const std::filesystem::path& path, const QuadratureGrid& grid);

// One point per row. Coordinate count must match the space (ShapeError).
// Measure spaces read "id,<base coordinates>,weight" rows grouped by id.
std::vector<Point> read_points(const std::filesystem::path& path, const PointSpace& space);

// A weighted measure: header ending in "weight" marks the last column as
// weights; otherwise rows are equally weighted. A separate weights file
// (one weight per line, no header) may be supplied for function-valued
// support.
DiscreteMeasure read_measure(const std::filesystem::path& path, const PointSpace& space,
                             const std::optional<std::filesystem::path>& weights_path = {});

// Space inferred from a data file when no kernel spec is given: R^d with d
// the number of non-weight columns, or L^2 on the grid when one is given.
PointSpace infer_space(const std::filesystem::path& path, const GridPtr& grid);

// m rows of m comma-separated values.
std::string matrix_to_csv(const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix(const std::filesystem::path& path);

// Writes to a temporary sibling and renames it over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace kernmetric::io
