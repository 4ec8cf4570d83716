#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace fpls {

/// Uniform cell-centered grid on an interval (1D) or axis-aligned
/// rectangle (2D). Node coordinates are cell centers, ordered
/// lexicographically (x fastest), so two builds with identical inputs
/// produce bit-identical coordinate lists.
struct GridSpec {
  int dim = 1;
  std::array<double, 2> lo{};
  std::array<double, 2> hi{};
  int nodes_per_axis = 0;
  std::array<double, 2> spacing{};
  std::vector<std::array<double, 2>> node_coords;  // unused axes are 0

  std::size_t node_count() const { return node_coords.size(); }

  /// Measure of one cell, h_x (1D) or h_x*h_y (2D).
  double cell_measure() const {
    return dim == 1 ? spacing[0] : spacing[0] * spacing[1];
  }
};

using GridPtr = std::shared_ptr<const GridSpec>;

/// bounds: one (lo, hi) pair per axis.
GridPtr build_grid(int dim, const std::vector<std::array<double, 2>>& bounds,
                   int nodes_per_axis);

/// Grid function with implicit zero extension outside the domain.
struct GridFunction {
  GridPtr grid;
  std::vector<double> values;

  GridFunction() = default;
  explicit GridFunction(GridPtr g)
      : grid(std::move(g)), values(grid->node_count(), 0.0) {}
  GridFunction(GridPtr g, std::vector<double> v);

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
};

/// Discrete L^r norm, (sum_i measure * |f_i|^r)^(1/r). Requires r >= 1.
double lr_norm(const GridFunction& f, double r);

/// Plain-text format: header line
///   # fpls-grid dim=<d> n=<N> a=<a0[,a1]> b=<b0[,b1]>
/// followed by one value per line in node order.
void write_grid_function(std::ostream& os, const GridFunction& f);
void write_grid_function_file(const std::string& path, const GridFunction& f);

/// Reads one grid-function section from the stream (header + values).
GridFunction read_grid_function(std::istream& is);
GridFunction read_grid_function_file(const std::string& path);

}  // namespace fpls
