#include "fpls/grid.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fpls {

GridPtr build_grid(int dim, const std::vector<std::array<double, 2>>& bounds,
                   int nodes_per_axis) {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("build_grid: dim must be 1 or 2");
  if (static_cast<int>(bounds.size()) != dim)
    throw std::invalid_argument("build_grid: need one bounds pair per axis");
  if (nodes_per_axis < 1)
    throw std::invalid_argument("build_grid: nodes_per_axis must be >= 1");

  auto g = std::make_shared<GridSpec>();
  g->dim = dim;
  g->nodes_per_axis = nodes_per_axis;
  for (int ax = 0; ax < dim; ++ax) {
    const double a = bounds[ax][0], b = bounds[ax][1];
    if (!(b > a))
      throw std::invalid_argument("build_grid: bounds must satisfy a < b");
    g->lo[ax] = a;
    g->hi[ax] = b;
    g->spacing[ax] = (b - a) / nodes_per_axis;
  }

  const int n = nodes_per_axis;
  if (dim == 1) {
    g->node_coords.reserve(n);
    for (int i = 0; i < n; ++i)
      g->node_coords.push_back({g->lo[0] + (i + 0.5) * g->spacing[0], 0.0});
  } else {
    g->node_coords.reserve(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        g->node_coords.push_back({g->lo[0] + (i + 0.5) * g->spacing[0],
                                  g->lo[1] + (j + 0.5) * g->spacing[1]});
  }
  return g;
}

GridFunction::GridFunction(GridPtr g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid->node_count())
    throw std::invalid_argument("GridFunction: value count != node count");
}

double lr_norm(const GridFunction& f, double r) {
  if (r < 1.0) throw std::invalid_argument("lr_norm: r must be >= 1");
  const double m = f.grid->cell_measure();
  double sum = 0.0;
  for (double v : f.values) sum += m * std::pow(std::abs(v), r);
  return std::pow(sum, 1.0 / r);
}

void write_grid_function(std::ostream& os, const GridFunction& f) {
  const GridSpec& g = *f.grid;
  os << "# fpls-grid dim=" << g.dim << " n=" << g.nodes_per_axis << " a=";
  os << std::setprecision(17);
  for (int ax = 0; ax < g.dim; ++ax) os << (ax ? "," : "") << g.lo[ax];
  os << " b=";
  for (int ax = 0; ax < g.dim; ++ax) os << (ax ? "," : "") << g.hi[ax];
  os << "\n";
  for (double v : f.values) os << v << "\n";
}

void write_grid_function_file(const std::string& path, const GridFunction& f) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_grid_function(os, f);
}

namespace {

std::vector<double> parse_csv_reals(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

// Extracts "key=value" from the header line.
std::string header_field(const std::string& line, const std::string& key) {
  const std::string pat = key + "=";
  auto pos = line.find(pat);
  if (pos == std::string::npos)
    throw std::runtime_error("grid-function header missing field: " + key);
  pos += pat.size();
  auto end = line.find(' ', pos);
  return line.substr(pos, end == std::string::npos ? end : end - pos);
}

}  // namespace

GridFunction read_grid_function(std::istream& is) {
  std::string header;
  // Skip blank lines between sections.
  while (std::getline(is, header) && header.empty()) {
  }
  if (header.rfind("# fpls-grid", 0) != 0)
    throw std::runtime_error("not a grid-function section: bad header");
  const int dim = std::stoi(header_field(header, "dim"));
  const int n = std::stoi(header_field(header, "n"));
  const auto a = parse_csv_reals(header_field(header, "a"));
  const auto b = parse_csv_reals(header_field(header, "b"));
  if (static_cast<int>(a.size()) != dim || static_cast<int>(b.size()) != dim)
    throw std::runtime_error("grid-function header: bounds/dim mismatch");
  std::vector<std::array<double, 2>> bounds;
  for (int ax = 0; ax < dim; ++ax) bounds.push_back({a[ax], b[ax]});
  auto grid = build_grid(dim, bounds, n);

  std::vector<double> vals;
  vals.reserve(grid->node_count());
  std::string line;
  while (vals.size() < grid->node_count() && std::getline(is, line)) {
    if (line.empty()) continue;
    vals.push_back(std::stod(line));
  }
  if (vals.size() != grid->node_count())
    throw std::runtime_error("grid-function section truncated");
  return GridFunction(grid, std::move(vals));
}

GridFunction read_grid_function_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  return read_grid_function(is);
}

}  // namespace fpls
