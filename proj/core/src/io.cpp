#include "sparsepc/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "sparsepc/errors.hpp"

namespace sparsepc {

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void write_edge_list(const Graph& g, std::ostream& out) {
  const int m = g.vertex_count();
  const int kappa = g.planted() ? static_cast<int>(g.planted()->size()) : 0;
  out << m << ' ' << kappa << '\n';
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (g.adjacent(i, j)) out << i << ' ' << j << '\n';
    }
  }
}

Graph read_edge_list(std::istream& in, int* declared_kappa) {
  int m = 0;
  int kappa = 0;
  if (!(in >> m >> kappa)) throw InvalidArgument("edge list: malformed header");
  if (m < 1) throw InvalidArgument("edge list: vertex count must be >= 1");
  Graph g(m);
  int i = 0;
  int j = 0;
  while (in >> i >> j) {
    if (i < 0 || j < 0 || i >= m || j >= m || i == j) {
      throw InvalidArgument("edge list: endpoint out of range");
    }
    g.set_edge(i, j, true);
  }
  if (declared_kappa != nullptr) *declared_kappa = kappa;
  return g;
}

void write_sample_csv(const SampleMatrix& x, std::ostream& out) {
  const int d = x.d();
  for (int i = 0; i < d; ++i) {
    out << 'x' << (i + 1) << (i + 1 < d ? ',' : '\n');
  }
  for (int obs = 0; obs < x.n(); ++obs) {
    for (int i = 0; i < d; ++i) {
      out << format_double(x.columns(i, obs)) << (i + 1 < d ? ',' : '\n');
    }
  }
}

SampleMatrix read_sample_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("sample csv: missing header");
  int d = 1;
  for (const char c : line) {
    if (c == ',') ++d;
  }
  std::vector<double> values;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string field;
    int cols = 0;
    while (std::getline(row, field, ',')) {
      values.push_back(std::stod(field));
      ++cols;
    }
    if (cols != d) throw InvalidArgument("sample csv: ragged row");
    ++rows;
  }
  if (rows == 0) throw InvalidArgument("sample csv: no observations");
  SampleMatrix x;
  x.columns.resize(d, rows);
  for (int obs = 0; obs < rows; ++obs) {
    for (int i = 0; i < d; ++i) {
      x.columns(i, obs) = values[static_cast<std::size_t>(obs) * d + i];
    }
  }
  return x;
}

}  // namespace sparsepc
