#pragma once

#include <iosfwd>
#include <string>

#include "sparsepc/graph.hpp"
#include "sparsepc/sample_matrix.hpp"

namespace sparsepc {

/// Format a double so that it round-trips exactly (17 significant digits).
std::string format_double(double value);

/// Plain-text edge list: first line "m kappa_or_0", then one "i j" pair per
/// edge, 0-indexed, i < j ascending. kappa_or_0 is the planted-clique size
/// (the set itself is not serialized).
void write_edge_list(const Graph& g, std::ostream& out);

/// Reads the edge-list format. The declared clique size, if any, is stored
/// into *declared_kappa; the planted set is unknown after a round trip.
Graph read_edge_list(std::istream& in, int* declared_kappa = nullptr);

/// CSV with header "x1,...,xd" and one observation per row.
void write_sample_csv(const SampleMatrix& x, std::ostream& out);
SampleMatrix read_sample_csv(std::istream& in);

}  // namespace sparsepc
