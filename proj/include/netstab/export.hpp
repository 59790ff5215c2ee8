#pragma once

#include <iosfwd>

#include "netstab/graph.hpp"

namespace netstab {

/// GraphML with node attribute `id` and arc attribute `weight`.
void write_graphml(std::ostream& out, const CommGraph& graph);

/// `source,target,weight` with a header row.
void write_edge_list(std::ostream& out, const CommGraph& graph);

}  // namespace netstab
