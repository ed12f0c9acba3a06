#pragma once

#include <iosfwd>
#include <string>

#include "msograph/graph.hpp"

namespace mso {

// Graph files are JSON objects with fields:
//   mode      : "loopfree" | "loops"
//   directed  : bool
//   vertices  : [id, ...]
//   edges     : [{id, endpoints: [id, ...], start?: int}, ...]
//   terminals : [id, ...]
// Unknown fields are rejected. read_graph validates all graph invariants.
TypedGraph parse_graph(const std::string& text);
TypedGraph read_graph(const std::string& path);
std::string print_graph(const TypedGraph& g);
void write_graph(const TypedGraph& g, const std::string& path);

} // namespace mso
