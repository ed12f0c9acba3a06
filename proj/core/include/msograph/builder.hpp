#pragma once

#include "msograph/algebra.hpp"
#include "msograph/decomposition.hpp"

namespace mso {

// Unbounded-signature expression reproducing g up to isomorphism; node count
// linear in |V| + |E| + (max edge type)·|E|.
Expression build_generic(const TypedGraph& g);

// Width-k tree-decomposition-driven build over the bounded-tree-width
// signature. d must be nice, rooted at a bag containing every terminal, and
// valid for g. The output is {0..max(type(g),k+1)}-local.
Expression build_treewidth(const TypedGraph& g, const Decomposition& d, int k);

// Width-k path-decomposition-driven build over the bounded-path-width
// signature. d must be nice, join-free, rooted at an end whose bag contains
// every terminal. The output is {1..max(k+1,type(g))}-local.
Expression build_pathwidth(const TypedGraph& g, const Decomposition& d, int k);

} // namespace mso
