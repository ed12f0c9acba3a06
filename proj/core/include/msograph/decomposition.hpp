#pragma once

#include <optional>
#include <string>
#include <vector>

#include "msograph/graph.hpp"

namespace mso {

enum class NodeKind { Leaf, Introduce, Forget, Join };

struct Decomposition {
    enum Kind { Tree, Path };
    struct Node {
        std::string id;
        int parent = -1; // index; -1 for the root
        std::set<std::string> bag;
    };
    Kind kind = Tree;
    std::vector<Node> nodes;
    int root = -1;

    int width() const;
    std::vector<std::vector<int>> children() const;
    // The two degree-<=1 nodes of a path-shaped decomposition.
    std::vector<int> path_ends() const;
};

// Empty = valid. Checks rooting structure, vertex coverage, edge coverage,
// and per-vertex occurrence connectivity; Path inputs must be path-shaped.
std::vector<std::string> validate(const Decomposition& d, const TypedGraph& g);

// Every node Leaf/Introduce/Forget/Join, leaves singleton, joins with both
// child bags equal, chains changing one vertex at a time; root bag preserved.
// Path-shaped inputs rooted at an end stay join-free.
Decomposition make_nice(const Decomposition& d, const TypedGraph& g);

// Kinds per node of a nice decomposition; throws DecompositionInvalid if the
// input does not classify.
std::vector<NodeKind> classify(const Decomposition& d);

// Width-bounded search: greedy elimination first, exact subset dynamic
// programming at desk scale (Tree <= exact_limit vertices; Path always runs
// the exact layout search and refuses beyond the limit). nullopt = search
// failed, which certifies nothing above the exact bound.
std::optional<Decomposition> decompose(const TypedGraph& g, int k,
                                       Decomposition::Kind kind,
                                       int exact_limit = 12);

// Re-root at a bag containing every terminal (Tree: any node; Path: one of
// the two ends). Errors with TerminalsNotCoBagged when no such bag exists.
Decomposition verdant_root(const Decomposition& d, const TypedGraph& g);
Decomposition verdurous_root(const Decomposition& d, const TypedGraph& g);

// decompose() on g plus a virtual hyperedge over the terminals, then rooted
// at a terminal-covering bag (Path: the search already pins a terminal last).
std::optional<Decomposition> decompose_for_build(const TypedGraph& g, int k,
                                                 Decomposition::Kind kind,
                                                 int exact_limit = 12);

Decomposition parse_decomposition(const std::string& text);
std::string print_decomposition(const Decomposition& d);
Decomposition read_decomposition(const std::string& path);
void write_decomposition(const Decomposition& d, const std::string& path);

} // namespace mso
