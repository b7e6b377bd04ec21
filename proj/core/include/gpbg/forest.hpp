#pragma once

#include <string>
#include <vector>

#include "gpbg/collision.hpp"

namespace gpbg {

// Reference to a child vertex: an internal vertex v_l or a leaf u_i.
// Ordering puts internal vertices before leaves, then compares indices,
// matching the per-factor labelling (internals 1..m_j, leaves after).
struct VertexRef {
    enum Kind { Internal, Leaf } kind = Leaf;
    int index = 0;

    auto operator<=>(const VertexRef&) const = default;
};

// One internal vertex v_l. It stands for the contraction with operator pair
// (sigma(k+l), k+l) and carries the time t_l. `continuing` tracks the
// particle sigma(k+l) (the side that keeps (x,x') in the kernel recursion),
// `created` tracks the particle k+l (the side evaluated on the diagonal).
struct InternalNode {
    int l = 0;
    int op_row = 0;  // sigma(k+l)
    int op_col = 0;  // k+l
    VertexRef continuing;
    VertexRef created;

    VertexRef lo() const { return std::min(continuing, created); }
    VertexRef hi() const { return std::max(continuing, created); }
};

struct Tree {
    int root = 0;                 // j, for root vertex W_j
    std::vector<int> internals;   // global l's, increasing
    std::vector<int> leaves;      // global i's, increasing

    int m() const { return static_cast<int>(internals.size()); }
};

// The k disjoint binary trees underlying one expanded Duhamel term: each
// root has one child, each internal vertex exactly two; exactly one tree
// (the one containing v_n) is distinguished.
struct TreeForest {
    int k = 0;
    int n = 0;
    CollisionMap map;
    std::vector<InternalNode> nodes;  // nodes[l-1]
    std::vector<Tree> trees;          // trees[j-1]
    int distinguished_index = 0;      // 1-based
    std::vector<int> m;               // internal-vertex count per tree

    const InternalNode& node(int l) const { return nodes[static_cast<std::size_t>(l) - 1]; }
    const Tree& tree(int j) const { return trees[static_cast<std::size_t>(j) - 1]; }
};

TreeForest build_forest(const CollisionMap& m);

// The relabeled one-particle map of factor j, produced by order-preserving
// compression of the global particle indices appearing in tree j.
struct FactorMap {
    int j = 0;
    CollisionMap sigma_j;         // k = 1, n = m_j; empty for a bare factor
    std::vector<int> time_slots;  // global time indices, strictly increasing
    bool distinguished = false;
    int n_global = 0;             // total expansion depth (leaf time index)
};

std::vector<FactorMap> extract_factor_maps(const TreeForest& f);

ojson to_json(const TreeForest& f);
ojson to_json(const FactorMap& fm);

// Graphviz rendering; the distinguished tree is drawn with thick edges.
std::string forest_dot(const TreeForest& f);

}  // namespace gpbg
