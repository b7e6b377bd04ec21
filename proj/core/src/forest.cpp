#include "gpbg/forest.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace gpbg {

namespace {

// Next internal vertex after l that touches `particle`, or 0 if none.
int next_touch(const CollisionMap& m, int l, int particle) {
    for (int l2 = l + 1; l2 <= m.n; ++l2) {
        if (m.at(l2) == particle) return l2;
    }
    return 0;
}

// The root index owning v_l: chase the contracted-onto particle down to
// one of the k original particles.
int owner(const CollisionMap& m, int l) {
    int p = m.at(l);
    while (p > m.k) p = m.at(p - m.k);
    return p;
}

}  // namespace

TreeForest build_forest(const CollisionMap& m) {
    if (!m.valid() || m.n < 1) throw Error("build_forest: invalid collision map");
    const int k = m.k, n = m.n;

    TreeForest f;
    f.k = k;
    f.n = n;
    f.map = m;
    f.nodes.resize(static_cast<std::size_t>(n));
    f.trees.resize(static_cast<std::size_t>(k));
    f.m.assign(static_cast<std::size_t>(k), 0);

    for (int j = 1; j <= k; ++j) f.trees[static_cast<std::size_t>(j) - 1].root = j;

    for (int l = 1; l <= n; ++l) {
        InternalNode node;
        node.l = l;
        node.op_row = m.at(l);
        node.op_col = k + l;

        if (int l2 = next_touch(m, l, m.at(l)); l2 != 0) {
            node.continuing = VertexRef{VertexRef::Internal, l2};
        } else {
            node.continuing = VertexRef{VertexRef::Leaf, m.at(l)};
        }
        if (int l2 = next_touch(m, l, k + l); l2 != 0) {
            node.created = VertexRef{VertexRef::Internal, l2};
        } else {
            node.created = VertexRef{VertexRef::Leaf, k + l};
        }
        f.nodes[static_cast<std::size_t>(l) - 1] = node;

        const int j = owner(m, l);
        auto& tree = f.trees[static_cast<std::size_t>(j) - 1];
        tree.internals.push_back(l);
        tree.leaves.push_back(k + l);
        ++f.m[static_cast<std::size_t>(j) - 1];
    }

    // Leaf u_j belongs to tree j for the k original particles.
    for (int j = 1; j <= k; ++j) {
        auto& tree = f.trees[static_cast<std::size_t>(j) - 1];
        tree.leaves.push_back(j);
        std::sort(tree.leaves.begin(), tree.leaves.end());
    }

    f.distinguished_index = owner(m, n);
    return f;
}

std::vector<FactorMap> extract_factor_maps(const TreeForest& f) {
    std::vector<FactorMap> out;
    out.reserve(static_cast<std::size_t>(f.k));
    for (int j = 1; j <= f.k; ++j) {
        const Tree& tree = f.tree(j);
        FactorMap fm;
        fm.j = j;
        fm.distinguished = (j == f.distinguished_index);
        fm.n_global = f.n;
        fm.time_slots = tree.internals;

        // Compress the tree's leaf indices {j, k+l_1, k+l_2, ...} to 1..m+1;
        // the local operator at slot a+1 is the compressed continuing index.
        std::map<int, int> compress;
        for (std::size_t i = 0; i < tree.leaves.size(); ++i) {
            compress[tree.leaves[i]] = static_cast<int>(i) + 1;
        }
        fm.sigma_j.k = 1;
        fm.sigma_j.n = tree.m();
        for (int l : tree.internals) {
            fm.sigma_j.mu.push_back(compress.at(f.node(l).op_row));
        }
        if (!fm.sigma_j.valid()) throw Error("extract_factor_maps: relabeling failed");
        out.push_back(std::move(fm));
    }
    return out;
}

namespace {

std::string vertex_name(const VertexRef& v) {
    return (v.kind == VertexRef::Internal ? "v" : "u") + std::to_string(v.index);
}

}  // namespace

ojson to_json(const TreeForest& f) {
    ojson trees = ojson::array();
    for (int j = 1; j <= f.k; ++j) {
        const Tree& tree = f.tree(j);
        ojson edges = ojson::array();
        if (tree.m() > 0) {
            edges.push_back({"W" + std::to_string(j), "v" + std::to_string(tree.internals.front())});
        } else {
            edges.push_back({"W" + std::to_string(j), "u" + std::to_string(j)});
        }
        for (int l : tree.internals) {
            const auto& node = f.node(l);
            edges.push_back({"v" + std::to_string(l), vertex_name(node.lo())});
            edges.push_back({"v" + std::to_string(l), vertex_name(node.hi())});
        }
        trees.push_back(ojson{{"root", j},
                              {"internal", tree.internals},
                              {"leaves", tree.leaves},
                              {"edges", edges}});
    }
    return ojson{{"k", f.k}, {"n", f.n}, {"mu", f.map.mu}, {"trees", trees},
                 {"distinguished", f.distinguished_index}};
}

ojson to_json(const FactorMap& fm) {
    return ojson{{"j", fm.j},
                 {"sigma_j", fm.sigma_j.mu},
                 {"time_slots", fm.time_slots},
                 {"distinguished", fm.distinguished}};
}

std::string forest_dot(const TreeForest& f) {
    std::ostringstream os;
    os << "graph forest {\n  node [fontname=\"monospace\"];\n";
    for (int j = 1; j <= f.k; ++j) {
        const Tree& tree = f.tree(j);
        const bool dist = (j == f.distinguished_index);
        const char* width = dist ? "2.5" : "1.0";
        os << "  subgraph cluster_" << j << " {\n    label=\"tau" << j << (dist ? " (distinguished)" : "")
           << "\";\n";
        os << "    W" << j << " [shape=square];\n";
        for (int l : tree.internals) {
            os << "    v" << l << " [shape=circle, label=\"v" << l << "\\nB(" << f.node(l).op_row
               << ";" << f.node(l).op_col << ") t" << l << "\"];\n";
        }
        for (int i : tree.leaves) os << "    u" << i << " [shape=plaintext];\n";
        if (tree.m() > 0) {
            os << "    W" << j << " -- v" << tree.internals.front() << " [penwidth=" << width << "];\n";
        } else {
            os << "    W" << j << " -- u" << j << " [penwidth=" << width << "];\n";
        }
        for (int l : tree.internals) {
            const auto& node = f.node(l);
            os << "    v" << l << " -- " << vertex_name(node.lo()) << " [penwidth=" << width << "];\n";
            os << "    v" << l << " -- " << vertex_name(node.hi()) << " [penwidth=" << width << "];\n";
        }
        os << "  }\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace gpbg
