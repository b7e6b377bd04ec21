#include "gpbg/board.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace gpbg {

BoardState BoardState::initial(const CollisionMap& m) {
    return BoardState{map_to_matrix(m), Permutation::identity(m.n)};
}

bool is_upper_echelon(const HighlightedMatrix& m) {
    for (int l = 1; l < m.n; ++l) {
        if (m.at(l) > m.at(l + 1)) return false;
    }
    return true;
}

bool move_applicable(const BoardState& b, int j) {
    if (j < 1 || j >= b.matrix.n) return false;
    return b.matrix.at(j + 1) < b.matrix.at(j);
}

BoardState exchange_step(const BoardState& b, int j) {
    const int k = b.matrix.k;
    BoardState out = b;
    auto& h = out.matrix.highlight;
    std::swap(h[static_cast<std::size_t>(j) - 1], h[static_cast<std::size_t>(j)]);
    // Rows k+j and k+j+1 can only hold highlights of later columns; swap them.
    for (int& row : h) {
        if (row == k + j) {
            row = k + j + 1;
        } else if (row == k + j + 1) {
            row = k + j;
        }
    }
    Permutation labels = b.time_order.inverse();
    std::swap(labels.sigma[static_cast<std::size_t>(j) - 1], labels.sigma[static_cast<std::size_t>(j)]);
    out.time_order = labels.inverse();
    return out;
}

BoardState acceptable_move(const BoardState& b, int j) {
    if (!move_applicable(b, j)) {
        throw MoveNotApplicable("acceptable_move: column " + std::to_string(j) +
                                " does not satisfy mu(k+j+1) < mu(k+j)");
    }
    return exchange_step(b, j);
}

Reduction reduce_to_echelon(const CollisionMap& m) {
    BoardState b = BoardState::initial(m);
    std::vector<int> moves;
    const int k = m.k, n = m.n;

    // Sweep rows top-down. Columns left of next_free are final; highlights
    // of rows below the current one are never disturbed by the row swaps
    // (those touch rows strictly greater than the row being swept).
    int next_free = 1;
    for (int row = 1; row <= k + n - 1 && next_free <= n; ++row) {
        while (true) {
            int c = 0;
            for (int l = next_free; l <= n; ++l) {
                if (b.matrix.at(l) == row) {
                    c = l;
                    break;
                }
            }
            if (c == 0) break;
            for (int j = c - 1; j >= next_free; --j) {
                b = acceptable_move(b, j);
                moves.push_back(j);
            }
            ++next_free;
        }
    }
    return Reduction{b.matrix, b.time_order, std::move(moves)};
}

std::vector<EchelonClass> partition_classes(int k, int n) {
    const auto maps = enumerate_maps(k, n);
    std::map<std::vector<int>, EchelonClass> by_rep;
    for (const auto& m : maps) {
        Reduction r = reduce_to_echelon(m);
        auto& cls = by_rep[r.representative.highlight];
        cls.representative = r.representative;
        cls.members.push_back(EchelonClass::Member{m, r.sigma});
    }
    std::vector<EchelonClass> out;
    out.reserve(by_rep.size());
    for (auto& [rep, cls] : by_rep) {
        std::vector<Permutation> dom;
        for (const auto& mem : cls.members) dom.push_back(mem.sigma);
        std::sort(dom.begin(), dom.end());
        dom.erase(std::unique(dom.begin(), dom.end()), dom.end());
        cls.domain = std::move(dom);
        out.push_back(std::move(cls));
    }
    return out;
}

ojson to_json(const EchelonClass& c) {
    ojson members = ojson::array();
    for (const auto& m : c.members) {
        members.push_back(ojson{{"mu", m.map.mu}, {"sigma", m.sigma.sigma}});
    }
    ojson domain = ojson::array();
    for (const auto& p : c.domain) domain.push_back(p.sigma);
    return ojson{{"representative", to_json(c.representative)},
                 {"members", members},
                 {"domain", domain}};
}

namespace {

std::string board_id(const BoardState& b) {
    std::ostringstream os;
    os << "mu=[";
    for (int l = 1; l <= b.matrix.n; ++l) os << (l > 1 ? "," : "") << b.matrix.at(l);
    os << "] t=[";
    for (int l = 1; l <= b.matrix.n; ++l) os << (l > 1 ? "," : "") << b.column_label(l);
    os << "]";
    return os.str();
}

void emit_path(std::ostringstream& os, const CollisionMap& m) {
    const Reduction r = reduce_to_echelon(m);
    BoardState b = BoardState::initial(m);
    for (int j : r.moves) {
        BoardState next = acceptable_move(b, j);
        os << "  \"" << board_id(b) << "\" -> \"" << board_id(next) << "\" [label=\"j=" << j
           << "\"];\n";
        b = next;
    }
    os << "  \"" << board_id(b) << "\" [style=filled, fillcolor=lightgrey];\n";
}

}  // namespace

std::string reduction_graph_dot(int k, int n) {
    std::ostringstream os;
    os << "digraph reduction {\n  node [shape=box, fontname=\"monospace\"];\n";
    for (const auto& m : enumerate_maps(k, n)) emit_path(os, m);
    os << "}\n";
    return os.str();
}

std::string reduction_path_dot(const CollisionMap& m) {
    std::ostringstream os;
    os << "digraph reduction {\n  node [shape=box, fontname=\"monospace\"];\n";
    emit_path(os, m);
    os << "}\n";
    return os.str();
}

}  // namespace gpbg
