#pragma once

#include <string>
#include <vector>

#include "gpbg/collision.hpp"

namespace gpbg {

// A highlighted matrix augmented with a time row: column l carries the
// label t_{sigma^{-1}(l)}, where sigma is `time_order`.
struct BoardState {
    HighlightedMatrix matrix;
    Permutation time_order;

    static BoardState initial(const CollisionMap& m);
    // The time index labelling column l.
    int column_label(int l) const { return time_order.inverse()(l); }

    auto operator<=>(const BoardState&) const = default;
};

// True iff the highlight row sequence is nondecreasing left to right, i.e.
// every highlight of a higher row sits left of every highlight of a lower
// row. Such matrices are the canonical class representatives.
bool is_upper_echelon(const HighlightedMatrix& m);

// The exchange at column j requires mu(k+j+1) < mu(k+j).
bool move_applicable(const BoardState& b, int j);

// The raw three-part exchange at column j: swap the highlights of columns
// j,j+1, swap the highlights of rows k+j,k+j+1 (skipped where a row holds
// none), and swap the time labels of columns j,j+1. An involution.
BoardState exchange_step(const BoardState& b, int j);

// exchange_step guarded by its applicability condition; the guarded move
// leaves the associated simplex integral invariant.
// Throws MoveNotApplicable.
BoardState acceptable_move(const BoardState& b, int j);

struct Reduction {
    HighlightedMatrix representative;
    Permutation sigma;          // time row after the moves
    std::vector<int> moves;     // column indices, replayable from the identity-time board
};

// Brings a map to upper echelon form by sweeping highlights row by row into
// leftmost consecutive columns. Deterministic; at most n(n-1)/2 moves.
Reduction reduce_to_echelon(const CollisionMap& m);

// One equivalence class: the echelon representative, the (map, permutation)
// pairs it absorbs, and the permutations whose ordered simplices make up the
// class's time domain.
struct EchelonClass {
    struct Member {
        CollisionMap map;
        Permutation sigma;
    };

    HighlightedMatrix representative;
    std::vector<Member> members;
    std::vector<Permutation> domain;
};

// Groups all maps at (k,n) by their canonical echelon representative.
// Classes are ordered by representative, members by map, both lexicographic.
std::vector<EchelonClass> partition_classes(int k, int n);

ojson to_json(const EchelonClass& c);

// DOT graph of every map's canonical reduction path (nodes are boards,
// edges are moves). Representatives are drawn filled.
std::string reduction_graph_dot(int k, int n);
std::string reduction_path_dot(const CollisionMap& m);

}  // namespace gpbg
