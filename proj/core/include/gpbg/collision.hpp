#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "gpbg/errors.hpp"

namespace gpbg {

using ojson = nlohmann::ordered_json;

// A collision map mu: {k+1,...,k+n} -> {1,...,k+n-1} with mu(j) < j.
// Entry l (1-based) of `mu` stores the image of k+l. One map indexes one
// term of the expanded Duhamel iterate.
struct CollisionMap {
    int k = 0;
    int n = 0;
    std::vector<int> mu;

    // 1 <= mu[l] <= k+l-1 for every l, and length(mu) == n.
    bool valid() const;
    int at(int l) const { return mu[static_cast<std::size_t>(l) - 1]; }

    auto operator<=>(const CollisionMap&) const = default;
};

// The (k+n-1) x n matrix picture of a collision map: column l has exactly
// one highlighted entry, in row highlight[l]; everything below the
// staircase row k+l-1 is structurally zero.
struct HighlightedMatrix {
    int k = 0;
    int n = 0;
    std::vector<int> highlight;

    int rows() const { return k + n - 1; }
    int at(int l) const { return highlight[static_cast<std::size_t>(l) - 1]; }
    bool valid() const;

    auto operator<=>(const HighlightedMatrix&) const = default;
};

// A bijection on {1,...,n}, stored one-based.
struct Permutation {
    std::vector<int> sigma;

    int size() const { return static_cast<int>(sigma.size()); }
    int operator()(int i) const { return sigma[static_cast<std::size_t>(i) - 1]; }
    bool valid() const;
    Permutation inverse() const;
    static Permutation identity(int n);

    auto operator<=>(const Permutation&) const = default;
};

// Names t_index with index in {0,...,n}; t_0 is the outer time.
struct TimeLabel {
    int index = 0;
    auto operator<=>(const TimeLabel&) const = default;
};

// Number of collision maps, k(k+1)...(k+n-1). Throws Error on overflow.
std::uint64_t count_maps(int k, int n);

// All valid maps in lexicographic order of mu. Guarded: the count must not
// exceed 10^7 (SizeGuardExceeded otherwise).
std::vector<CollisionMap> enumerate_maps(int k, int n);

HighlightedMatrix map_to_matrix(const CollisionMap& m);
CollisionMap matrix_to_map(const HighlightedMatrix& h);

ojson to_json(const CollisionMap& m);
ojson to_json(const HighlightedMatrix& h);
ojson to_json(const Permutation& p);
CollisionMap collision_map_from_json(const ojson& j);

}  // namespace gpbg
