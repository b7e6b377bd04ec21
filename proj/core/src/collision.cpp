#include "gpbg/collision.hpp"

#include <limits>
#include <numeric>

namespace gpbg {

bool CollisionMap::valid() const {
    if (k < 1 || n < 0 || static_cast<int>(mu.size()) != n) return false;
    for (int l = 1; l <= n; ++l) {
        if (at(l) < 1 || at(l) > k + l - 1) return false;
    }
    return true;
}

bool HighlightedMatrix::valid() const {
    if (k < 1 || n < 1 || static_cast<int>(highlight.size()) != n) return false;
    for (int l = 1; l <= n; ++l) {
        if (at(l) < 1 || at(l) > k + l - 1) return false;
    }
    return true;
}

bool Permutation::valid() const {
    std::vector<char> seen(sigma.size(), 0);
    for (int v : sigma) {
        if (v < 1 || v > size() || seen[static_cast<std::size_t>(v) - 1]) return false;
        seen[static_cast<std::size_t>(v) - 1] = 1;
    }
    return true;
}

Permutation Permutation::inverse() const {
    Permutation inv;
    inv.sigma.resize(sigma.size());
    for (int i = 1; i <= size(); ++i) inv.sigma[static_cast<std::size_t>((*this)(i)) - 1] = i;
    return inv;
}

Permutation Permutation::identity(int n) {
    Permutation p;
    p.sigma.resize(static_cast<std::size_t>(n));
    std::iota(p.sigma.begin(), p.sigma.end(), 1);
    return p;
}

std::uint64_t count_maps(int k, int n) {
    if (k < 1 || n < 1) throw Error("count_maps: k and n must be positive");
    std::uint64_t c = 1;
    for (int i = 0; i < n; ++i) {
        const auto f = static_cast<std::uint64_t>(k + i);
        if (c > std::numeric_limits<std::uint64_t>::max() / f) {
            throw Error("count_maps: product overflows 64 bits");
        }
        c *= f;
    }
    return c;
}

std::vector<CollisionMap> enumerate_maps(int k, int n) {
    constexpr std::uint64_t kGuard = 10'000'000;
    const std::uint64_t total = count_maps(k, n);
    if (total > kGuard) {
        throw SizeGuardExceeded("enumerate_maps: " + std::to_string(total) +
                                " maps exceeds the guard of " + std::to_string(kGuard));
    }
    std::vector<CollisionMap> out;
    out.reserve(static_cast<std::size_t>(total));

    CollisionMap m{k, n, std::vector<int>(static_cast<std::size_t>(n), 1)};
    // Odometer over mu with per-position radix k+l-1; ascending in the last
    // position first gives lexicographic order.
    while (true) {
        out.push_back(m);
        int l = n;
        while (l >= 1 && m.mu[static_cast<std::size_t>(l) - 1] == k + l - 1) {
            m.mu[static_cast<std::size_t>(l) - 1] = 1;
            --l;
        }
        if (l == 0) break;
        ++m.mu[static_cast<std::size_t>(l) - 1];
    }
    return out;
}

HighlightedMatrix map_to_matrix(const CollisionMap& m) {
    return HighlightedMatrix{m.k, m.n, m.mu};
}

CollisionMap matrix_to_map(const HighlightedMatrix& h) {
    return CollisionMap{h.k, h.n, h.highlight};
}

ojson to_json(const CollisionMap& m) {
    return ojson{{"k", m.k}, {"n", m.n}, {"mu", m.mu}};
}

ojson to_json(const HighlightedMatrix& h) {
    return ojson{{"k", h.k}, {"n", h.n}, {"mu", h.highlight}, {"rows", h.rows()}};
}

ojson to_json(const Permutation& p) {
    return ojson(p.sigma);
}

CollisionMap collision_map_from_json(const ojson& j) {
    CollisionMap m;
    m.k = j.at("k").get<int>();
    m.n = j.at("n").get<int>();
    m.mu = j.at("mu").get<std::vector<int>>();
    if (!m.valid()) throw Error("collision_map_from_json: invalid map");
    return m;
}

}  // namespace gpbg
