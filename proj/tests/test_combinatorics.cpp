#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "gpbg/board.hpp"

using namespace gpbg;

namespace {

// Independent count by the defining recursion: each new level may contract
// onto any of the k+n-1 previously available particles.
std::uint64_t recursive_count(int k, int n) {
    return n == 0 ? 1 : recursive_count(k, n - 1) * static_cast<std::uint64_t>(k + n - 1);
}

}  // namespace

TEST_CASE("enumeration counts match the closed product and the recursion") {
    for (int k = 1; k <= 3; ++k) {
        for (int n = 1; n <= 6; ++n) {
            const auto maps = enumerate_maps(k, n);
            CHECK(maps.size() == count_maps(k, n));
            CHECK(maps.size() == recursive_count(k, n));
            for (const auto& m : maps) CHECK(m.valid());
            CHECK(std::is_sorted(maps.begin(), maps.end()));
        }
    }
    CHECK(count_maps(2, 4) == 120);
}

TEST_CASE("small enumerations are exactly right") {
    const auto m12 = enumerate_maps(1, 2);
    REQUIRE(m12.size() == 2);
    CHECK(m12[0].mu == std::vector<int>({1, 1}));
    CHECK(m12[1].mu == std::vector<int>({1, 2}));

    const auto m31 = enumerate_maps(3, 1);
    REQUIRE(m31.size() == 3);
    CHECK(m31[0].mu == std::vector<int>({1}));
    CHECK(m31[1].mu == std::vector<int>({2}));
    CHECK(m31[2].mu == std::vector<int>({3}));
}

TEST_CASE("enumeration guard fires") {
    CHECK_THROWS_AS(enumerate_maps(5, 10), SizeGuardExceeded);
}

TEST_CASE("map and matrix views are inverse") {
    const CollisionMap a{1, 2, {1, 2}};
    CHECK(map_to_matrix(a).highlight == std::vector<int>({1, 2}));
    const CollisionMap b{2, 4, {1, 2, 3, 3}};
    CHECK(map_to_matrix(b).highlight == std::vector<int>({1, 2, 3, 3}));
    const CollisionMap c{1, 4, {1, 1, 3, 4}};
    CHECK(map_to_matrix(c).highlight == std::vector<int>({1, 1, 3, 4}));
    CHECK(map_to_matrix(c).rows() == 4);

    for (int k = 1; k <= 2; ++k) {
        for (int n = 1; n <= 4; ++n) {
            for (const auto& m : enumerate_maps(k, n)) {
                CHECK(matrix_to_map(map_to_matrix(m)) == m);
            }
        }
    }
}

TEST_CASE("collision map json round trip") {
    const CollisionMap m{2, 3, {1, 2, 4}};
    const ojson j = to_json(m);
    CHECK(j["k"] == 2);
    CHECK(j["mu"] == std::vector<int>({1, 2, 4}));
    CHECK(collision_map_from_json(j) == m);
}

TEST_CASE("upper echelon detection") {
    CHECK(is_upper_echelon(HighlightedMatrix{1, 4, {1, 1, 3, 4}}));
    CHECK(is_upper_echelon(HighlightedMatrix{2, 4, {1, 2, 3, 3}}));
    CHECK_FALSE(is_upper_echelon(HighlightedMatrix{2, 2, {2, 1}}));
}

TEST_CASE("move applicability and the worked swap") {
    const BoardState flat = BoardState::initial(CollisionMap{1, 2, {1, 1}});
    CHECK_FALSE(move_applicable(flat, 1));
    CHECK_THROWS_AS(acceptable_move(flat, 1), MoveNotApplicable);

    // mu = (1,2,1): the descent at column 2 swaps columns 2,3 and times 2,3.
    const BoardState b = BoardState::initial(CollisionMap{1, 3, {1, 2, 1}});
    const BoardState after = acceptable_move(b, 2);
    CHECK(after.matrix.highlight == std::vector<int>({1, 1, 2}));
    CHECK(after.column_label(1) == 1);
    CHECK(after.column_label(2) == 3);
    CHECK(after.column_label(3) == 2);
}

TEST_CASE("row exchange relabels later columns") {
    // Hand application: swapping columns 2,3 of (1,2,1,3) gives (1,1,2,3),
    // then rows 3,4 exchange moves the column-4 highlight from 3 to 4.
    const BoardState b = BoardState::initial(CollisionMap{1, 4, {1, 2, 1, 3}});
    const BoardState after = acceptable_move(b, 2);
    CHECK(after.matrix.highlight == std::vector<int>({1, 1, 2, 4}));
}

TEST_CASE("the raw exchange is an involution") {
    for (int k = 1; k <= 2; ++k) {
        for (int n = 2; n <= 4; ++n) {
            for (const auto& m : enumerate_maps(k, n)) {
                const BoardState b = BoardState::initial(m);
                for (int j = 1; j < n; ++j) {
                    CHECK(exchange_step(exchange_step(b, j), j) == b);
                }
            }
        }
    }
}

TEST_CASE("reduction of an already-echelon board is trivial") {
    const Reduction r = reduce_to_echelon(CollisionMap{1, 4, {1, 1, 3, 4}});
    CHECK(r.moves.empty());
    CHECK(r.sigma == Permutation::identity(4));
    CHECK(r.representative.highlight == std::vector<int>({1, 1, 3, 4}));
}

TEST_CASE("reduction of the single-descent map") {
    const Reduction r = reduce_to_echelon(CollisionMap{1, 3, {1, 2, 1}});
    CHECK(r.representative.highlight == std::vector<int>({1, 1, 2}));
    CHECK(r.moves == std::vector<int>({2}));
    CHECK(r.sigma.sigma == std::vector<int>({1, 3, 2}));
}

TEST_CASE("reductions replay and stay within the move budget") {
    for (int k = 1; k <= 2; ++k) {
        for (int n = 1; n <= 5; ++n) {
            for (const auto& m : enumerate_maps(k, n)) {
                const Reduction r = reduce_to_echelon(m);
                CHECK(is_upper_echelon(r.representative));
                CHECK(static_cast<int>(r.moves.size()) <= n * (n - 1) / 2);
                BoardState b = BoardState::initial(m);
                for (int j : r.moves) b = acceptable_move(b, j);
                CHECK(b.matrix == r.representative);
                CHECK(b.time_order == r.sigma);
            }
        }
    }
}

TEST_CASE("exhaustive move search reaches exactly the canonical echelon form") {
    // Breadth-first closure over all legal move sequences. Every map turns
    // out to reach exactly one echelon matrix, and it is the canonical one.
    for (int k = 1; k <= 2; ++k) {
        for (int n = 2; n <= 4; ++n) {
            for (const auto& m : enumerate_maps(k, n)) {
                std::set<std::vector<int>> echelon_forms;
                std::set<BoardState> seen;
                std::vector<BoardState> frontier{BoardState::initial(m)};
                seen.insert(frontier.front());
                while (!frontier.empty()) {
                    const BoardState b = frontier.back();
                    frontier.pop_back();
                    if (is_upper_echelon(b.matrix)) echelon_forms.insert(b.matrix.highlight);
                    for (int j = 1; j < n; ++j) {
                        if (!move_applicable(b, j)) continue;
                        BoardState next = acceptable_move(b, j);
                        if (seen.insert(next).second) frontier.push_back(std::move(next));
                    }
                }
                REQUIRE(echelon_forms.size() == 1);
                CHECK(*echelon_forms.begin() == reduce_to_echelon(m).representative.highlight);
            }
        }
    }
}

TEST_CASE("partition at k=1,n=2 is two singletons") {
    const auto classes = partition_classes(1, 2);
    REQUIRE(classes.size() == 2);
    for (const auto& c : classes) CHECK(c.members.size() == 1);
}

TEST_CASE("partition is exact and respects the class-count bound") {
    for (int k = 1; k <= 3; ++k) {
        for (int n = 1; n <= 5; ++n) {
            const auto classes = partition_classes(k, n);
            CHECK(classes.size() <= (std::uint64_t{1} << (k + 2 * n - 2)));

            std::size_t members = 0;
            std::set<std::vector<int>> all_maps;
            for (const auto& c : classes) {
                CHECK(is_upper_echelon(c.representative));
                members += c.members.size();
                std::set<std::vector<int>> sigmas;
                for (const auto& mem : c.members) {
                    CHECK(all_maps.insert(mem.map.mu).second);
                    CHECK(sigmas.insert(mem.sigma.sigma).second);
                }
                CHECK(sigmas.size() == c.domain.size());
            }
            CHECK(members == count_maps(k, n));
        }
    }
}

TEST_CASE("partition groups agree with the breadth-first closure") {
    for (int k = 1; k <= 2; ++k) {
        for (int n = 2; n <= 4; ++n) {
            std::map<std::vector<int>, std::set<std::vector<int>>> bfs_groups;
            for (const auto& m : enumerate_maps(k, n)) {
                bfs_groups[reduce_to_echelon(m).representative.highlight].insert(m.mu);
            }
            const auto classes = partition_classes(k, n);
            REQUIRE(classes.size() == bfs_groups.size());
            for (const auto& c : classes) {
                std::set<std::vector<int>> got;
                for (const auto& mem : c.members) got.insert(mem.map.mu);
                CHECK(got == bfs_groups.at(c.representative.highlight));
            }
        }
    }
}

TEST_CASE("echelon class json shape") {
    const auto classes = partition_classes(1, 3);
    const ojson j = to_json(classes.front());
    CHECK(j.contains("representative"));
    CHECK(j.contains("members"));
    CHECK(j["members"].size() == classes.front().members.size());
}

TEST_CASE("reduction graph dot output") {
    const std::string dot = reduction_graph_dot(1, 3);
    CHECK(dot.find("digraph reduction") != std::string::npos);
    CHECK(dot.find("j=2") != std::string::npos);
}
