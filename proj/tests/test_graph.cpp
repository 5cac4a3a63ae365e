#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "vrrw/graph.hpp"
#include "vrrw/rng.hpp"

using namespace vrrw;

TEST_CASE("complete graph K_3") {
    const auto g = GraphTopology::complete_like(3, {0, 0, 0});
    CHECK(g.num_vertices() == 3);
    CHECK(g.num_leaves() == 0);
    const auto n0 = g.neighbors(0);
    CHECK(std::vector<Vertex>(n0.begin(), n0.end()) == std::vector<Vertex>{1, 2});
    const auto n1 = g.neighbors(1);
    CHECK(std::vector<Vertex>(n1.begin(), n1.end()) == std::vector<Vertex>{0, 2});
}

TEST_CASE("triangle with one leaf at the last vertex") {
    const auto g = GraphTopology::complete_like(3, {0, 0, 1});
    CHECK(g.num_vertices() == 4);
    const auto n2 = g.neighbors(2);
    CHECK(std::vector<Vertex>(n2.begin(), n2.end()) == std::vector<Vertex>{0, 1, 3});
    const auto nl = g.neighbors(3);
    CHECK(std::vector<Vertex>(nl.begin(), nl.end()) == std::vector<Vertex>{2});
    CHECK(g.is_leaf(3));
    CHECK(g.group_of(3) == 2);
    CHECK(g.label(3) == "l2.0");
}

TEST_CASE("vertex count adds leaves") {
    const auto g = GraphTopology::complete_like(4, {1, 0, 2, 0});
    CHECK(g.num_vertices() == 7);
    // leaves are laid out grouped by attachment vertex, ascending
    CHECK(g.group_of(4) == 0);
    CHECK(g.group_of(5) == 2);
    CHECK(g.group_of(6) == 2);
    CHECK(g.leaf_count(2) == 2);
}

TEST_CASE("complete_like rejects bad input") {
    CHECK_THROWS_AS(GraphTopology::complete_like(1, {0}), std::invalid_argument);
    CHECK_THROWS_AS(GraphTopology::complete_like(3, {0, -1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(GraphTopology::complete_like(3, {0, 0}), std::invalid_argument);
}

TEST_CASE("d=2 graphs are accepted") {
    const auto g = GraphTopology::complete_like(2, {1, 1});
    CHECK(g.num_vertices() == 4);
    CHECK(g.d() == 2);
}

TEST_CASE("singleton-class d-partite graph is a complete graph") {
    const auto g = GraphTopology::d_partite({1, 1, 1}, {});
    CHECK(g.num_vertices() == 3);
    for (Vertex v = 0; v < 3; ++v) CHECK(g.neighbors(v).size() == 2);
}

TEST_CASE("d-partite leaf attachment rules") {
    // leaf anchored at one member of class 0: fine, degree 1
    const auto g = GraphTopology::d_partite({2, 1, 1}, {{{0}}});
    CHECK(g.num_vertices() == 5);
    CHECK(g.neighbors(4).size() == 1);
    CHECK(g.group_of(4) == 0);

    // vertices 0 and 2 lie in different classes
    CHECK_THROWS_AS(GraphTopology::d_partite({2, 1, 1}, {{{0, 2}}}), std::invalid_argument);
    CHECK_THROWS_AS(GraphTopology::d_partite({2, 0, 1}, {}), std::invalid_argument);
    CHECK_THROWS_AS(GraphTopology::d_partite({2, 1}, {}), std::invalid_argument);
    CHECK_THROWS_AS(GraphTopology::d_partite({2, 1, 1}, {{{}}}), std::invalid_argument);
}

TEST_CASE("d-partite cross-class adjacency") {
    const auto g = GraphTopology::d_partite({2, 1, 1}, {});
    const auto n0 = g.neighbors(0);
    CHECK(std::vector<Vertex>(n0.begin(), n0.end()) == std::vector<Vertex>{2, 3});
    const auto n2 = g.neighbors(2);
    CHECK(std::vector<Vertex>(n2.begin(), n2.end()) == std::vector<Vertex>{0, 1, 3});
}

TEST_CASE("uniform target") {
    const auto k3 = GraphTopology::complete_like(3, {0, 0, 0});
    CHECK(k3.uniform_target() == std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3});
    const auto g3 = GraphTopology::complete_like(3, {0, 0, 1});
    CHECK(g3.uniform_target() == std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3, 0.0});
    const auto dp = GraphTopology::d_partite({2, 1, 1}, {});
    CHECK(dp.uniform_target() == std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3});

    SplitMix64 rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        const int d = 2 + static_cast<int>(rng.bounded(5));
        std::vector<int> leaves(d);
        for (int& r : leaves) r = static_cast<int>(rng.bounded(3));
        const auto g = GraphTopology::complete_like(d, leaves);
        const auto target = g.uniform_target();
        double sum = 0;
        for (double x : target) sum += x;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
        for (int v = g.num_interior(); v < g.num_vertices(); ++v) CHECK(target[v] == 0.0);
    }
}

TEST_CASE("neighbor symmetry and degree sum on random graphs") {
    SplitMix64 rng(11);
    for (int rep = 0; rep < 30; ++rep) {
        const int d = 2 + static_cast<int>(rng.bounded(5));
        std::vector<int> leaves(d);
        int total_leaves = 0;
        for (int& r : leaves) {
            r = static_cast<int>(rng.bounded(4));
            total_leaves += r;
        }
        const auto g = GraphTopology::complete_like(d, leaves);
        std::size_t degree_sum = 0;
        for (Vertex v = 0; v < g.num_vertices(); ++v) {
            const auto nb = g.neighbors(v);
            degree_sum += nb.size();
            for (Vertex w : nb) {
                const auto back = g.neighbors(w);
                CHECK(std::find(back.begin(), back.end(), v) != back.end());
            }
        }
        CHECK(degree_sum == static_cast<std::size_t>(d * (d - 1) + 2 * total_leaves));
    }
}

// Brute-force validation of the three structural properties on every
// accepted small instance: no same-class edges, all cross-class edges,
// leaves adjacent to exactly one class.
TEST_CASE("d-partite accepted graphs pass a brute-force adjacency check") {
    SplitMix64 rng(13);
    for (int rep = 0; rep < 30; ++rep) {
        const int d = 3 + static_cast<int>(rng.bounded(2));
        std::vector<int> sizes(d);
        int interior = 0;
        for (int& s : sizes) {
            s = 1 + static_cast<int>(rng.bounded(2));
            interior += s;
        }
        std::vector<LeafAttachment> leaves;
        const int n_leaves = static_cast<int>(rng.bounded(3));
        for (int l = 0; l < n_leaves; ++l) {
            // anchors drawn inside one class
            int cls = static_cast<int>(rng.bounded(d));
            int base = 0;
            for (int c = 0; c < cls; ++c) base += sizes[c];
            LeafAttachment la;
            la.anchors.push_back(base + static_cast<int>(rng.bounded(sizes[cls])));
            if (sizes[cls] > 1 && rng.bounded(2) == 0)
                la.anchors.push_back(base + static_cast<int>(rng.bounded(sizes[cls])));
            leaves.push_back(la);
        }
        const auto g = GraphTopology::d_partite(sizes, leaves);
        REQUIRE(g.num_vertices() <= 12);

        auto adjacent = [&](Vertex a, Vertex b) {
            const auto nb = g.neighbors(a);
            return std::find(nb.begin(), nb.end(), b) != nb.end();
        };
        for (Vertex a = 0; a < g.num_interior(); ++a) {
            for (Vertex b = 0; b < g.num_interior(); ++b) {
                if (a == b) continue;
                const bool same_class = g.group_of(a) == g.group_of(b);
                CHECK(adjacent(a, b) == !same_class);
            }
        }
        for (Vertex l = g.num_interior(); l < g.num_vertices(); ++l) {
            std::set<int> touched;
            const auto nb = g.neighbors(l);
            CHECK(!nb.empty());
            for (Vertex w : nb) {
                CHECK(!g.is_leaf(w));
                touched.insert(g.group_of(w));
            }
            CHECK(touched.size() == 1);
        }
    }
}

TEST_CASE("unknown vertex is rejected") {
    const auto g = GraphTopology::complete_like(3, {0, 0, 0});
    CHECK_THROWS_AS(g.neighbors(3), std::invalid_argument);
    CHECK_THROWS_AS(g.neighbors(-1), std::invalid_argument);
}

TEST_CASE("describe reports structured vertex identity") {
    const auto g = GraphTopology::complete_like(3, {0, 2, 0});
    const auto leaf = g.describe(4);
    CHECK(leaf.leaf);
    CHECK(leaf.interior_index == 1);
    CHECK(leaf.leaf_index == 1);
    const auto dp = GraphTopology::d_partite({2, 1, 1}, {});
    CHECK(dp.describe(1).class_member_index == 1);
    CHECK(dp.describe(2).class_member_index == 0);
}
