#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <set>

#include "pmk/separator.hpp"

using namespace pmk;

namespace {

std::vector<long long> unit_weights(int n) { return std::vector<long long>(n, 1); }

// Recomputes side weights directly from the separator's own side sets.
void check_balance(const PlanarGraph& g, const CycleSeparator& sep,
                   const std::vector<long long>& w, double eps_bal) {
    long long total = std::accumulate(w.begin(), w.end(), 0LL);
    long long win = 0, wout = 0;
    for (VertexId v = 0; v < g.n; ++v) {
        if (sep.inside[v]) win += w[v];
        if (sep.outside[v]) wout += w[v];
    }
    CHECK(win == sep.weight_inside);
    CHECK(wout == sep.weight_outside);
    double lim = (2.0 / 3.0) * (1.0 + eps_bal) * static_cast<double>(total);
    CHECK(static_cast<double>(std::max(win, wout)) <= lim);
}

// The returned edges must form one simple cycle visiting cycle_vertices.
void check_cycle_structure(const CycleSeparator& sep) {
    const PlanarGraph& g = sep.work;
    std::set<VertexId> cyc(sep.cycle_vertices.begin(), sep.cycle_vertices.end());
    CHECK(cyc.size() == sep.cycle_vertices.size());
    CHECK(sep.tree_path_edges.size() + 1 == sep.cycle_vertices.size());
    std::map<VertexId, int> deg;
    for (EdgeId e : sep.tree_path_edges) {
        ++deg[g.edges[e].u];
        ++deg[g.edges[e].v];
        CHECK(!g.edges[e].virt);
    }
    ++deg[g.edges[sep.closing_edge].u];
    ++deg[g.edges[sep.closing_edge].v];
    for (auto [v, d] : deg) {
        CHECK(d == 2);
        CHECK(cyc.count(v) == 1);
    }
}

} // namespace

TEST_CASE("4-cycle separator is the whole cycle with empty sides") {
    PlanarGraph g = make_cycle(4);
    std::vector<EdgeId> tree = {0, 1, 2}; // path 0-1-2-3
    auto sep = cycle_separator(g, tree, unit_weights(4));
    CHECK(sep.cycle_vertices.size() == 4);
    CHECK(sep.weight_inside == 0);
    CHECK(sep.weight_outside == 0);
    CHECK_FALSE(sep.closing_virtual);
    auto ends = std::minmax(g.edges[sep.closing_edge].u, g.edges[sep.closing_edge].v);
    CHECK(ends.first == 0);
    CHECK(ends.second == 3);
    check_cycle_structure(sep);
}

TEST_CASE("3x3 grid separator from a corner BFS tree balances both sides") {
    PlanarGraph g = make_grid(3, 3);
    auto tree = bfs_tree_edges(g, 0);
    auto sep = cycle_separator(g, tree, unit_weights(9));
    check_balance(g, sep, unit_weights(9), 0.0);
    check_cycle_structure(sep);
    long long side = std::max(sep.weight_inside, sep.weight_outside) + sep.weight_cycle;
    CHECK(side <= 9);
    CHECK(std::max(sep.weight_inside, sep.weight_outside) <= 6);
}

TEST_CASE("all weight on one vertex forces it onto the cycle") {
    PlanarGraph g = make_grid(4, 4);
    auto tree = bfs_tree_edges(g, 0);
    for (VertexId heavy = 0; heavy < g.n; ++heavy) {
        std::vector<long long> w(g.n, 0);
        w[heavy] = 10;
        auto sep = cycle_separator(g, tree, w);
        CHECK(sep.on_cycle[heavy]);
    }
}

TEST_CASE("separator rejects non-biconnected inputs and bad trees") {
    PlanarGraph g = make_path(4);
    std::vector<EdgeId> tree = {0, 1, 2};
    CHECK_THROWS_WITH_AS(cycle_separator(g, tree, unit_weights(4)),
                         doctest::Contains("NotBiconnected"), Error);
    PlanarGraph c = make_cycle(4);
    std::vector<EdgeId> not_spanning = {0, 1};
    CHECK_THROWS_WITH_AS(cycle_separator(c, not_spanning, unit_weights(4)),
                         doctest::Contains("TreeNotSpanning"), Error);
}

TEST_CASE("fan graph exercises the critical-face fallback") {
    // Hub adjacent to every path vertex; star spanning tree makes every real
    // fundamental cycle a tiny triangle, so balance needs a virtual chord.
    int k = 20;
    PlanarGraph g;
    g.n = k + 1;
    g.rot.assign(g.n, {});
    VertexId hub = k;
    // spoke_i has id i, path edge (i,i+1) has id k+i
    for (int i = 0; i < k; ++i) g.edges.push_back(Edge{hub, i, 1, false});
    for (int i = 0; i + 1 < k; ++i) g.edges.push_back(Edge{i, i + 1, 1, false});
    std::vector<EdgeId> spokes(k);
    for (int i = 0; i < k; ++i) spokes[i] = i;
    for (int i = k - 1; i >= 0; --i) g.rot[hub].push_back(spokes[i]);
    for (int i = 0; i < k; ++i) {
        g.rot[i].push_back(i); // spoke
        if (i + 1 < k) g.rot[i].push_back(k + i);
        if (i > 0) g.rot[i].push_back(k + i - 1);
    }
    REQUIRE(validate_embedding(g).ok);
    REQUIRE(is_biconnected(g));
    auto sep = cycle_separator(g, spokes, unit_weights(g.n));
    CHECK(sep.closing_virtual);
    check_cycle_structure(sep);
    long long total = g.n;
    CHECK(static_cast<double>(std::max(sep.weight_inside, sep.weight_outside)) <=
          (2.0 / 3.0) * total);
}

TEST_CASE("block-cut tree on classic shapes") {
    SUBCASE("triangle: one block, no cuts") {
        auto bct = block_cut_tree(make_cycle(3));
        CHECK(bct.blocks.size() == 1);
        CHECK(bct.cut_count() == 0);
    }
    SUBCASE("two triangles sharing a vertex") {
        PlanarGraph g;
        g.n = 5;
        g.rot.assign(5, {});
        // triangles (0,1,4) and (2,3,4) share vertex 4
        g.add_edge(0, 1);
        g.add_edge(1, 4);
        g.add_edge(4, 0);
        g.add_edge(2, 3);
        g.add_edge(3, 4);
        g.add_edge(4, 2);
        auto bct = block_cut_tree(g);
        CHECK(bct.blocks.size() == 2);
        CHECK(bct.cut_count() == 1);
        CHECK(bct.is_cut[4]);
    }
    SUBCASE("P4: three edge blocks, cuts at 1 and 2") {
        auto bct = block_cut_tree(make_path(4));
        CHECK(bct.blocks.size() == 3);
        CHECK(bct.cut_count() == 2);
        CHECK(bct.is_cut[1]);
        CHECK(bct.is_cut[2]);
        CHECK_FALSE(bct.is_cut[0]);
    }
}

TEST_CASE("block levels alternate and edge levels match their block") {
    PlanarGraph g = make_path(5);
    auto bct = block_cut_tree(g);
    CHECK(bct.root_cut != -1);
    CHECK(bct.vertex_level[bct.root_cut] == 0);
    for (std::size_t b = 0; b < bct.blocks.size(); ++b) CHECK(bct.block_level[b] % 2 == 1);
    for (EdgeId e = 0; e < g.m(); ++e) CHECK(bct.edge_level[e] >= 1);
}

namespace {

void check_augmentation(const PlanarGraph& g) {
    Augmentation aug = biconnect_augment(g);
    CHECK(validate_embedding(aug.graph).ok);
    CHECK(is_biconnected(aug.graph));
    // virtual edges carry short real simulation paths with low congestion
    std::map<std::pair<VertexId, VertexId>, int> edge_load;
    for (EdgeId e = g.m(); e < aug.graph.m(); ++e) {
        const auto& path = aug.sim_path[e];
        REQUIRE(path.size() >= 2);
        CHECK(path.size() <= 5); // at most 4 hops
        CHECK(path.front() == aug.graph.edges[e].u);
        CHECK(path.back() == aug.graph.edges[e].v);
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            auto real = g.find_edge(path[i], path[i + 1]);
            REQUIRE(real.has_value());
            auto key = std::minmax(path[i], path[i + 1]);
            ++edge_load[{key.first, key.second}];
        }
    }
    for (auto& [k, load] : edge_load) CHECK(load <= 4);
}

} // namespace

TEST_CASE("augmentation leaves biconnected graphs untouched") {
    auto aug = biconnect_augment(make_cycle(5));
    CHECK(aug.a_edges.empty());
    CHECK(aug.b_edges.empty());
    CHECK(aug.graph.m() == 5);
}

TEST_CASE("augmentation of stars, paths and trees is planar and biconnected") {
    SUBCASE("star K1,3") {
        PlanarGraph g;
        g.n = 4;
        g.rot.assign(4, {});
        g.add_edge(0, 1);
        g.add_edge(0, 2);
        g.add_edge(0, 3);
        check_augmentation(g);
    }
    SUBCASE("two triangles sharing a vertex") {
        PlanarGraph g;
        g.n = 5;
        g.rot.assign(5, {});
        g.add_edge(0, 1);
        g.add_edge(1, 4);
        g.add_edge(4, 0);
        g.add_edge(2, 3);
        g.add_edge(3, 4);
        g.add_edge(4, 2);
        check_augmentation(g);
    }
    SUBCASE("paths") {
        for (int n : {3, 4, 7, 12}) check_augmentation(make_path(n));
    }
    SUBCASE("random spanning trees of triangulations") {
        for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
            PlanarGraph tri = make_random_triangulation(40, seed);
            // keep only a BFS tree: a maximally 1-connected planar graph
            auto tree = bfs_tree_edges(tri, 0);
            PlanarGraph g;
            g.n = tri.n;
            g.rot.assign(g.n, {});
            std::vector<char> keep(tri.m(), 0);
            for (EdgeId e : tree) keep[e] = 1;
            // preserve rotation order restricted to kept edges
            std::vector<EdgeId> remap(tri.m(), -1);
            for (EdgeId e = 0; e < tri.m(); ++e)
                if (keep[e]) {
                    remap[e] = g.m();
                    g.edges.push_back(tri.edges[e]);
                }
            for (VertexId v = 0; v < tri.n; ++v)
                for (EdgeId e : tri.rot[v])
                    if (keep[e]) g.rot[v].push_back(remap[e]);
            REQUIRE(validate_embedding(g).ok);
            check_augmentation(g);
        }
    }
}

TEST_CASE("separator works after augmentation of a 1-connected graph") {
    PlanarGraph g = make_path(9);
    Augmentation aug = biconnect_augment(g);
    auto tree = bfs_tree_edges(g, 0);
    auto sep = cycle_separator(aug.graph, tree, unit_weights(g.n));
    check_cycle_structure(sep);
    long long heavier = std::max(sep.weight_inside, sep.weight_outside);
    CHECK(static_cast<double>(heavier) <= (2.0 / 3.0) * g.n);
    // tree path edges are real path edges
    for (EdgeId e : sep.tree_path_edges) CHECK(e < g.m());
}
