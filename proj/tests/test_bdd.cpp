#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "pmk/bdd.hpp"

using namespace pmk;

namespace {

BddTree build(const PlanarGraph& g, VertexId root, long long threshold, int mode = 0) {
    BuildOptions opt;
    opt.leaf_threshold = threshold;
    opt.mode = mode;
    auto tree = mode == 1 ? sssp_tree_edges(g, root) : bfs_tree_edges(g, root);
    return build_bdd(g, tree, root, opt);
}

} // namespace

TEST_CASE("small graphs collapse to a single leaf bag") {
    PlanarGraph g = make_grid(2, 3);
    BddTree bdd = build(g, 0, 10);
    CHECK(bdd.bags.size() == 1);
    CHECK(bdd.bags[0].is_leaf);
    auto rep = validate_bdd(bdd, g);
    CHECK(rep.all_pass);
}

TEST_CASE("8x8 grid BDD with threshold 8 passes every property") {
    PlanarGraph g = make_grid(8, 8);
    BddTree bdd = build(g, 0, 8);
    CHECK(bdd.bags.size() > 1);
    auto rep = validate_bdd(bdd, g);
    INFO(rep.summary());
    CHECK(rep.all_pass);
    CHECK(bdd.notes.merged_regions == 0);
    // per-depth multiplicity measured at most 2
    auto mult = rep.find("per-depth-edge-multiplicity<=2");
    REQUIRE(mult != nullptr);
    CHECK(mult->measured <= 2);
}

TEST_CASE("random triangulation BDDs validate across seeds") {
    for (std::uint64_t seed : {1ULL, 2ULL, 5ULL}) {
        PlanarGraph g = make_random_triangulation(120, seed);
        BddTree bdd = build(g, 0, 12);
        auto rep = validate_bdd(bdd, g);
        INFO("seed ", seed, "\n", rep.summary());
        CHECK(rep.all_pass);
    }
}

TEST_CASE("grids of several sizes validate") {
    for (int k : {5, 6, 10}) {
        PlanarGraph g = make_grid(k, k);
        BddTree bdd = build(g, 0, std::max(4, k / 2));
        auto rep = validate_bdd(bdd, g);
        INFO("k ", k, "\n", rep.summary());
        CHECK(rep.all_pass);
    }
}

TEST_CASE("weighted-mode BDD on the SSSP tree leaves few active vertices") {
    PlanarGraph g = make_grid(7, 7);
    randomize_weights(g, 9, 3);
    BddTree bdd = build(g, 0, 6, 1);
    auto rep = validate_bdd(bdd, g);
    INFO(rep.summary());
    CHECK(rep.all_pass);
    for (const Bag& b : bdd.bags)
        if (b.is_leaf) CHECK(static_cast<long long>(bdd.active_of(b.id).size()) <= 30);
}

TEST_CASE("global side classification covers the graph and respects the cycle") {
    PlanarGraph g = make_grid(8, 8);
    BddTree bdd = build(g, 0, 8);
    int checked = 0;
    for (const Bag& b : bdd.bags) {
        if (b.children.empty()) continue;
        auto side = global_sides(bdd, b.id);
        for (VertexId v = 0; v < g.n; ++v) CHECK(side[v] >= 0);
        for (VertexId v : b.cycle) CHECK(side[v] == 2);
        // edges never connect strict-inside to strict-outside
        for (EdgeId e = 0; e < g.m(); ++e) {
            auto a = side[g.edges[e].u], c = side[g.edges[e].v];
            if (a != 2 && c != 2) CHECK(a == c);
        }
        ++checked;
        if (checked > 6) break;
    }
    CHECK(checked > 0);
}

TEST_CASE("bag distances agree with a masked oracle on the root") {
    PlanarGraph g = make_random_triangulation(60, 4);
    BddTree bdd = build(g, 0, 10);
    auto d = bag_distances(bdd, 0, 0);
    auto sp = single_source_distances(g, 0);
    CHECK(d == sp.dist);
}

TEST_CASE("dump format lists every bag") {
    PlanarGraph g = make_grid(4, 4);
    BddTree bdd = build(g, 0, 5);
    std::string text = dump_bdd(bdd);
    std::size_t lines = std::count(text.begin(), text.end(), '\n');
    CHECK(lines == bdd.bags.size());
    CHECK(text.find("bag 0 parent=-1") == 0);
}
