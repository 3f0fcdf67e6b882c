#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "pmk/graph.hpp"

using namespace pmk;

namespace {

PlanarGraph k3() {
    PlanarGraph g;
    g.n = 3;
    g.rot.assign(3, {});
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(2, 0);
    return g;
}

// K5 with an arbitrary rotation; non-planar whatever the rotation.
PlanarGraph k5() {
    PlanarGraph g;
    g.n = 5;
    g.rot.assign(5, {});
    for (int u = 0; u < 5; ++u)
        for (int v = u + 1; v < 5; ++v) g.add_edge(u, v);
    return g;
}

} // namespace

TEST_CASE("triangle embedding is valid with two faces") {
    auto rep = validate_embedding(k3());
    CHECK(rep.ok);
    CHECK(rep.faces == 2);
}

TEST_CASE("K5 fails the Euler check") {
    auto rep = validate_embedding(k5());
    CHECK_FALSE(rep.ok);
    CHECK(rep.error_code == "NonPlanarRotation");
}

TEST_CASE("malformed rotation is reported") {
    PlanarGraph g = k3();
    g.rot[0].pop_back();
    auto rep = validate_embedding(g);
    CHECK_FALSE(rep.ok);
    CHECK(rep.error_code == "MalformedRotation");
}

TEST_CASE("3x3 grid has 5 faces") {
    PlanarGraph g = make_grid(3, 3);
    auto rep = validate_embedding(g);
    CHECK(rep.ok);
    CHECK(rep.faces == 5);
}

TEST_CASE("2x2 grid: 4 vertices, 4 edges, 2 faces") {
    PlanarGraph g = make_grid(2, 2);
    auto rep = validate_embedding(g);
    CHECK(rep.ok);
    CHECK(g.n == 4);
    CHECK(g.m() == 4);
    CHECK(rep.faces == 2);
}

TEST_CASE("cycle(5): 5 vertices, diameter 2") {
    PlanarGraph g = make_cycle(5);
    CHECK(g.n == 5);
    CHECK(DistOracle(g).diameter() == 2);
}

TEST_CASE("path distances from endpoint") {
    PlanarGraph g = make_path(4);
    auto sp = single_source_distances(g, 0);
    CHECK(sp.dist == std::vector<Dist>{0, 1, 2, 3});
    CHECK(sp.parent[3] == 2);
}

TEST_CASE("weighted triangle prefers the two-hop route") {
    PlanarGraph g;
    g.n = 3;
    g.rot.assign(3, {});
    g.weighted = true;
    g.add_edge(0, 1, 1);
    g.add_edge(1, 2, 1);
    g.add_edge(0, 2, 3);
    auto sp = single_source_distances(g, 0);
    CHECK(sp.dist == std::vector<Dist>{0, 1, 2});
    CHECK(sp.parent[2] == 1);
}

TEST_CASE("3x3 grid from center: all distances <= 2") {
    PlanarGraph g = make_grid(3, 3);
    auto sp = single_source_distances(g, 4);
    for (Dist d : sp.dist) CHECK(d <= 2);
}

TEST_CASE("random triangulations validate and stay planar") {
    for (std::uint64_t seed : {7ULL, 8ULL, 99ULL}) {
        PlanarGraph g = make_random_triangulation(50, seed);
        auto rep = validate_embedding(g);
        CHECK(rep.ok);
        // all faces are triangles: F = 2n - 4
        CHECK(rep.faces == 2 * g.n - 4);
        CHECK(g.connected());
    }
}

TEST_CASE("generated graphs are deterministic per seed") {
    PlanarGraph a = make_random_triangulation(40, 7);
    PlanarGraph b = make_random_triangulation(40, 7);
    CHECK(write_graph(a) == write_graph(b));
    PlanarGraph c = make_random_triangulation(40, 8);
    CHECK(write_graph(a) != write_graph(c));
}

TEST_CASE("oracle distances are symmetric and satisfy the triangle inequality") {
    for (std::uint64_t seed : {1ULL, 2ULL}) {
        PlanarGraph g = make_random_triangulation(24, seed);
        if (seed == 2) randomize_weights(g, 9, seed);
        DistOracle o(g);
        for (int u = 0; u < g.n; ++u)
            for (int v = 0; v < g.n; ++v) {
                CHECK(o.dist(u, v) == o.dist(v, u));
                for (int w = 0; w < g.n; ++w)
                    CHECK(o.dist(u, v) <= o.dist(u, w) + o.dist(w, v));
            }
    }
}

TEST_CASE("face-consecutive sources differ by at most 1 in any tuple entry") {
    PlanarGraph g = make_grid(4, 4);
    FaceSet fs = enumerate_faces(g);
    int of = outer_face(g, fs);
    FaceSources s = sources_on_face(g, fs, of, 5);
    check_face_sources(g, fs, s);
    DistOracle o(g);
    for (int v = 0; v < g.n; ++v)
        for (std::size_t i = 0; i + 1 < s.vertices.size(); ++i) {
            Dist a = o.dist(v, s.vertices[i]);
            Dist b = o.dist(v, s.vertices[i + 1]);
            CHECK(std::abs(a - b) <= 1);
        }
}

TEST_CASE("source check rejects non-face sequences") {
    PlanarGraph g = make_grid(3, 3);
    FaceSet fs = enumerate_faces(g);
    FaceSources bad;
    bad.face_id = outer_face(g, fs);
    bad.vertices = {0, 4}; // 4 is the center, never on the outer face
    CHECK_THROWS_AS(check_face_sources(g, fs, bad), Error);
}

TEST_CASE("graph file round-trip is bit-exact") {
    PlanarGraph g = make_random_triangulation(30, 3);
    randomize_weights(g, 16, 3);
    std::string t1 = write_graph(g);
    PlanarGraph h = read_graph(t1);
    CHECK(write_graph(h) == t1);
    CHECK(h.weighted);
    CHECK(h.n == g.n);
}

TEST_CASE("generate dispatches and rejects bad params") {
    GenParams p;
    p.kind = "grid";
    p.a = 2;
    p.b = 2;
    CHECK(generate(p).n == 4);
    p.kind = "nope";
    CHECK_THROWS_AS(generate(p), Error);
    p.kind = "cycle";
    p.a = 0;
    CHECK_THROWS_AS(generate(p), Error);
}

TEST_CASE("aspect ratio of an unweighted grid equals its diameter") {
    PlanarGraph g = make_grid(3, 4);
    CHECK(aspect_ratio(g) == doctest::Approx(5.0));
}
