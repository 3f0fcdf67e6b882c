#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pmk/compression.hpp"

using namespace pmk;

namespace {

FaceSources outer_sources(const PlanarGraph& g, int k) {
    FaceSet fs = enumerate_faces(g);
    return sources_on_face(g, fs, outer_face(g, fs), k);
}

std::vector<VertexId> all_vertices(const PlanarGraph& g) {
    std::vector<VertexId> v(g.n);
    for (int i = 0; i < g.n; ++i) v[i] = i;
    return v;
}

} // namespace

TEST_CASE("tuples on P3 and C4 match the oracle") {
    PlanarGraph p3 = make_path(3);
    FaceSources s;
    s.face_id = 0;
    s.vertices = {0, 1};
    auto tup = compute_tuples(p3, s);
    CHECK(tup[2] == DistanceTuple{2, 1});
    CHECK(tup[0] == DistanceTuple{0, 1});

    PlanarGraph c4 = make_cycle(4);
    FaceSources s2;
    FaceSet fs = enumerate_faces(c4);
    s2.face_id = fs.face_of_dart[dart_fwd(0)];
    s2.vertices = {0, 1};
    auto tup2 = compute_tuples(c4, s2);
    CHECK(tup2[3] == DistanceTuple{1, 2});
}

TEST_CASE("membership family of P3 matches the worked example") {
    PlanarGraph p3 = make_path(3);
    FaceSources s;
    s.face_id = 0;
    s.vertices = {0, 1};
    auto fam = membership_family(p3, s);
    // F(0) = {(1,-1),(1,0)}; F(1) = F(2) = empty
    auto m0 = fam.per_vertex[0].members(fam.domain);
    CHECK(m0 == std::vector<std::pair<int, int>>{{1, 0}, {1, 1}});
    CHECK(fam.per_vertex[1].members(fam.domain).empty());
    CHECK(fam.per_vertex[2].members(fam.domain).empty());
    CHECK(fam.distinct.size() == 2);
}

TEST_CASE("single-source family is a lone empty set") {
    PlanarGraph g = make_cycle(5);
    FaceSet fs = enumerate_faces(g);
    FaceSources s = sources_on_face(g, fs, 0, 1);
    auto fam = membership_family(g, s);
    CHECK(fam.distinct.size() == 1);
    CHECK(fam.distinct[0].first_delta.empty());
}

TEST_CASE("reconstruction worked examples") {
    // not in A_1^0: distance grows by 1 toward s_2
    MembershipSet none;
    none.first_delta = {2};
    CHECK(reconstruct_tuple(1, 2, none, 2) == DistanceTuple{2, 1});
    // in A_1^{-1}: the next distance is one larger
    MembershipSet both;
    both.first_delta = {0};
    CHECK(reconstruct_tuple(1, 0, both, 2) == DistanceTuple{0, 1});
    // single source
    MembershipSet empty;
    CHECK(reconstruct_tuple(1, 7, empty, 1) == DistanceTuple{7});
}

TEST_CASE("reconstruction surjection holds exhaustively") {
    for (std::uint64_t seed : {3ULL, 4ULL, 5ULL}) {
        PlanarGraph g = make_random_triangulation(60, seed);
        FaceSources s = outer_sources(g, 3);
        auto tuples = compute_tuples(g, s);
        auto fam = membership_family_from_tuples(tuples, DeltaDomain::unweighted());
        int l = static_cast<int>(s.vertices.size());
        for (VertexId v = 0; v < g.n; ++v)
            for (int r = 1; r <= l; ++r) {
                auto rec = reconstruct_tuple(r, tuples[v][r - 1], fam.per_vertex[v], l);
                CHECK(rec == tuples[v]);
            }
    }
    // and on grids with more sources
    PlanarGraph g = make_grid(6, 6);
    FaceSources s = outer_sources(g, 8);
    auto tuples = compute_tuples(g, s);
    auto fam = membership_family_from_tuples(tuples, DeltaDomain::unweighted());
    for (VertexId v = 0; v < g.n; ++v)
        for (int r = 1; r <= 8; ++r)
            CHECK(reconstruct_tuple(r, tuples[v][r - 1], fam.per_vertex[v], 8) == tuples[v]);
}

TEST_CASE("encode/decode round-trips exactly against the oracle") {
    PlanarGraph g = make_path(3);
    FaceSources s;
    s.face_id = 0;
    s.vertices = {0, 1};
    TupleTable tab = encode(g, s, all_vertices(g));
    CHECK(tab.table.size() == 3);
    CHECK(tab.decode(0, 2) == 2);

    for (std::uint64_t seed : {1ULL, 9ULL}) {
        PlanarGraph t = make_random_triangulation(48, seed);
        FaceSources src = outer_sources(t, 3);
        TupleTable tt = encode(t, src, all_vertices(t));
        DistOracle oracle(t);
        for (std::size_t i = 0; i < src.vertices.size(); ++i)
            for (VertexId v = 0; v < t.n; ++v)
                CHECK(tt.decode(static_cast<int>(i), v) == oracle.dist(src.vertices[i], v));
    }
}

TEST_CASE("star-like instances share rows") {
    // grid boundary sources, targets = interior: heavy tuple duplication
    PlanarGraph g = make_grid(2, 8);
    FaceSources s = outer_sources(g, 2);
    TupleTable tab = encode(g, s, all_vertices(g));
    CHECK(tab.table.size() < static_cast<std::size_t>(g.n));
    CHECK_THROWS_WITH_AS(tab.decode(0, g.n + 5), doctest::Contains("UnknownTarget"), Error);
}

TEST_CASE("table bit size stays within the tuple-count budget") {
    for (std::uint64_t seed : {2ULL, 6ULL}) {
        PlanarGraph g = make_random_triangulation(120, seed, 8);
        FaceSources s = outer_sources(g, 5);
        TupleTable tab = encode(g, s, all_vertices(g));
        DistOracle oracle(g);
        Dist D = oracle.diameter();
        long long l = static_cast<long long>(s.vertices.size());
        CHECK(static_cast<long long>(tab.table.size()) <= 4 * l * l * l * (D + 1));
        // log n index bits per target
        CHECK(tab.index_bits() <=
              static_cast<long long>(g.n) * (ceil_log2(tab.table.size()) + 1));
    }
}

TEST_CASE("serialization round-trips bit-exactly") {
    PlanarGraph g = make_grid(5, 5);
    FaceSources s = outer_sources(g, 6);
    TupleTable tab = encode(g, s, all_vertices(g));
    auto bytes = tab.serialize();
    TupleTable back = TupleTable::deserialize(bytes);
    CHECK(back.table == tab.table);
    CHECK(back.index_of == tab.index_of);
    CHECK(back.targets == tab.targets);
    CHECK(back.serialize() == bytes);
}

TEST_CASE("vc dimension of toy families") {
    // all subsets of a 2-element universe: dimension 2
    std::vector<std::uint64_t> all = {0b00, 0b01, 0b10, 0b11};
    CHECK(vc_dimension(all, 2, 4) == 2);
    // P3 family: one empty set and one pair: dimension 1
    PlanarGraph p3 = make_path(3);
    FaceSources s;
    s.face_id = 0;
    s.vertices = {0, 1};
    auto fam = membership_family(p3, s);
    int usz = 0;
    auto masks = family_masks(fam, 2, &usz);
    CHECK(usz == 4);
    CHECK(vc_dimension(masks, usz, 4) == 1);
}

TEST_CASE("no 4-shattered subset on face-consecutive instances") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        PlanarGraph g = make_random_triangulation(80, seed);
        FaceSources s = outer_sources(g, 3);
        auto fam = membership_family(g, s);
        int usz = 0;
        auto masks = family_masks(fam, static_cast<int>(s.vertices.size()), &usz);
        CHECK(vc_dimension(masks, usz, 4) <= 3);
    }
    PlanarGraph g = make_grid(7, 7);
    for (int k : {6, 10, 12}) {
        FaceSources s = outer_sources(g, k);
        auto fam = membership_family(g, s);
        int usz = 0;
        auto masks = family_masks(fam, k, &usz);
        CHECK(vc_dimension(masks, usz, 4) <= 3);
    }
}

TEST_CASE("distinct tuple count obeys the family times distance-bound budget") {
    for (std::uint64_t seed : {4ULL, 5ULL}) {
        PlanarGraph g = make_random_triangulation(100, seed, 6);
        FaceSources s = outer_sources(g, 4);
        auto tuples = compute_tuples(g, s);
        auto fam = membership_family_from_tuples(tuples, DeltaDomain::unweighted());
        auto tab = build_table(tuples, all_vertices(g), 4, 0);
        DistOracle oracle(g);
        long long D = oracle.diameter();
        CHECK(static_cast<long long>(tab.table.size()) <=
              (D + 1) * static_cast<long long>(fam.distinct.size()));
    }
}

TEST_CASE("inconsistent membership is rejected") {
    MembershipSet bad;
    bad.first_delta = {5}; // not a {-1,0} code
    CHECK_THROWS_WITH_AS(reconstruct_tuple(1, 1, bad, 2),
                         doctest::Contains("InconsistentMembership"), Error);
}
