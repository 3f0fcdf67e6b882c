#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pmk/diameter.hpp"

using namespace pmk;

TEST_CASE("exact diameter on paths and grids") {
    CHECK(exact_diameter(make_path(5)) == 4);
    CHECK(exact_diameter(make_grid(4, 4)) == 6);
    CHECK(exact_diameter(make_cycle(9)) == 4);
}

TEST_CASE("exact diameter equals brute force on triangulations") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        PlanarGraph g = make_random_triangulation(90 + 10 * (seed % 4), seed);
        DiameterStats st;
        Dist got = exact_diameter(g, &st);
        CHECK(got == DistOracle(g).diameter());
        double cap = std::ceil(std::log(static_cast<double>(g.n)) / std::log(1.5));
        CHECK(st.depth <= static_cast<int>(cap));
    }
}

TEST_CASE("exact diameter on larger instances") {
    PlanarGraph g = make_random_triangulation(400, 3);
    DiameterStats st;
    CHECK(exact_diameter(g, &st) == DistOracle(g).diameter());
    CHECK(st.frames >= 1);
}

TEST_CASE("approx diameter trivial cases") {
    PlanarGraph one;
    one.n = 2;
    one.rot.assign(2, {});
    one.weighted = true;
    one.add_edge(0, 1, 7);
    for (Rat eps : {Rat(1), Rat(1, 4)}) CHECK(approx_diameter(one, eps, 1) == Rat(7));

    PlanarGraph c6 = make_cycle(6);
    c6.weighted = true;
    for (EdgeId e = 0; e < c6.m(); ++e) c6.edges[e].w = 2;
    Rat est = approx_diameter(c6, Rat(1, 2), 5);
    CHECK(est >= Rat(6));
    CHECK(est <= Rat(9));
}

TEST_CASE("approx diameter sandwiches the oracle on weighted grids") {
    for (bool randomized : {false, true}) {
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            PlanarGraph g = make_grid(6 + (seed % 3), 6);
            randomize_weights(g, 10, seed + 17);
            Dist truth = DistOracle(g).diameter();
            for (Rat eps : {Rat(1), Rat(1, 4)}) {
                Rat est = approx_diameter(g, eps, seed, randomized);
                CHECK(est >= Rat(truth));
                CHECK(est <= (Rat(1) + eps) * Rat(truth));
            }
        }
    }
}

TEST_CASE("cross-separator values never undershoot the true split maximum") {
    // separation soundness: on a modest instance the recursion value matches
    // brute force even when every level actually splits
    PlanarGraph g = make_random_triangulation(128, 9);
    DiameterStats st;
    Dist got = exact_diameter(g, &st);
    CHECK(got == DistOracle(g).diameter());
    CHECK(st.max_coreset > 0);
}
