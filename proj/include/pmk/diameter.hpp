#pragma once

// Centralized divide-and-conquer diameter: exact unweighted via tuple
// equivalence classes, and (1+eps) weighted via portals and additive
// core-sets. Recursion frames keep a boundary clique carrying exact global
// distances, so frame distances equal distances in the whole graph.

#include <cstdint>

#include "pmk/graph.hpp"
#include "pmk/rational.hpp"

namespace pmk {

struct DiameterStats {
    int depth = 0;
    long long frames = 0;
    long long brute_frames = 0;
    long long max_coreset = 0;
    long long max_cross_set = 0;
};

Dist exact_diameter(const PlanarGraph& g, DiameterStats* stats = nullptr);

// Deterministic bucket core-sets by default; the randomized flag switches to
// the projection + shifted-grid construction.
Rat approx_diameter(const PlanarGraph& g, const Rat& eps, std::uint64_t seed,
                    bool randomized = false, DiameterStats* stats = nullptr);

} // namespace pmk
