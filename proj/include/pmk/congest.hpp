#pragma once

// Distributed programs on the simulator: recursive distance labels over the
// decomposition, exact unweighted diameter, weighted labels and SSSP, and
// the (1+eps) weighted diameter with portals and core-set aggregation.

#include <cstdint>
#include <optional>
#include <vector>

#include "pmk/bdd.hpp"
#include "pmk/rational.hpp"
#include "pmk/sim.hpp"

namespace pmk {

struct SubLabel {
    int bag_id = -1;
    std::vector<std::pair<VertexId, Dist>> sep_dist; // sorted by vertex
};

struct DistanceLabel {
    VertexId owner = -1;
    std::vector<SubLabel> sublabels; // root chain downward
    int leaf_bag = -1;
    std::vector<std::pair<VertexId, Dist>> leaf_row; // sorted by vertex

    long long bits(int n, Dist max_dist) const;
};

// Exact distance from the common-chain candidates of the two labels.
Dist decode_labels(const DistanceLabel& a, const DistanceLabel& b);

struct LabelResult {
    std::vector<DistanceLabel> labels;
    long long max_label_bits = 0;
};

LabelResult unweighted_labels(SimNetwork& net, const BddTree& bdd);
LabelResult weighted_labels(SimNetwork& net, const BddTree& bdd);

struct DiameterRunResult {
    Dist value = 0;
    int restarts = 0;
};

DiameterRunResult unweighted_diameter(SimNetwork& net, const BddTree& bdd,
                                      const LabelResult& labels, std::uint64_t seed);

struct SsspResult {
    std::vector<Dist> dist;
    std::vector<VertexId> parent;
    long long broadcast_rounds = 0;
    long long total_rounds = 0;
};

SsspResult sssp(SimNetwork& net, const LabelResult& labels, VertexId source);

struct PortalSet {
    std::vector<VertexId> portals;           // with segment endpoints included
    std::vector<std::vector<VertexId>> segments; // monotone base-tree chains
    Rat spacing;                              // eps' * D~
};

// Portals on the separator of a weighted-mode bag: the cycle decomposes into
// monotone shortest-path chains; portals sit at distance-class switches.
PortalSet mark_portals(const BddTree& bdd, int bag, const Rat& spacing);

struct ApproxDiameterResult {
    Rat estimate;
    Dist two_approx = 0; // D~ from the SSSP step
    int restarts = 0;
};

ApproxDiameterResult approx_weighted_diameter(SimNetwork& net, const PlanarGraph& g,
                                              const Rat& eps, std::uint64_t seed);

struct ShortcutResult {
    std::vector<std::vector<EdgeId>> subgraphs; // H_i edge sets
    long long max_dilation = 0;
    long long max_congestion = 0;
};

// Steiner-tree shortcuts over the global BFS tree; rounds charged to the
// cited construction.
ShortcutResult shortcut_oracle(SimNetwork& net,
                               const std::vector<std::vector<VertexId>>& parts);

struct SplitGraph {
    PlanarGraph graph;
    std::vector<VertexId> orig_of;            // per split vertex
    std::vector<std::vector<VertexId>> copies_of; // per original vertex
    std::vector<int> bag_of;                  // owning bag per split vertex (-1 shared)
    std::vector<std::vector<VertexId>> parts; // vertex-disjoint bag images
};

// Duplicates vertices shared between the bags of one decomposition level so
// the bag images become vertex-disjoint; edges shared by two bags appear as
// parallel copies.
SplitGraph split_graph(const PlanarGraph& g, const BddTree& bdd, int depth);

} // namespace pmk
