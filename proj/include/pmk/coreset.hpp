#pragma once

// Weighted additive core-sets, the delta-grid membership family, low-diameter
// decomposition, and the LDD reduction from multiplicative to additive error.

#include <cstdint>
#include <optional>
#include <vector>

#include "pmk/compression.hpp"
#include "pmk/graph.hpp"
#include "pmk/rational.hpp"

namespace pmk {

struct GridSpec {
    int num_sources = 0;   // l
    Rat source_gap;        // d
    Rat refined_error;     // delta'
    std::vector<Rat> values; // symmetric multiples of delta'/l, 0 included
};

GridSpec grid(int num_sources, const Rat& source_gap, const Rat& refined_error);

struct CoreSet {
    std::vector<VertexId> members;
    std::vector<int> witness; // vertex -> index into members
    Rat delta;
    // bucket key (family class, k) per member; (-1, cell) on the fast path
    std::vector<std::pair<int, long long>> bucket_of;
    // stats for size reports
    long long family_size = 0;
    long long bucket_count = 0; // before pruning
};

// Bucket construction over precomputed tuples: family classes over the grid
// domain crossed with floor(d(v,s_1)/delta') buckets, one representative per
// non-empty bucket, then a greedy prune that keeps only members some vertex
// is matched to. `vertex_ids` maps tuple rows to graph vertices.
CoreSet additive_coreset_from_tuples(const std::vector<DistanceTuple>& tuples,
                                     const std::vector<VertexId>& vertex_ids,
                                     const Rat& source_gap, const Rat& delta);

// Face-source wrapper; the gap d is the measured maximum consecutive source
// distance (checked against max_gap when given: SourceGapExceeded).
CoreSet additive_coreset(const PlanarGraph& g, const FaceSources& s, const Rat& delta,
                         std::optional<Rat> max_gap = std::nullopt);

struct LddPartition {
    std::vector<int> component; // vertex -> component id, compacted
    int num_components = 0;
    double beta = 0;
    std::uint64_t seed = 0;
};

// Exponentially shifted Dijkstra race; components are connected by
// construction and any two vertices are separated with probability at most
// beta times their distance.
LddPartition ldd(const PlanarGraph& g, double beta, std::uint64_t seed);

// One additive compression of a single LDD component.
struct ComponentCompression {
    std::vector<VertexId> vertices;
    std::vector<VertexId> sources;        // global ids, order defines columns
    std::vector<DistanceTuple> member_tuples; // distances inside the component
    std::vector<int> witness_local;       // per component vertex
    Rat inflation;                        // delta_i = eps' * component diameter
};

struct MultiCompression {
    Rat eps;
    Rat eps_refined;
    std::uint64_t seed = 0;
    int levels = 0, reps = 0;
    std::vector<ComponentCompression> parts;
    // lookup: per vertex, the (part, local index) pairs that contain it
    std::vector<std::vector<std::pair<int, int>>> parts_of_vertex;
    long long total_bits_estimate = 0;
};

MultiCompression multiplicative_compress(const PlanarGraph& g, const FaceSources& s,
                                         const Rat& eps, std::uint64_t seed);

// Smallest inflated estimate over co-clustered parts; INF_DIST marker when
// the pair was never co-clustered (caller may retry with a fresh seed).
Rat multiplicative_decode(const MultiCompression& mc, VertexId source, VertexId target);

} // namespace pmk
