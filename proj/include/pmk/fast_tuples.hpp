#pragma once

// Near-linear tuple machinery: Rabin-Karp hashes of distance tuples kept in a
// shadow dynamic forest alongside a multi-source shortest-path operation
// stream, and the projection + shifted-grid clustering for the weighted case.

#include <cstdint>
#include <functional>
#include <vector>

#include "pmk/compression.hpp"
#include "pmk/coreset.hpp"
#include "pmk/euler_forest.hpp"
#include "pmk/graph.hpp"

namespace pmk {

struct HashParams {
    std::uint64_t p = 0; // prime, about n^4
    std::uint64_t b = 0; // base, uniform in [0, p)
    int num_sources = 0;
};

std::uint64_t smallest_prime_above(std::uint64_t x);
HashParams make_hash_params(int n, int num_sources, std::uint64_t seed);

// sum_i d_i * b^i mod p (1-based exponents).
std::uint64_t tuple_hash(const DistanceTuple& d, const HashParams& hp);

// Shadow increment for AddSubtree under source j: delta * sum_{i=j..l} b^i.
std::uint64_t mirror_delta(Dist delta, int j, const HashParams& hp);

// Operation stream transforming the source-s_1 tree into each successor
// source's tree; replaying it keeps the forest value of v equal to d(s_j, v)
// after each source finishes.
struct OpStream {
    enum class Kind : std::uint8_t { SourceAdvance, Cut, Join, AddSubtree };
    struct Op {
        Kind kind;
        int vertex = -1; // Cut/Join/AddSubtree target
        int parent = -1; // Join only
        Dist delta = 0;  // AddSubtree only
    };
    int n = 0;
    int num_sources = 0;
    std::vector<VertexId> roots;      // initial tree: parent array of source 1
    std::vector<VertexId> init_parent;
    std::vector<Dist> init_value;
    std::vector<Op> ops;

    std::string dump() const; // "opstream v1" text form
    static OpStream parse(const std::string& text);
};

// Reference driver: consecutive-source shortest-path trees diffed into
// Cut/AddSubtree/Join batches. Correct for any instance; the operation count
// is reported, not bounded.
OpStream reference_op_stream(const PlanarGraph& g, const FaceSources& s);

struct HashedMsspResult {
    std::vector<std::uint64_t> hashes; // per vertex
    long long op_count = 0;
};

struct ReplayOptions {
    bool spot_check = false; // verify forest values against the oracle at
                             // every source boundary (DriverViolation)
};

HashedMsspResult run_hashed_mssp(const PlanarGraph& g, const FaceSources& s,
                                 const HashParams& hp, const OpStream& stream,
                                 const ReplayOptions& opt = {});

// Replays the primal forest once more and reads off the tuples of the given
// representatives (one GetValue per representative per source).
std::vector<DistanceTuple> materialize_tuples(const OpStream& stream,
                                              const std::vector<VertexId>& reps);

// Groups vertices by hash, materializes one representative (plus one checker
// member) per group and assembles the table. Throws HashCollisionDetected on
// a verified collision.
TupleTable select_and_materialize(const std::vector<std::uint64_t>& hashes,
                                  const PlanarGraph& g, const FaceSources& s,
                                  const OpStream& stream);

// Retry wrapper: fresh base per attempt until the table verifies.
TupleTable fast_compress(const PlanarGraph& g, const FaceSources& s, std::uint64_t seed,
                         int max_attempts = 8);

struct ProjectionSpec {
    int dim = 0;                           // r
    std::vector<std::vector<double>> cols; // cols[i] = Phi(e_i), r entries
    double cell = 0;                       // Z
    std::vector<double> shift;             // z, r entries
};

ProjectionSpec make_projection(int n, int num_sources, const Rat& delta,
                               std::uint64_t seed);

// Fast weighted core-set: projected tuples maintained in shadow forests,
// bucketed on a randomly shifted grid; retries with fresh randomness until
// the witness check passes (RetriesExhausted after ~3 log n attempts).
CoreSet weighted_fast_coreset(const PlanarGraph& g, const FaceSources& s, const Rat& delta,
                              std::uint64_t seed);

} // namespace pmk
