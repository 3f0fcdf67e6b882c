#pragma once

// Exact unweighted metric compression for sources on a common face:
// distance tuples, the membership family, tuple reconstruction, the
// deduplicated table codec, and a brute-force VC dimension probe.

#include <cstdint>
#include <map>
#include <vector>

#include "pmk/graph.hpp"
#include "pmk/rational.hpp"

namespace pmk {

using DistanceTuple = std::vector<Dist>;

// Delta domain for the membership sets; unweighted compression uses {-1, 0},
// the weighted core-set machinery passes a grid of rationals.
struct DeltaDomain {
    std::vector<Rat> values; // sorted ascending

    static DeltaDomain unweighted() { return DeltaDomain{{Rat(-1), Rat(0)}}; }
    int size() const { return static_cast<int>(values.size()); }
};

// Membership of v in the sets A_i^delta, i in [1, l-1] (1-based): v is a
// member of (i, delta) iff d(v,s_i) <= d(v,s_{i+1}) + delta. Memberships are
// monotone in delta, so per index we only store the first delta that holds.
struct MembershipSet {
    // first_delta[i-1] = smallest index into the domain whose delta holds,
    // or domain.size() when none does.
    std::vector<int> first_delta;

    bool contains(int i, int delta_index) const {
        return delta_index >= first_delta[i - 1];
    }
    bool operator==(const MembershipSet& o) const = default;
    bool operator<(const MembershipSet& o) const { return first_delta < o.first_delta; }

    // Explicit (i, delta_index) pairs, for universes and shattering probes.
    std::vector<std::pair<int, int>> members(const DeltaDomain& dom) const;
};

struct MembershipFamily {
    DeltaDomain domain;
    std::vector<MembershipSet> per_vertex;
    std::vector<MembershipSet> distinct; // sorted, deduplicated
    std::vector<int> class_of;           // vertex -> index into distinct
};

std::vector<DistanceTuple> compute_tuples(const PlanarGraph& g, const FaceSources& s);

MembershipFamily membership_family(const PlanarGraph& g, const FaceSources& s,
                                   const DeltaDomain& dom = DeltaDomain::unweighted());

// Builds the family from precomputed tuples (avoids redundant BFS runs).
MembershipFamily membership_family_from_tuples(const std::vector<DistanceTuple>& tuples,
                                               const DeltaDomain& dom);

// Rebuilds the full tuple from one anchor distance plus the membership set;
// unweighted consecutive-source semantics (adjacent entries differ by at
// most 1). Throws InconsistentMembership if monotonicity is violated.
DistanceTuple reconstruct_tuple(int anchor, Dist anchor_dist, const MembershipSet& m,
                                int num_sources);

struct TupleTable {
    int num_sources = 0;
    Dist dist_bound = 0; // measured eccentricity bound used for size reports
    std::vector<DistanceTuple> table; // lexicographically sorted, distinct
    std::vector<VertexId> targets;
    std::vector<int> index_of; // parallel to targets

    Dist decode(int source_index, VertexId t) const; // exact distance
    long long table_bits() const;
    long long index_bits() const;
    long long total_bits() const { return table_bits() + index_bits(); }

    // Bit-exact binary layout: header, delta-coded rows, index array.
    std::vector<std::uint8_t> serialize() const;
    static TupleTable deserialize(const std::vector<std::uint8_t>& bytes);

private:
    mutable std::vector<int> target_pos_; // lazy vertex -> targets position
};

TupleTable encode(const PlanarGraph& g, const FaceSources& s,
                  const std::vector<VertexId>& targets);
// Table assembly from precomputed per-vertex tuples.
TupleTable build_table(const std::vector<DistanceTuple>& tuples,
                       const std::vector<VertexId>& targets, int num_sources,
                       Dist dist_bound);

// Largest shattered subset size, probed by exhaustive enumeration up to
// subsets of size cap+1; returns cap+1 when such a set shatters.
int vc_dimension(const std::vector<std::uint64_t>& family, int universe_size, int cap);

// Family of the membership sets as bitmasks over [1,l] x domain (the pairs
// with i = l are never members; they pad the universe to the stated size).
std::vector<std::uint64_t> family_masks(const MembershipFamily& fam, int num_sources,
                                        int* universe_size);

} // namespace pmk
