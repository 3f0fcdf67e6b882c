#pragma once

// Bounded-diameter decomposition: a recursive bag tree over a BFS or
// shortest-path base tree, split by balanced cycle separators, with
// combinatorial region certificates instead of topological maps.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pmk/graph.hpp"
#include "pmk/separator.hpp"

namespace pmk {

struct Bag {
    int id = -1;
    int parent = -1;
    int depth = 0;
    int side = -1; // side of the parent cycle: 0 inside, 1 outside, -1 root
    bool is_leaf = false;

    std::vector<VertexId> verts; // sorted
    std::vector<EdgeId> edges;   // sorted global edge ids (region edges)
    // exterior corner flags, aligned with the bag-local rotation (the global
    // rotation filtered to bag edges); corner k sits after local_rot[v][k]
    std::map<VertexId, std::vector<char>> ext;
    // darts (2*edge+side, global ids) whose face lies outside the bag region
    std::vector<int> ext_darts;

    // split certificate (non-leaf bags)
    std::vector<VertexId> cycle;             // separator vertices in cycle order
    std::vector<EdgeId> cycle_tree_edges;    // global ids of the tree-path edges
    std::pair<VertexId, VertexId> closing{-1, -1};
    bool closing_virtual = false;
    std::vector<int> children;
    std::vector<std::int8_t> side_of; // per graph vertex: 0 in, 1 out, 2 cycle, -1 absent
    int t_prime_extra = 0;            // spanning-tree edges beyond T[X]
    int tx_components = 0;            // components of T[X]
};

struct BuildOptions {
    long long leaf_threshold = -1; // default: D * ceil(log2 n)
    int mode = 0;                  // 0: unweighted-bfs, 1: weighted-sssp
    double eps_bal = 0.0;
    int depth_cap = 64;
};

struct BuildNotes {
    int merged_regions = 0;    // pathological pinch merges
    int orphan_edges = 0;      // edges attached by adjacency fallback
    int forced_leaves = 0;     // splits aborted because a child did not shrink
    long long splits = 0;
};

struct BddTree {
    const PlanarGraph* g = nullptr;
    int mode = 0;
    VertexId root_vertex = 0;
    std::vector<EdgeId> base_tree;
    std::vector<char> in_base_tree; // per edge id
    long long leaf_threshold = 0;
    std::vector<Bag> bags;
    std::vector<std::vector<int>> by_depth;
    int max_depth = 0;
    BuildNotes notes;

    // vertices of the bag that are in no ancestor separator
    std::vector<VertexId> active_of(int bag) const;
    // union of ancestor separators restricted to the bag
    std::vector<char> marked_mask(int bag) const;
};

// `base_tree` must span g (edge ids); mode 1 assigns weight zero to vertices
// already captured by ancestor separators and stops on active counts.
BddTree build_bdd(const PlanarGraph& g, const std::vector<EdgeId>& base_tree,
                  VertexId root_vertex, const BuildOptions& opt = {});

struct PropertyCheck {
    std::string name;
    bool pass = false;
    double measured = 0; // the constant or count the check is about
    std::string note;
};

struct PropertyReport {
    std::vector<PropertyCheck> checks;
    bool all_pass = true;

    const PropertyCheck* find(const std::string& name) const;
    std::string summary() const;
};

PropertyReport validate_bdd(const BddTree& bdd, const PlanarGraph& g);

// Classification of every graph vertex against a bag's separator cycle:
// 0 inside, 1 outside, 2 on the cycle. Vertices beyond the bag are resolved
// through embedding corners at the cycle and component propagation.
std::vector<std::int8_t> global_sides(const BddTree& bdd, int bag);

// Exact distances from `src` within the bag's edge set.
std::vector<Dist> bag_distances(const BddTree& bdd, int bag, VertexId src);

// One line per bag: "bag <id> parent=<p> sep=<...> verts=<...>".
std::string dump_bdd(const BddTree& bdd);

} // namespace pmk
