#pragma once

// Balanced fundamental-cycle separators on a supplied spanning tree, the
// block-cut tree, and planar biconnectivity augmentation via virtual edges.

#include <vector>

#include "pmk/graph.hpp"

namespace pmk {

struct SeparatorOptions {
    double eps_bal = 0.0;
    // 0: minimize the heavier strict side; 1: minimize the heavier side
    // including the cycle itself (used by the decomposition builder).
    int objective = 0;
};

struct CycleSeparator {
    // The graph the cycle lives in: the input plus any triangulation chords
    // added in the critical-face fallback (chords are flagged virt).
    PlanarGraph work;
    std::vector<EdgeId> tree_path_edges;
    EdgeId closing_edge = -1; // id in `work`
    bool closing_virtual = false;
    std::vector<VertexId> cycle_vertices; // in cycle order
    std::vector<char> on_cycle;
    std::vector<char> inside, outside; // strict sides
    long long weight_inside = 0, weight_outside = 0, weight_cycle = 0;
    double balance = 0.0; // heavier strict side / total weight
};

// Requires a biconnected input; callers augment first otherwise. `tree_edges`
// must form a spanning tree of g.
CycleSeparator cycle_separator(const PlanarGraph& g, const std::vector<EdgeId>& tree_edges,
                               const std::vector<long long>& node_weights,
                               const SeparatorOptions& opt = {});

struct BlockCutTree {
    std::vector<std::vector<VertexId>> blocks;
    std::vector<std::vector<EdgeId>> block_edges;
    std::vector<char> is_cut;
    std::vector<int> vertex_level; // cut vertices: own level; others: block level
    std::vector<int> edge_level;
    std::vector<int> block_level;
    VertexId root_cut = -1; // -1 when the graph is a single block

    int cut_count() const {
        int c = 0;
        for (char b : is_cut) c += b;
        return c;
    }
};

BlockCutTree block_cut_tree(const PlanarGraph& g);

inline bool is_biconnected(const PlanarGraph& g) {
    if (g.n <= 2) return true;
    return block_cut_tree(g).cut_count() == 0;
}

struct Augmentation {
    PlanarGraph graph; // input plus virtual A/B edges
    std::vector<EdgeId> a_edges, b_edges;
    // sim_path[e] is a real-edge path in the input between the endpoints of
    // virtual edge e (empty for real edges); length at most 4.
    std::vector<std::vector<VertexId>> sim_path;
};

Augmentation biconnect_augment(const PlanarGraph& g);

// Spanning tree edge ids of the BFS tree rooted at `root` (smaller-id parent
// tie-break, virtual edges skipped).
std::vector<EdgeId> bfs_tree_edges(const PlanarGraph& g, VertexId root);
// Same for the shortest-path tree of a weighted graph.
std::vector<EdgeId> sssp_tree_edges(const PlanarGraph& g, VertexId root);

} // namespace pmk
