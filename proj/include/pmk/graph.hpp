#pragma once

// Planar graph with a rotation system (combinatorial embedding), face
// enumeration, embedding validation, exact distance oracles and generators.

#include <optional>
#include <string>
#include <vector>

#include "pmk/core.hpp"

namespace pmk {

struct Edge {
    VertexId u = -1;
    VertexId v = -1;
    Dist w = 1;
    bool virt = false; // virtual edges come from biconnectivity augmentation / separators

    VertexId other(VertexId x) const { return x == u ? v : u; }
};

// Darts are directed edge slots: dart 2e points u->v, dart 2e+1 points v->u.
inline int dart_fwd(EdgeId e) { return 2 * e; }
inline int dart_rev(EdgeId e) { return 2 * e + 1; }
inline EdgeId dart_edge(int d) { return d >> 1; }
inline int dart_flip(int d) { return d ^ 1; }

struct PlanarGraph {
    int n = 0;
    bool weighted = false;
    std::vector<Edge> edges;
    // rot[v] lists incident edge ids in clockwise order around v.
    std::vector<std::vector<EdgeId>> rot;
    // Preferred outer face; -1 means "pick the longest boundary walk".
    int outer_face_hint = -1;

    int m() const { return static_cast<int>(edges.size()); }

    VertexId tail(int dart) const {
        const Edge& e = edges[dart_edge(dart)];
        return (dart & 1) ? e.v : e.u;
    }
    VertexId head(int dart) const {
        const Edge& e = edges[dart_edge(dart)];
        return (dart & 1) ? e.u : e.v;
    }

    EdgeId add_edge(VertexId u, VertexId v, Dist w = 1, bool virt = false);

    int degree(VertexId v) const { return static_cast<int>(rot[v].size()); }

    // Edge ids incident to v in rotation order, as darts leaving v.
    int dart_from(VertexId v, EdgeId e) const {
        return edges[e].u == v ? dart_fwd(e) : dart_rev(e);
    }

    std::optional<EdgeId> find_edge(VertexId u, VertexId v) const;

    bool connected() const;
};

// A face is a closed walk of darts; face_of_dart maps every dart to its face.
struct FaceSet {
    std::vector<std::vector<int>> walks; // darts in walk order
    std::vector<int> face_of_dart;
    std::vector<std::vector<int>> rot_pos; // rot_pos[v][k] = position of rot[v][k], scratch

    int count() const { return static_cast<int>(walks.size()); }
    // Vertices along the boundary walk (tails of the darts).
    std::vector<VertexId> boundary_vertices(const PlanarGraph& g, int f) const;
};

// Successor dart in the face walk: arriving at h via d, leave along the
// rotation successor of the reversed dart.
int face_next_dart(const PlanarGraph& g, int d);

FaceSet enumerate_faces(const PlanarGraph& g);

struct EmbeddingReport {
    bool ok = false;
    std::string error_code;   // empty when ok
    std::string detail;
    int faces = 0;
    int components = 0;
    std::vector<int> face_sizes;
};

EmbeddingReport validate_embedding(const PlanarGraph& g);

// Throwing wrapper used by code paths that assume a valid input.
void require_valid_embedding(const PlanarGraph& g);

// Face id with the longest boundary walk (smallest id on ties), or the hint.
int outer_face(const PlanarGraph& g, const FaceSet& faces);

// Sources for compression: an ordered run of vertices on one face boundary.
struct FaceSources {
    int face_id = -1;
    std::vector<VertexId> vertices;
    bool consecutive = true; // adjacent pairs are boundary-walk neighbours
};

// Checks that `vertices` appear on the boundary walk of face_id in walk
// order; throws SourcesNotOnFace otherwise.
void check_face_sources(const PlanarGraph& g, const FaceSet& faces, const FaceSources& s);

// Picks the first k distinct vertices along the face boundary walk.
FaceSources sources_on_face(const PlanarGraph& g, const FaceSet& faces, int face_id, int k);

struct ShortestPaths {
    std::vector<Dist> dist;
    std::vector<VertexId> parent; // -1 at the source / unreachable
};

// BFS when unweighted, Dijkstra otherwise; parents tie-break to the smaller
// vertex id. Virtual edges are ignored. `mask` (optional) restricts the
// search to vertices with mask[v] != 0.
ShortestPaths single_source_distances(const PlanarGraph& g, VertexId s,
                                      const std::vector<char>* mask = nullptr);

// Cached per-source rows, computed lazily.
class DistOracle {
public:
    explicit DistOracle(const PlanarGraph& g) : g_(&g), rows_(g.n) {}

    const std::vector<Dist>& row(VertexId s) const;
    Dist dist(VertexId s, VertexId t) const { return row(s)[t]; }
    Dist eccentricity(VertexId s) const;
    Dist diameter() const; // exact, all sources
    const PlanarGraph& graph() const { return *g_; }

private:
    const PlanarGraph* g_;
    mutable std::vector<std::vector<Dist>> rows_;
};

// ---- generators ----------------------------------------------------------

PlanarGraph make_path(int n);
PlanarGraph make_cycle(int n);
PlanarGraph make_grid(int rows, int cols);
// Stacked triangulation: starts from a `boundary`-gon whose interior is
// fan-triangulated, then repeatedly inserts a vertex into a random interior
// face. The outer face keeps all `boundary` vertices.
PlanarGraph make_random_triangulation(int n, std::uint64_t seed, int boundary = 3);

// Assigns random integer weights in [1, wmax] and marks the graph weighted.
void randomize_weights(PlanarGraph& g, Dist wmax, std::uint64_t seed);

struct GenParams {
    std::string kind; // grid | random-triangulation | path | cycle
    int a = 0, b = 0; // grid rows/cols, or n
    std::uint64_t seed = 0;
    Dist wmax = 0; // 0length = unweighted
};

PlanarGraph generate(const GenParams& p);

// ---- file format ----------------------------------------------------------
//
//   planar v=<n> e=<m> weighted=<0|1>
//   rot <v>: <edge ids...>
//   edge <id>: <u> <v> <w>

std::string write_graph(const PlanarGraph& g);
PlanarGraph read_graph(const std::string& text);
PlanarGraph load_graph_file(const std::string& path);
void save_graph_file(const PlanarGraph& g, const std::string& path);

// Max pairwise distance over min pairwise distance; exact all-pairs for
// n <= 512, otherwise estimated from the weight range and a BFS bound.
double aspect_ratio(const PlanarGraph& g);

// Max pairwise distance (weighted diameter); exact for n <= 512, else an
// upper estimate D * wmax from the unweighted radius.
Dist max_distance_bound(const PlanarGraph& g);

} // namespace pmk
