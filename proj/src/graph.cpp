#include "pmk/graph.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

namespace pmk {

EdgeId PlanarGraph::add_edge(VertexId u, VertexId v, Dist w, bool virt) {
    require(u != v, "InvalidParams", "self-loops are not allowed");
    EdgeId id = m();
    edges.push_back(Edge{u, v, w, virt});
    if (static_cast<int>(rot.size()) < n) rot.resize(n);
    rot[u].push_back(id);
    rot[v].push_back(id);
    return id;
}

std::optional<EdgeId> PlanarGraph::find_edge(VertexId u, VertexId v) const {
    for (EdgeId e : rot[u])
        if (edges[e].other(u) == v) return e;
    return std::nullopt;
}

bool PlanarGraph::connected() const {
    if (n == 0) return true;
    std::vector<char> seen(n, 0);
    std::queue<VertexId> q;
    q.push(0);
    seen[0] = 1;
    int cnt = 1;
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop();
        for (EdgeId e : rot[v]) {
            VertexId w = edges[e].other(v);
            if (!seen[w]) {
                seen[w] = 1;
                ++cnt;
                q.push(w);
            }
        }
    }
    return cnt == n;
}

int face_next_dart(const PlanarGraph& g, int d) {
    VertexId h = g.head(d);
    EdgeId e = dart_edge(d);
    const auto& r = g.rot[h];
    // position of e in rot[h]; parallel edges share endpoints but not ids,
    // so id lookup is unambiguous
    int k = -1;
    for (int i = 0; i < static_cast<int>(r.size()); ++i)
        if (r[i] == e) {
            k = i;
            break;
        }
    EdgeId next = r[(k + 1) % r.size()];
    return g.dart_from(h, next);
}

FaceSet enumerate_faces(const PlanarGraph& g) {
    FaceSet fs;
    fs.face_of_dart.assign(2 * g.m(), -1);
    for (int d0 = 0; d0 < 2 * g.m(); ++d0) {
        if (fs.face_of_dart[d0] != -1) continue;
        int f = fs.count();
        fs.walks.emplace_back();
        int d = d0;
        do {
            fs.face_of_dart[d] = f;
            fs.walks[f].push_back(d);
            d = face_next_dart(g, d);
        } while (d != d0);
    }
    return fs;
}

std::vector<VertexId> FaceSet::boundary_vertices(const PlanarGraph& g, int f) const {
    std::vector<VertexId> out;
    out.reserve(walks[f].size());
    for (int d : walks[f]) out.push_back(g.tail(d));
    return out;
}

EmbeddingReport validate_embedding(const PlanarGraph& g) {
    EmbeddingReport rep;
    // Structural checks first: every edge appears exactly once in each
    // endpoint's rotation.
    std::vector<int> seen_u(g.m(), 0), seen_v(g.m(), 0);
    for (VertexId v = 0; v < g.n; ++v) {
        for (EdgeId e : g.rot[v]) {
            if (e < 0 || e >= g.m()) {
                rep.error_code = "MalformedRotation";
                rep.detail = "edge id out of range at vertex " + std::to_string(v);
                return rep;
            }
            const Edge& ed = g.edges[e];
            if (ed.u == v)
                ++seen_u[e];
            else if (ed.v == v)
                ++seen_v[e];
            else {
                rep.error_code = "MalformedRotation";
                rep.detail = "edge " + std::to_string(e) + " listed at non-endpoint " +
                             std::to_string(v);
                return rep;
            }
        }
    }
    for (EdgeId e = 0; e < g.m(); ++e) {
        if (seen_u[e] != 1 || seen_v[e] != 1) {
            rep.error_code = "MalformedRotation";
            rep.detail = "edge " + std::to_string(e) + " missing from an endpoint's cycle";
            return rep;
        }
        if (g.edges[e].u == g.edges[e].v) {
            rep.error_code = "MalformedRotation";
            rep.detail = "self-loop " + std::to_string(e);
            return rep;
        }
    }
    if (g.weighted) {
        for (EdgeId e = 0; e < g.m(); ++e)
            if (g.edges[e].w <= 0) {
                rep.error_code = "MalformedRotation";
                rep.detail = "nonpositive weight on edge " + std::to_string(e);
                return rep;
            }
    }

    // Component-wise Euler check: V - E + F = 2 on the sphere.
    std::vector<int> comp(g.n, -1);
    int ncomp = 0;
    for (VertexId s = 0; s < g.n; ++s) {
        if (comp[s] != -1) continue;
        int c = ncomp++;
        std::queue<VertexId> q;
        q.push(s);
        comp[s] = c;
        while (!q.empty()) {
            VertexId v = q.front();
            q.pop();
            for (EdgeId e : g.rot[v]) {
                VertexId w = g.edges[e].other(v);
                if (comp[w] == -1) {
                    comp[w] = c;
                    q.push(w);
                }
            }
        }
    }
    FaceSet fs = enumerate_faces(g);
    std::vector<long long> cv(ncomp, 0), ce(ncomp, 0), cf(ncomp, 0);
    for (VertexId v = 0; v < g.n; ++v) ++cv[comp[v]];
    for (const Edge& e : g.edges) ++ce[comp[e.u]];
    for (int f = 0; f < fs.count(); ++f) ++cf[comp[g.tail(fs.walks[f][0])]];
    for (int c = 0; c < ncomp; ++c) {
        // isolated vertices have no darts, hence no traced face; they are
        // trivially planar
        if (ce[c] == 0) continue;
        if (cv[c] - ce[c] + cf[c] != 2) {
            rep.error_code = "NonPlanarRotation";
            rep.detail = "Euler check failed: V=" + std::to_string(cv[c]) +
                         " E=" + std::to_string(ce[c]) + " F=" + std::to_string(cf[c]);
            rep.faces = fs.count();
            rep.components = ncomp;
            return rep;
        }
    }
    rep.ok = true;
    rep.faces = fs.count();
    rep.components = ncomp;
    rep.face_sizes.reserve(fs.count());
    for (const auto& w : fs.walks) rep.face_sizes.push_back(static_cast<int>(w.size()));
    return rep;
}

void require_valid_embedding(const PlanarGraph& g) {
    EmbeddingReport rep = validate_embedding(g);
    if (!rep.ok) fail(rep.error_code, rep.detail);
}

int outer_face(const PlanarGraph& g, const FaceSet& faces) {
    if (g.outer_face_hint >= 0 && g.outer_face_hint < faces.count()) return g.outer_face_hint;
    int best = 0;
    for (int f = 1; f < faces.count(); ++f)
        if (faces.walks[f].size() > faces.walks[best].size()) best = f;
    return best;
}

void check_face_sources(const PlanarGraph& g, const FaceSet& faces, const FaceSources& s) {
    require(!s.vertices.empty(), "SourcesNotOnFace", "empty source sequence");
    require(s.face_id >= 0 && s.face_id < faces.count(), "SourcesNotOnFace",
            "no such face " + std::to_string(s.face_id));
    std::vector<VertexId> walk = faces.boundary_vertices(g, s.face_id);
    // The sources must appear as a subsequence of the cyclic walk, starting
    // at the first occurrence of s.vertices[0]; consecutive sources must be
    // adjacent walk entries when s.consecutive.
    int L = static_cast<int>(walk.size());
    for (int start = 0; start < L; ++start) {
        if (walk[start] != s.vertices[0]) continue;
        int pos = start;
        bool ok = true, adj = true;
        for (std::size_t i = 1; i < s.vertices.size(); ++i) {
            int steps = 0;
            int p = pos;
            do {
                p = (p + 1) % L;
                ++steps;
            } while (walk[p] != s.vertices[i] && steps < L);
            if (walk[p] != s.vertices[i]) {
                ok = false;
                break;
            }
            if (steps != 1) adj = false;
            pos = p;
        }
        if (ok && (!s.consecutive || adj)) return;
        if (ok && s.consecutive && !adj)
            fail("SourcesNotOnFace", "sources on face but not boundary-consecutive");
    }
    fail("SourcesNotOnFace", "sources do not lie on face " + std::to_string(s.face_id) +
                                 " in walk order");
}

FaceSources sources_on_face(const PlanarGraph& g, const FaceSet& faces, int face_id, int k) {
    require(face_id >= 0 && face_id < faces.count(), "SourcesNotOnFace",
            "no such face " + std::to_string(face_id));
    FaceSources s;
    s.face_id = face_id;
    std::vector<VertexId> walk = faces.boundary_vertices(g, face_id);
    std::vector<char> used(g.n, 0);
    VertexId prev = -1;
    for (VertexId v : walk) {
        if (used[v]) break; // wrapped onto a repeated vertex: stop
        used[v] = 1;
        if (prev >= 0 && !g.find_edge(prev, v)) break;
        s.vertices.push_back(v);
        prev = v;
        if (static_cast<int>(s.vertices.size()) == k) break;
    }
    require(static_cast<int>(s.vertices.size()) == k, "SourcesNotOnFace",
            "face walk too short for k=" + std::to_string(k));
    return s;
}

ShortestPaths single_source_distances(const PlanarGraph& g, VertexId s,
                                      const std::vector<char>* mask) {
    require(s >= 0 && s < g.n, "InvalidParams", "source out of range");
    ShortestPaths sp;
    sp.dist.assign(g.n, INF_DIST);
    sp.parent.assign(g.n, -1);
    auto allowed = [&](VertexId v) { return !mask || (*mask)[v]; };
    if (!allowed(s)) return sp;
    sp.dist[s] = 0;
    if (!g.weighted) {
        std::queue<VertexId> q;
        q.push(s);
        while (!q.empty()) {
            VertexId v = q.front();
            q.pop();
            for (EdgeId e : g.rot[v]) {
                if (g.edges[e].virt) continue;
                VertexId w = g.edges[e].other(v);
                if (!allowed(w)) continue;
                if (sp.dist[w] == INF_DIST) {
                    sp.dist[w] = sp.dist[v] + 1;
                    q.push(w);
                }
            }
        }
    } else {
        using Item = std::pair<Dist, VertexId>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
        pq.push({0, s});
        while (!pq.empty()) {
            auto [d, v] = pq.top();
            pq.pop();
            if (d > sp.dist[v]) continue;
            for (EdgeId e : g.rot[v]) {
                if (g.edges[e].virt) continue;
                VertexId w = g.edges[e].other(v);
                if (!allowed(w)) continue;
                Dist nd = d + g.edges[e].w;
                if (nd < sp.dist[w]) {
                    sp.dist[w] = nd;
                    pq.push({nd, w});
                }
            }
        }
    }
    // Deterministic parents: smallest-id optimal predecessor.
    for (VertexId v = 0; v < g.n; ++v) {
        if (v == s || sp.dist[v] == INF_DIST) continue;
        VertexId best = -1;
        for (EdgeId e : g.rot[v]) {
            if (g.edges[e].virt) continue;
            VertexId w = g.edges[e].other(v);
            if (!allowed(w)) continue;
            Dist ew = g.weighted ? g.edges[e].w : 1;
            if (sp.dist[w] + ew == sp.dist[v] && (best == -1 || w < best)) best = w;
        }
        sp.parent[v] = best;
    }
    return sp;
}

const std::vector<Dist>& DistOracle::row(VertexId s) const {
    require(s >= 0 && s < g_->n, "InvalidParams", "oracle source out of range");
    if (rows_[s].empty()) rows_[s] = single_source_distances(*g_, s).dist;
    return rows_[s];
}

Dist DistOracle::eccentricity(VertexId s) const {
    Dist m = 0;
    for (Dist d : row(s))
        if (d != INF_DIST) m = std::max(m, d);
    return m;
}

Dist DistOracle::diameter() const {
    Dist m = 0;
    for (VertexId s = 0; s < g_->n; ++s) m = std::max(m, eccentricity(s));
    return m;
}

// ---- generators ----------------------------------------------------------

PlanarGraph make_path(int n) {
    require(n >= 1, "InvalidParams", "path needs n >= 1");
    PlanarGraph g;
    g.n = n;
    g.rot.resize(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

PlanarGraph make_cycle(int n) {
    require(n >= 3, "InvalidParams", "cycle needs n >= 3");
    PlanarGraph g;
    g.n = n;
    g.rot.resize(n);
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    return g;
}

PlanarGraph make_grid(int rows, int cols) {
    require(rows >= 1 && cols >= 1 && rows * cols >= 1, "InvalidParams", "bad grid dims");
    PlanarGraph g;
    g.n = rows * cols;
    g.rot.assign(g.n, {});
    auto id = [&](int r, int c) { return r * cols + c; };
    // Edge ids: horizontals row-major, then verticals row-major.
    std::vector<std::vector<EdgeId>> right(rows, std::vector<EdgeId>(cols, -1));
    std::vector<std::vector<EdgeId>> down(rows, std::vector<EdgeId>(cols, -1));
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c + 1 < cols; ++c) {
            g.edges.push_back(Edge{id(r, c), id(r, c + 1), 1, false});
            right[r][c] = g.m() - 1;
        }
    for (int r = 0; r + 1 < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            g.edges.push_back(Edge{id(r, c), id(r + 1, c), 1, false});
            down[r][c] = g.m() - 1;
        }
    // Clockwise rotation with rows growing downward: up, right, down, left.
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            auto& rv = g.rot[id(r, c)];
            if (r > 0) rv.push_back(down[r - 1][c]);
            if (c + 1 < cols) rv.push_back(right[r][c]);
            if (r + 1 < rows) rv.push_back(down[r][c]);
            if (c > 0) rv.push_back(right[r][c - 1]);
        }
    return g;
}

PlanarGraph make_random_triangulation(int n, std::uint64_t seed, int boundary) {
    require(boundary >= 3, "InvalidParams", "boundary needs >= 3 vertices");
    require(n >= boundary, "InvalidParams", "n smaller than the boundary");
    struct Tri {
        VertexId a, b, c;
    };
    PlanarGraph g;
    g.n = n;
    g.rot.assign(n, {});
    std::vector<Tri> tris;
    if (boundary == 3) {
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        g.add_edge(2, 0);
        // both sides of the starting triangle are insertable faces
        tris = {{0, 1, 2}, {0, 2, 1}};
    } else {
        for (int i = 0; i < boundary; ++i) g.add_edge(i, (i + 1) % boundary);
        // fan-triangulate the interior from vertex 0; the outer b-gon face
        // stays untouched so sources can live on it
        EdgeId prev_at_anchor = 0; // edge (0,1)
        for (int i = 2; i <= boundary - 2; ++i) {
            EdgeId into = i - 1; // edge (i-1, i)
            EdgeId c = g.m();
            g.edges.push_back(Edge{0, i, 1, false});
            auto& r0 = g.rot[0];
            r0.insert(std::find(r0.begin(), r0.end(), prev_at_anchor), c);
            auto& ri = g.rot[i];
            ri.insert(std::find(ri.begin(), ri.end(), into) + 1, c);
            prev_at_anchor = c;
        }
        for (int i = 1; i <= boundary - 2; ++i) tris.push_back({0, i, i + 1});
    }
    if (n == boundary) return g;
    Rng rng(seed);
    // insert_before[v][e] semantics are easier expressed with explicit
    // position search; degrees stay small in expectation.
    auto insert_after = [&](VertexId v, EdgeId anchor, EdgeId fresh) {
        auto& rv = g.rot[v];
        for (std::size_t i = 0; i < rv.size(); ++i)
            if (rv[i] == anchor) {
                rv.insert(rv.begin() + i + 1, fresh);
                return;
            }
        fail("InvalidParams", "anchor edge missing during triangulation build");
    };
    for (VertexId x = boundary; x < n; ++x) {
        std::size_t t = static_cast<std::size_t>(uniform_u64(rng, tris.size()));
        Tri f = tris[t];
        tris.erase(tris.begin() + t);
        EdgeId eab = *g.find_edge(f.a, f.b);
        EdgeId ebc = *g.find_edge(f.b, f.c);
        EdgeId eca = *g.find_edge(f.c, f.a);
        // New edges to the three corners; rotation of x is (a, b, c).
        EdgeId exa = g.m();
        g.edges.push_back(Edge{x, f.a, 1, false});
        EdgeId exb = g.m();
        g.edges.push_back(Edge{x, f.b, 1, false});
        EdgeId exc = g.m();
        g.edges.push_back(Edge{x, f.c, 1, false});
        g.rot[x] = {exa, exc, exb};
        // At each corner the new edge sits inside the face corner: after the
        // edge leading into the corner along the face walk a->b->c->a.
        insert_after(f.a, eca, exa);
        insert_after(f.b, eab, exb);
        insert_after(f.c, ebc, exc);
        tris.push_back({f.a, f.b, x});
        tris.push_back({f.b, f.c, x});
        tris.push_back({f.c, f.a, x});
    }
    return g;
}

void randomize_weights(PlanarGraph& g, Dist wmax, std::uint64_t seed) {
    require(wmax >= 1, "InvalidParams", "wmax must be >= 1");
    Rng rng(seed);
    g.weighted = true;
    for (Edge& e : g.edges) e.w = 1 + static_cast<Dist>(uniform_u64(rng, wmax));
}

PlanarGraph generate(const GenParams& p) {
    PlanarGraph g;
    if (p.kind == "grid")
        g = make_grid(p.a, p.b > 0 ? p.b : p.a);
    else if (p.kind == "path")
        g = make_path(p.a);
    else if (p.kind == "cycle")
        g = make_cycle(p.a);
    else if (p.kind == "random-triangulation")
        g = make_random_triangulation(p.a, p.seed, p.b >= 3 ? p.b : 3);
    else
        fail("InvalidParams", "unknown generator kind '" + p.kind + "'");
    if (p.wmax > 0) randomize_weights(g, p.wmax, p.seed + 0x9e3779b97f4a7c15ULL);
    return g;
}

// ---- io -------------------------------------------------------------------

std::string write_graph(const PlanarGraph& g) {
    std::ostringstream os;
    os << "planar v=" << g.n << " e=" << g.m() << " weighted=" << (g.weighted ? 1 : 0)
       << "\n";
    for (VertexId v = 0; v < g.n; ++v) {
        os << "rot " << v << ":";
        for (EdgeId e : g.rot[v]) os << ' ' << e;
        os << "\n";
    }
    for (EdgeId e = 0; e < g.m(); ++e)
        os << "edge " << e << ": " << g.edges[e].u << ' ' << g.edges[e].v << ' '
           << g.edges[e].w << "\n";
    return os.str();
}

PlanarGraph read_graph(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    PlanarGraph g;
    int m = -1;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok == "planar") {
            std::string a, b, c;
            ls >> a >> b >> c;
            auto val = [](const std::string& kv) {
                auto p = kv.find('=');
                require(p != std::string::npos, "IoError", "bad header field " + kv);
                return std::stoll(kv.substr(p + 1));
            };
            g.n = static_cast<int>(val(a));
            m = static_cast<int>(val(b));
            g.weighted = val(c) != 0;
            g.rot.assign(g.n, {});
            g.edges.assign(m, Edge{});
            header = true;
        } else if (tok == "rot") {
            require(header, "IoError", "rot before header");
            std::string vs;
            ls >> vs;
            if (!vs.empty() && vs.back() == ':') vs.pop_back();
            int v = std::stoi(vs);
            require(v >= 0 && v < g.n, "IoError", "rot vertex out of range");
            std::string colon;
            if (ls.peek() == ':') ls >> colon;
            long long e;
            while (ls >> e) g.rot[v].push_back(static_cast<EdgeId>(e));
        } else if (tok == "edge") {
            require(header, "IoError", "edge before header");
            std::string ids;
            ls >> ids;
            if (!ids.empty() && ids.back() == ':') ids.pop_back();
            int id = std::stoi(ids);
            require(id >= 0 && id < m, "IoError", "edge id out of range");
            long long u, v, w;
            ls >> u >> v >> w;
            g.edges[id] = Edge{static_cast<VertexId>(u), static_cast<VertexId>(v),
                               static_cast<Dist>(w), false};
        } else {
            fail("IoError", "unknown record '" + tok + "'");
        }
    }
    require(header, "IoError", "missing header line");
    return g;
}

PlanarGraph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), "IoError", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return read_graph(ss.str());
}

void save_graph_file(const PlanarGraph& g, const std::string& path) {
    std::ofstream out(path);
    require(static_cast<bool>(out), "IoError", "cannot write " + path);
    out << write_graph(g);
}

double aspect_ratio(const PlanarGraph& g) {
    if (g.n <= 1) return 1.0;
    if (g.n <= 512) {
        DistOracle oracle(g);
        Dist dmax = 0, dmin = INF_DIST;
        for (VertexId s = 0; s < g.n; ++s)
            for (VertexId t = s + 1; t < g.n; ++t) {
                Dist d = oracle.dist(s, t);
                if (d == INF_DIST) continue;
                dmax = std::max(dmax, d);
                dmin = std::min(dmin, d);
            }
        if (dmin == INF_DIST || dmin == 0) return 1.0;
        return static_cast<double>(dmax) / static_cast<double>(dmin);
    }
    return static_cast<double>(max_distance_bound(g));
}

Dist max_distance_bound(const PlanarGraph& g) {
    if (g.n <= 1) return 0;
    if (g.n <= 512) return DistOracle(g).diameter();
    // 2-approx: double the eccentricity of vertex 0, capped by hop bound.
    ShortestPaths sp = single_source_distances(g, 0);
    Dist ecc = 0;
    for (Dist d : sp.dist)
        if (d != INF_DIST) ecc = std::max(ecc, d);
    return 2 * ecc;
}

} // namespace pmk
