#include "pmk/diameter.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "pmk/coreset.hpp"
#include "pmk/fast_tuples.hpp"
#include "pmk/separator.hpp"

namespace pmk {

namespace {

// A recursion frame: an induced planar piece plus a clique over its boundary
// carrying exact distances in the full graph. Frame distances therefore agree
// with the full graph everywhere inside.
struct Frame {
    std::vector<VertexId> verts;             // sorted global ids
    std::vector<VertexId> boundary;           // sorted, subset of verts
    std::vector<std::vector<Dist>> boundary_d; // exact pairwise distances
};

struct FrameCtx {
    const PlanarGraph* g;
    bool weighted;
    DiameterStats* stats;
};

// Dijkstra from src over the induced edges plus the boundary clique.
std::vector<Dist> frame_distances(const FrameCtx& ctx, const Frame& f, VertexId src) {
    const PlanarGraph& g = *ctx.g;
    std::map<VertexId, int> loc;
    for (std::size_t i = 0; i < f.verts.size(); ++i) loc[f.verts[i]] = static_cast<int>(i);
    int n = static_cast<int>(f.verts.size());
    std::vector<int> bpos(n, -1);
    for (std::size_t i = 0; i < f.boundary.size(); ++i)
        bpos[loc.at(f.boundary[i])] = static_cast<int>(i);
    std::vector<Dist> dist(n, INF_DIST);
    using It = std::pair<Dist, int>;
    std::priority_queue<It, std::vector<It>, std::greater<It>> pq;
    dist[loc.at(src)] = 0;
    pq.push({0, loc.at(src)});
    while (!pq.empty()) {
        auto [d, x] = pq.top();
        pq.pop();
        if (d > dist[x]) continue;
        VertexId vx = f.verts[x];
        for (EdgeId e : g.rot[vx]) {
            if (g.edges[e].virt) continue;
            auto it = loc.find(g.edges[e].other(vx));
            if (it == loc.end()) continue;
            Dist w = ctx.weighted ? g.edges[e].w : 1;
            if (d + w < dist[it->second]) {
                dist[it->second] = d + w;
                pq.push({dist[it->second], it->second});
            }
        }
        if (bpos[x] != -1) {
            for (std::size_t j = 0; j < f.boundary.size(); ++j) {
                Dist w = f.boundary_d[bpos[x]][j];
                if (w == INF_DIST) continue;
                int y = loc.at(f.boundary[j]);
                if (d + w < dist[y]) {
                    dist[y] = d + w;
                    pq.push({dist[y], y});
                }
            }
        }
    }
    return dist;
}

Dist brute_force(const FrameCtx& ctx, const Frame& f) {
    Dist best = 0;
    for (VertexId v : f.verts) {
        auto d = frame_distances(ctx, f, v);
        for (Dist x : d)
            if (x != INF_DIST) best = std::max(best, x);
    }
    return best;
}

// Induced planar subgraph of the frame with local ids and inherited rotation.
struct LocalPiece {
    PlanarGraph l;
    std::vector<VertexId> to_global;
    std::map<VertexId, int> to_local;
    std::vector<EdgeId> to_global_e;
    bool connected = false;
};

LocalPiece induced_piece(const PlanarGraph& g, const std::vector<VertexId>& verts) {
    LocalPiece p;
    p.to_global = verts;
    for (std::size_t i = 0; i < verts.size(); ++i) p.to_local[verts[i]] = static_cast<int>(i);
    p.l.n = static_cast<int>(verts.size());
    p.l.rot.assign(p.l.n, {});
    p.l.weighted = g.weighted;
    std::vector<int> emap(g.m(), -1);
    for (VertexId v : verts)
        for (EdgeId e : g.rot[v]) {
            if (g.edges[e].virt) continue;
            VertexId w = g.edges[e].other(v);
            if (!p.to_local.count(w) || emap[e] != -1) continue;
            emap[e] = p.l.m();
            p.l.edges.push_back(
                Edge{p.to_local.at(g.edges[e].u), p.to_local.at(g.edges[e].v), g.edges[e].w,
                     false});
            p.to_global_e.push_back(e);
        }
    for (VertexId v : verts)
        for (EdgeId e : g.rot[v])
            if (emap[e] != -1) p.l.rot[p.to_local.at(v)].push_back(emap[e]);
    p.connected = p.l.n > 0 && p.l.connected();
    return p;
}

struct SplitOutcome {
    std::vector<VertexId> cycle; // global ids, in cycle order
    std::vector<VertexId> inside, outside;
    bool ok = false;
};

SplitOutcome split_frame(const LocalPiece& p) {
    SplitOutcome out;
    if (p.l.n < 6 || !p.connected || p.l.m() == 0) return out;
    PlanarGraph work = p.l;
    if (!is_biconnected(work)) work = biconnect_augment(p.l).graph;
    std::vector<EdgeId> tree;
    try {
        tree = bfs_tree_edges(work, 0);
    } catch (const Error&) {
        return out;
    }
    SeparatorOptions sopt;
    sopt.objective = 1;
    CycleSeparator sep;
    try {
        sep = cycle_separator(work, tree, std::vector<long long>(work.n, 1), sopt);
    } catch (const Error&) {
        return out;
    }
    for (VertexId lv : sep.cycle_vertices) out.cycle.push_back(p.to_global[lv]);
    for (int lv = 0; lv < p.l.n; ++lv) {
        if (sep.on_cycle[lv]) continue;
        (sep.inside[lv] ? out.inside : out.outside).push_back(p.to_global[lv]);
    }
    // recursion keeps the two-thirds shrink; otherwise the caller brute-forces
    std::size_t cap = (2 * p.to_global.size()) / 3;
    out.ok = out.inside.size() + out.cycle.size() <= cap &&
             out.outside.size() + out.cycle.size() <= cap;
    return out;
}

Frame make_child(const FrameCtx& ctx, const Frame& parent, std::vector<VertexId> side,
                 const std::vector<VertexId>& cycle) {
    Frame child;
    side.insert(side.end(), cycle.begin(), cycle.end());
    std::sort(side.begin(), side.end());
    side.erase(std::unique(side.begin(), side.end()), side.end());
    child.verts = std::move(side);
    // boundary: the cycle, plus inherited boundary vertices that remain
    std::set<VertexId> b(cycle.begin(), cycle.end());
    for (VertexId v : parent.boundary)
        if (std::binary_search(child.verts.begin(), child.verts.end(), v)) b.insert(v);
    child.boundary.assign(b.begin(), b.end());
    child.boundary_d.assign(child.boundary.size(),
                            std::vector<Dist>(child.boundary.size(), INF_DIST));
    std::map<VertexId, int> ploc;
    for (std::size_t i = 0; i < parent.verts.size(); ++i) ploc[parent.verts[i]] = i;
    for (std::size_t i = 0; i < child.boundary.size(); ++i) {
        auto row = frame_distances(ctx, parent, child.boundary[i]);
        for (std::size_t j = 0; j < child.boundary.size(); ++j)
            child.boundary_d[i][j] = row[ploc.at(child.boundary[j])];
    }
    return child;
}

// exact unweighted recursion ----------------------------------------------------

Dist exact_value(const FrameCtx& ctx, const Frame& f, int depth);

Dist exact_cross(const FrameCtx& ctx, const Frame& f, const SplitOutcome& sp) {
    // crossing set: cycle plus the frame boundary (paths may exit through it)
    std::vector<VertexId> hubs = sp.cycle;
    hubs.insert(hubs.end(), f.boundary.begin(), f.boundary.end());
    std::sort(hubs.begin(), hubs.end());
    hubs.erase(std::unique(hubs.begin(), hubs.end()), hubs.end());
    if (ctx.stats)
        ctx.stats->max_cross_set =
            std::max(ctx.stats->max_cross_set, static_cast<long long>(hubs.size()));
    std::map<VertexId, int> loc;
    for (std::size_t i = 0; i < f.verts.size(); ++i) loc[f.verts[i]] = i;
    std::vector<std::vector<Dist>> hub_rows;
    for (VertexId h : hubs) hub_rows.push_back(frame_distances(ctx, f, h));
    auto tuple_of = [&](VertexId v) {
        std::vector<Dist> t(hubs.size());
        for (std::size_t i = 0; i < hubs.size(); ++i) t[i] = hub_rows[i][loc.at(v)];
        return t;
    };
    // one representative per distinct tuple on each side
    auto side_reps = [&](const std::vector<VertexId>& side) {
        std::set<std::vector<Dist>> reps;
        for (VertexId v : side) reps.insert(tuple_of(v));
        if (ctx.stats)
            ctx.stats->max_coreset =
                std::max(ctx.stats->max_coreset, static_cast<long long>(reps.size()));
        return std::vector<std::vector<Dist>>(reps.begin(), reps.end());
    };
    auto in_reps = side_reps(sp.inside);
    auto out_reps = side_reps(sp.outside);
    Dist best = 0;
    for (const auto& a : in_reps)
        for (const auto& b : out_reps) {
            Dist v = INF_DIST;
            for (std::size_t i = 0; i < a.size(); ++i)
                if (a[i] != INF_DIST && b[i] != INF_DIST) v = std::min(v, a[i] + b[i]);
            if (v != INF_DIST) best = std::max(best, v);
        }
    // pairs with one endpoint on the crossing set itself
    for (const auto& rows : {in_reps, out_reps})
        for (const auto& a : rows)
            for (Dist d : a)
                if (d != INF_DIST) best = std::max(best, d);
    for (const auto& row : hub_rows)
        for (std::size_t j = 0; j < hubs.size(); ++j)
            if (row[loc.at(hubs[j])] != INF_DIST)
                best = std::max(best, row[loc.at(hubs[j])]);
    return best;
}

Dist exact_value(const FrameCtx& ctx, const Frame& f, int depth) {
    if (ctx.stats) {
        ++ctx.stats->frames;
        ctx.stats->depth = std::max(ctx.stats->depth, depth);
    }
    if (f.verts.size() <= 24) {
        if (ctx.stats) ++ctx.stats->brute_frames;
        return brute_force(ctx, f);
    }
    LocalPiece p = induced_piece(*ctx.g, f.verts);
    SplitOutcome sp = split_frame(p);
    if (!sp.ok) {
        if (ctx.stats) ++ctx.stats->brute_frames;
        return brute_force(ctx, f);
    }
    Dist best = exact_cross(ctx, f, sp);
    Frame inside = make_child(ctx, f, sp.inside, sp.cycle);
    Frame outside = make_child(ctx, f, sp.outside, sp.cycle);
    best = std::max(best, exact_value(ctx, inside, depth + 1));
    best = std::max(best, exact_value(ctx, outside, depth + 1));
    return best;
}

// approximate weighted recursion -------------------------------------------------

struct ApproxCtx {
    FrameCtx base;
    Rat eps;
    std::uint64_t seed;
    bool randomized = false;
};

// Portals along the separator cycle: walk it, placing a portal whenever the
// accumulated edge weight passes the spacing (endpoints always kept).
std::vector<VertexId> cycle_portals(const PlanarGraph& g, const std::vector<VertexId>& cycle,
                                    const Rat& spacing) {
    std::vector<VertexId> out;
    Rat acc = spacing; // forces the first vertex in
    int L = static_cast<int>(cycle.size());
    for (int i = 0; i < L; ++i) {
        if (acc >= spacing) {
            out.push_back(cycle[i]);
            acc = Rat(0);
        }
        auto e = g.find_edge(cycle[i], cycle[(i + 1) % L]);
        acc += Rat(e ? g.edges[*e].w : 1);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Rat approx_value(const ApproxCtx& ctx, const Frame& f, int depth) {
    if (ctx.base.stats) {
        ++ctx.base.stats->frames;
        ctx.base.stats->depth = std::max(ctx.base.stats->depth, depth);
    }
    if (f.verts.size() <= 24) {
        if (ctx.base.stats) ++ctx.base.stats->brute_frames;
        return Rat(brute_force(ctx.base, f));
    }
    LocalPiece p = induced_piece(*ctx.base.g, f.verts);
    SplitOutcome sp = split_frame(p);
    if (!sp.ok) {
        if (ctx.base.stats) ++ctx.base.stats->brute_frames;
        return Rat(brute_force(ctx.base, f));
    }
    // frame-local two-approximation from one shortest-path run
    Dist ecc = 0;
    {
        auto row = frame_distances(ctx.base, f, f.verts.front());
        for (Dist d : row)
            if (d != INF_DIST) ecc = std::max(ecc, d);
    }
    if (ecc == 0) return Rat(0);
    Rat dtil(ecc);
    Rat delta = ctx.eps * dtil / Rat(3);
    int logn = std::max(1, ceil_log2(std::max(2, ctx.base.g->n)));
    Rat spacing = ctx.eps * dtil / Rat(8LL * logn);

    std::vector<VertexId> hubs = cycle_portals(*ctx.base.g, sp.cycle, spacing);
    hubs.insert(hubs.end(), f.boundary.begin(), f.boundary.end());
    std::sort(hubs.begin(), hubs.end());
    hubs.erase(std::unique(hubs.begin(), hubs.end()), hubs.end());
    if (ctx.base.stats)
        ctx.base.stats->max_cross_set =
            std::max(ctx.base.stats->max_cross_set, static_cast<long long>(hubs.size()));

    std::map<VertexId, int> loc;
    for (std::size_t i = 0; i < f.verts.size(); ++i) loc[f.verts[i]] = i;
    std::vector<std::vector<Dist>> hub_rows;
    for (VertexId h : hubs) hub_rows.push_back(frame_distances(ctx.base, f, h));
    auto tuple_of = [&](VertexId v) {
        std::vector<Dist> t(hubs.size());
        for (std::size_t i = 0; i < hubs.size(); ++i) t[i] = hub_rows[i][loc.at(v)];
        return t;
    };

    // delta-additive core-set per side
    auto side_reps = [&](const std::vector<VertexId>& side) {
        std::vector<std::vector<Dist>> reps;
        if (side.empty()) return reps;
        std::vector<DistanceTuple> tuples;
        tuples.reserve(side.size());
        for (VertexId v : side) tuples.push_back(tuple_of(v));
        if (!ctx.randomized) {
            CoreSet cs = additive_coreset_from_tuples(tuples, side, Rat(2) * dtil, delta);
            for (VertexId m : cs.members) {
                auto it = std::lower_bound(side.begin(), side.end(), m);
                reps.push_back(tuples[it - side.begin()]);
            }
        } else {
            ProjectionSpec proj = make_projection(ctx.base.g->n,
                                                  static_cast<int>(hubs.size()), delta,
                                                  ctx.seed + depth * 977);
            std::map<std::uint64_t, std::size_t> cells;
            for (std::size_t i = 0; i < tuples.size(); ++i) {
                std::uint64_t h = 1469598103934665603ULL;
                for (int r = 0; r < proj.dim; ++r) {
                    double x = 0;
                    for (std::size_t k = 0; k < tuples[i].size(); ++k)
                        x += static_cast<double>(tuples[i][k]) * proj.cols[k][r];
                    long long cell =
                        static_cast<long long>(std::floor((x + proj.shift[r]) / proj.cell));
                    h = (h ^ static_cast<std::uint64_t>(cell)) * 1099511628211ULL;
                }
                cells.emplace(h, i);
            }
            for (auto& [h, i] : cells) reps.push_back(tuples[i]);
        }
        if (ctx.base.stats)
            ctx.base.stats->max_coreset =
                std::max(ctx.base.stats->max_coreset, static_cast<long long>(reps.size()));
        return reps;
    };
    auto in_reps = side_reps(sp.inside);
    auto out_reps = side_reps(sp.outside);
    Rat cross(0);
    auto eval = [&](const std::vector<Dist>& a, const std::vector<Dist>& b) {
        Dist v = INF_DIST;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] != INF_DIST && b[i] != INF_DIST) v = std::min(v, a[i] + b[i]);
        return v;
    };
    for (const auto& a : in_reps)
        for (const auto& b : out_reps) {
            Dist v = eval(a, b);
            if (v != INF_DIST) cross = std::max(cross, Rat(v) + Rat(2) * delta);
        }
    // hub-involved pairs are exact; no inflation needed
    for (const auto& rows : {in_reps, out_reps})
        for (const auto& a : rows)
            for (Dist d : a)
                if (d != INF_DIST) cross = std::max(cross, Rat(d) + Rat(2) * delta);
    for (const auto& row : hub_rows)
        for (std::size_t j = 0; j < hubs.size(); ++j)
            if (row[loc.at(hubs[j])] != INF_DIST)
                cross = std::max(cross, Rat(row[loc.at(hubs[j])]));

    Frame inside = make_child(ctx.base, f, sp.inside, sp.cycle);
    Frame outside = make_child(ctx.base, f, sp.outside, sp.cycle);
    cross = std::max(cross, approx_value(ctx, inside, depth + 1));
    cross = std::max(cross, approx_value(ctx, outside, depth + 1));
    return cross;
}

Frame root_frame(const PlanarGraph& g) {
    Frame f;
    f.verts.resize(g.n);
    for (int v = 0; v < g.n; ++v) f.verts[v] = v;
    return f;
}

} // namespace

Dist exact_diameter(const PlanarGraph& g, DiameterStats* stats) {
    require(g.connected(), "InvalidParams", "diameter of a disconnected graph");
    if (g.n == 1) return 0;
    FrameCtx ctx{&g, false, stats};
    return exact_value(ctx, root_frame(g), 0);
}

Rat approx_diameter(const PlanarGraph& g, const Rat& eps, std::uint64_t seed,
                    bool randomized, DiameterStats* stats) {
    require(g.connected(), "InvalidParams", "diameter of a disconnected graph");
    require(eps > Rat(0) && eps <= Rat(1), "InvalidParams", "eps must be in (0,1]");
    if (g.n == 1) return Rat(0);
    ApproxCtx ctx{FrameCtx{&g, g.weighted, stats}, eps, seed, randomized};
    return approx_value(ctx, root_frame(g), 0);
}

} // namespace pmk
