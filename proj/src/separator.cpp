#include "pmk/separator.hpp"

#include <algorithm>
#include <queue>

namespace pmk {

namespace {

struct TreeView {
    std::vector<VertexId> parent;
    std::vector<EdgeId> parent_edge;
    std::vector<int> depth;
    std::vector<char> in_tree; // per edge id
};

TreeView build_tree_view(const PlanarGraph& g, const std::vector<EdgeId>& tree_edges) {
    TreeView t;
    t.parent.assign(g.n, -1);
    t.parent_edge.assign(g.n, -1);
    t.depth.assign(g.n, -1);
    t.in_tree.assign(g.m(), 0);
    std::vector<std::vector<std::pair<VertexId, EdgeId>>> adj(g.n);
    require(static_cast<int>(tree_edges.size()) == g.n - 1, "TreeNotSpanning",
            "expected n-1 tree edges");
    for (EdgeId e : tree_edges) {
        require(e >= 0 && e < g.m(), "TreeNotSpanning", "tree edge id out of range");
        t.in_tree[e] = 1;
        adj[g.edges[e].u].push_back({g.edges[e].v, e});
        adj[g.edges[e].v].push_back({g.edges[e].u, e});
    }
    std::queue<VertexId> q;
    q.push(0);
    t.depth[0] = 0;
    int seen = 1;
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop();
        for (auto [w, e] : adj[v])
            if (t.depth[w] == -1) {
                t.depth[w] = t.depth[v] + 1;
                t.parent[w] = v;
                t.parent_edge[w] = e;
                ++seen;
                q.push(w);
            }
    }
    require(seen == g.n, "TreeNotSpanning", "tree does not span the graph");
    return t;
}

// Vertices of the fundamental cycle closed by (u,v), ordered u..lca..v.
std::vector<VertexId> fundamental_cycle(const TreeView& t, VertexId u, VertexId v,
                                        std::vector<EdgeId>* path_edges) {
    std::vector<VertexId> up, down;
    std::vector<EdgeId> ea, eb;
    VertexId a = u, b = v;
    while (a != b) {
        if (t.depth[a] >= t.depth[b]) {
            ea.push_back(t.parent_edge[a]);
            up.push_back(a);
            a = t.parent[a];
        } else {
            eb.push_back(t.parent_edge[b]);
            down.push_back(b);
            b = t.parent[b];
        }
    }
    std::vector<VertexId> cyc = up;
    cyc.push_back(a);
    for (auto it = down.rbegin(); it != down.rend(); ++it) cyc.push_back(*it);
    if (path_edges) {
        *path_edges = ea;
        path_edges->insert(path_edges->end(), eb.rbegin(), eb.rend());
    }
    return cyc;
}

// Dual spanning tree over the non-tree primal edges, rooted at the outer face.
struct DualTree {
    FaceSet faces;
    int root = -1;
    std::vector<int> parent;
    std::vector<EdgeId> parent_edge;
    std::vector<int> tin, tout;
    std::vector<int> order;

    bool in_subtree(int f, int sub) const {
        return tin[sub] <= tin[f] && tout[f] <= tout[sub];
    }
    int child_face(const PlanarGraph& g, EdgeId e) const {
        int f1 = faces.face_of_dart[dart_fwd(e)];
        int f2 = faces.face_of_dart[dart_rev(e)];
        return (parent[f1] == f2 && parent_edge[f1] == e) ? f1 : f2;
    }
};

DualTree build_dual_tree(const PlanarGraph& g, const TreeView& t) {
    DualTree d;
    d.faces = enumerate_faces(g);
    int nf = d.faces.count();
    d.root = outer_face(g, d.faces);
    std::vector<std::vector<std::pair<int, EdgeId>>> adj(nf);
    for (EdgeId e = 0; e < g.m(); ++e) {
        if (t.in_tree[e]) continue;
        int f1 = d.faces.face_of_dart[dart_fwd(e)];
        int f2 = d.faces.face_of_dart[dart_rev(e)];
        adj[f1].push_back({f2, e});
        adj[f2].push_back({f1, e});
    }
    d.parent.assign(nf, -1);
    d.parent_edge.assign(nf, -1);
    d.tin.assign(nf, -1);
    d.tout.assign(nf, -1);
    int clock = 0;
    std::vector<int> stack = {d.root};
    std::vector<std::size_t> it(nf, 0);
    d.tin[d.root] = clock++;
    d.order.push_back(d.root);
    while (!stack.empty()) {
        int f = stack.back();
        if (it[f] < adj[f].size()) {
            auto [f2, e] = adj[f][it[f]++];
            if (d.tin[f2] == -1) {
                d.parent[f2] = f;
                d.parent_edge[f2] = e;
                d.tin[f2] = clock++;
                d.order.push_back(f2);
                stack.push_back(f2);
            }
        } else {
            d.tout[f] = clock++;
            stack.pop_back();
        }
    }
    for (int f = 0; f < nf; ++f)
        require(d.tin[f] != -1, "SeparatorFailure", "dual graph disconnected");
    return d;
}

struct Candidate {
    EdgeId e = -1;
    long long w_in = 0, w_out = 0, w_cyc = 0;
    long long heavier = 0, heavier_with_cycle = 0;
    bool valid = false;
};

Candidate evaluate_candidate(const PlanarGraph& g, const TreeView& t, const DualTree& d,
                             const std::vector<long long>& weight, long long total,
                             double limit, EdgeId e) {
    Candidate c;
    c.e = e;
    std::vector<VertexId> cyc = fundamental_cycle(t, g.edges[e].u, g.edges[e].v, nullptr);
    std::vector<char> on(g.n, 0);
    for (VertexId v : cyc) on[v] = 1;
    int sub = d.child_face(g, e);
    for (VertexId v = 0; v < g.n; ++v) {
        if (on[v]) {
            c.w_cyc += weight[v];
            continue;
        }
        int f = d.faces.face_of_dart[g.dart_from(v, g.rot[v][0])];
        if (d.in_subtree(f, sub)) c.w_in += weight[v];
    }
    c.w_out = total - c.w_in - c.w_cyc;
    c.heavier = std::max(c.w_in, c.w_out);
    c.heavier_with_cycle = c.heavier + c.w_cyc;
    c.valid = static_cast<double>(c.heavier) <= limit;
    return c;
}

void insert_before(PlanarGraph& g, VertexId v, EdgeId anchor_e, EdgeId fresh) {
    auto& rv = g.rot[v];
    for (std::size_t i = 0; i < rv.size(); ++i)
        if (rv[i] == anchor_e) {
            rv.insert(rv.begin() + i, fresh);
            return;
        }
    fail("SeparatorFailure", "rotation anchor missing");
}

void insert_after(PlanarGraph& g, VertexId v, EdgeId anchor_e, EdgeId fresh) {
    auto& rv = g.rot[v];
    for (std::size_t i = 0; i < rv.size(); ++i)
        if (rv[i] == anchor_e) {
            rv.insert(rv.begin() + i + 1, fresh);
            return;
        }
    fail("SeparatorFailure", "rotation anchor missing");
}

// Fan-triangulates face f from a boundary vertex; returns the chord ids.
std::vector<EdgeId> fan_triangulate(PlanarGraph& g, const FaceSet& faces, int f,
                                    VertexId anchor) {
    const auto& walk = faces.walks[f];
    int L = static_cast<int>(walk.size());
    if (L <= 3) return {};
    int start = -1;
    for (int i = 0; i < L; ++i)
        if (g.tail(walk[i]) == anchor) {
            start = i;
            break;
        }
    require(start >= 0, "SeparatorFailure", "anchor not on face");
    std::vector<VertexId> vs(L);
    for (int i = 0; i < L; ++i) vs[i] = g.tail(walk[(start + i) % L]);
    // Chord to vs[i] goes after the walk edge arriving at vs[i]; at the
    // anchor the chords stack up just before the edge to vs[1].
    EdgeId first_edge = dart_edge(walk[start]);
    EdgeId prev_at_anchor = first_edge;
    std::vector<EdgeId> chords;
    for (int i = 2; i <= L - 2; ++i) {
        EdgeId into = dart_edge(walk[(start + i - 1) % L]);
        EdgeId c = g.m();
        g.edges.push_back(Edge{anchor, vs[i], 1, true});
        insert_before(g, anchor, prev_at_anchor, c);
        insert_after(g, vs[i], into, c);
        prev_at_anchor = c;
        chords.push_back(c);
    }
    return chords;
}

} // namespace

CycleSeparator cycle_separator(const PlanarGraph& g, const std::vector<EdgeId>& tree_edges,
                               const std::vector<long long>& node_weights,
                               const SeparatorOptions& opt) {
    require(static_cast<int>(node_weights.size()) == g.n, "InvalidParams",
            "weight array size mismatch");
    long long total = 0;
    for (long long w : node_weights) {
        require(w >= 0, "InvalidParams", "negative node weight");
        total += w;
    }
    require(total > 0, "InvalidParams", "total node weight must be positive");
    require(is_biconnected(g), "NotBiconnected", "cycle separator needs a biconnected graph");

    double limit = (2.0 / 3.0) * (1.0 + opt.eps_bal) * static_cast<double>(total);

    auto pick = [&](const PlanarGraph& gw, const TreeView& tw, const DualTree& dw,
                    const std::vector<EdgeId>& cands) {
        Candidate best;
        for (EdgeId e : cands) {
            Candidate c = evaluate_candidate(gw, tw, dw, node_weights, total, limit, e);
            if (!c.valid) continue;
            long long key = opt.objective == 1 ? c.heavier_with_cycle : c.heavier;
            long long bkey = opt.objective == 1 ? best.heavier_with_cycle : best.heavier;
            if (best.e == -1 || key < bkey || (key == bkey && e < best.e)) best = c;
        }
        return best;
    };

    auto finish = [&](PlanarGraph gw, const TreeView& tw, const DualTree& dw,
                      const Candidate& c) {
        CycleSeparator sep;
        sep.closing_edge = c.e;
        sep.closing_virtual = gw.edges[c.e].virt;
        sep.cycle_vertices = fundamental_cycle(tw, gw.edges[c.e].u, gw.edges[c.e].v,
                                               &sep.tree_path_edges);
        sep.on_cycle.assign(gw.n, 0);
        for (VertexId v : sep.cycle_vertices) sep.on_cycle[v] = 1;
        sep.inside.assign(gw.n, 0);
        sep.outside.assign(gw.n, 0);
        int sub = dw.child_face(gw, c.e);
        for (VertexId v = 0; v < gw.n; ++v) {
            if (sep.on_cycle[v]) continue;
            int f = dw.faces.face_of_dart[gw.dart_from(v, gw.rot[v][0])];
            (dw.in_subtree(f, sub) ? sep.inside : sep.outside)[v] = 1;
        }
        sep.weight_inside = c.w_in;
        sep.weight_outside = c.w_out;
        sep.weight_cycle = c.w_cyc;
        sep.balance = static_cast<double>(c.heavier) / static_cast<double>(total);
        sep.work = std::move(gw);
        return sep;
    };

    TreeView t = build_tree_view(g, tree_edges);
    DualTree d = build_dual_tree(g, t);

    // Balanced dual-node case: some real non-tree edge closes a balanced
    // fundamental cycle.
    {
        std::vector<EdgeId> cands;
        for (EdgeId e = 0; e < g.m(); ++e)
            if (!t.in_tree[e]) cands.push_back(e);
        Candidate best = pick(g, t, d, cands);
        if (best.e != -1) return finish(g, t, d, best);
    }

    // Critical dual node: superface weight above the limit while every child
    // superface is below it. Triangulate that face and retry on the chords.
    {
        std::vector<long long> superw(d.faces.count(), 0);
        superw[d.root] = total;
        for (int f : d.order) {
            if (f == d.root) continue;
            Candidate c = evaluate_candidate(g, t, d, node_weights, total, limit,
                                             d.parent_edge[f]);
            superw[f] = c.w_in + c.w_cyc;
        }
        std::vector<std::vector<int>> kids(d.faces.count());
        for (int f = 0; f < d.faces.count(); ++f)
            if (d.parent[f] != -1) kids[d.parent[f]].push_back(f);
        int crit = d.root;
        for (;;) {
            int next = -1;
            for (int k : kids[crit])
                if (static_cast<double>(superw[k]) > limit) {
                    next = k;
                    break;
                }
            if (next == -1) break;
            crit = next;
        }
        PlanarGraph gw = g;
        VertexId anchor;
        if (d.parent_edge[crit] != -1) {
            const Edge& pe = g.edges[d.parent_edge[crit]];
            anchor = std::min(pe.u, pe.v);
        } else {
            auto bv = d.faces.boundary_vertices(g, crit);
            anchor = *std::min_element(bv.begin(), bv.end());
        }
        std::vector<EdgeId> chords = fan_triangulate(gw, d.faces, crit, anchor);
        if (!chords.empty()) {
            TreeView tw = build_tree_view(gw, tree_edges);
            DualTree dw = build_dual_tree(gw, tw);
            Candidate best = pick(gw, tw, dw, chords);
            if (best.e != -1) return finish(std::move(gw), tw, dw, best);
        }
    }

    // Last resort: triangulate every face; a balanced fundamental cycle is
    // guaranteed to exist in a triangulation.
    {
        PlanarGraph gw = g;
        FaceSet fs = enumerate_faces(gw);
        int nf = fs.count();
        for (int f = 0; f < nf; ++f) {
            auto bv = fs.boundary_vertices(gw, f);
            fan_triangulate(gw, fs, f, *std::min_element(bv.begin(), bv.end()));
        }
        TreeView tw = build_tree_view(gw, tree_edges);
        DualTree dw = build_dual_tree(gw, tw);
        std::vector<EdgeId> cands;
        for (EdgeId e = 0; e < gw.m(); ++e)
            if (!tw.in_tree[e]) cands.push_back(e);
        Candidate best = pick(gw, tw, dw, cands);
        require(best.e != -1, "SeparatorFailure", "no balanced fundamental cycle found");
        return finish(std::move(gw), tw, dw, best);
    }
}

// ---- block-cut tree ---------------------------------------------------------

BlockCutTree block_cut_tree(const PlanarGraph& g) {
    require(g.connected(), "Disconnected", "block-cut tree needs a connected graph");
    BlockCutTree bct;
    bct.is_cut.assign(g.n, 0);
    if (g.n == 0) return bct;
    if (g.m() == 0) {
        bct.blocks.push_back({0});
        bct.block_edges.emplace_back();
        bct.vertex_level.assign(g.n, 1);
        bct.block_level.push_back(1);
        return bct;
    }

    std::vector<int> num(g.n, -1), low(g.n, 0);
    std::vector<VertexId> par(g.n, -1);
    std::vector<EdgeId> estack;
    std::vector<char> edge_used(g.m(), 0);
    int clock = 0;

    struct Frame {
        VertexId v;
        std::size_t i;
    };
    std::vector<Frame> st;
    st.push_back({0, 0});
    num[0] = low[0] = clock++;
    int root_children = 0;
    while (!st.empty()) {
        Frame& fr = st.back();
        VertexId v = fr.v;
        if (fr.i < g.rot[v].size()) {
            EdgeId e = g.rot[v][fr.i++];
            VertexId w = g.edges[e].other(v);
            if (edge_used[e]) continue;
            edge_used[e] = 1;
            estack.push_back(e);
            if (num[w] == -1) {
                par[w] = v;
                num[w] = low[w] = clock++;
                if (v == 0) ++root_children;
                st.push_back({w, 0});
            } else {
                low[v] = std::min(low[v], num[w]);
            }
        } else {
            st.pop_back();
            if (!st.empty()) {
                VertexId p = st.back().v;
                low[p] = std::min(low[p], low[v]);
                if (low[v] >= num[p]) {
                    if (p != 0 || root_children > 1) bct.is_cut[p] = 1;
                    std::vector<EdgeId> comp;
                    for (;;) {
                        EdgeId e = estack.back();
                        estack.pop_back();
                        comp.push_back(e);
                        if ((g.edges[e].u == p && g.edges[e].v == v) ||
                            (g.edges[e].v == p && g.edges[e].u == v))
                            break;
                    }
                    bct.block_edges.push_back(std::move(comp));
                }
            }
        }
    }
    if (!estack.empty()) bct.block_edges.push_back(std::move(estack));

    int nb = static_cast<int>(bct.block_edges.size());
    bct.blocks.assign(nb, {});
    for (int b = 0; b < nb; ++b) {
        std::vector<VertexId> vs;
        for (EdgeId e : bct.block_edges[b]) {
            vs.push_back(g.edges[e].u);
            vs.push_back(g.edges[e].v);
        }
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        bct.blocks[b] = std::move(vs);
    }

    bct.vertex_level.assign(g.n, -1);
    bct.edge_level.assign(g.m(), -1);
    bct.block_level.assign(nb, -1);
    std::vector<std::vector<int>> blocks_of(g.n);
    for (int b = 0; b < nb; ++b)
        for (VertexId v : bct.blocks[b]) blocks_of[v].push_back(b);
    for (VertexId v = 0; v < g.n && bct.root_cut == -1; ++v)
        if (bct.is_cut[v]) bct.root_cut = v;
    if (bct.root_cut == -1) {
        for (int b = 0; b < nb; ++b) bct.block_level[b] = 1;
        for (VertexId v = 0; v < g.n; ++v) bct.vertex_level[v] = 1;
    } else {
        std::queue<std::pair<int, bool>> q;
        bct.vertex_level[bct.root_cut] = 0;
        q.push({bct.root_cut, false});
        while (!q.empty()) {
            auto [id, isb] = q.front();
            q.pop();
            if (isb) {
                for (VertexId v : bct.blocks[id])
                    if (bct.is_cut[v] && bct.vertex_level[v] == -1) {
                        bct.vertex_level[v] = bct.block_level[id] + 1;
                        q.push({v, false});
                    }
            } else {
                for (int b : blocks_of[id])
                    if (bct.block_level[b] == -1) {
                        bct.block_level[b] = bct.vertex_level[id] + 1;
                        q.push({b, true});
                    }
            }
        }
        for (VertexId v = 0; v < g.n; ++v)
            if (!bct.is_cut[v]) bct.vertex_level[v] = bct.block_level[blocks_of[v][0]];
    }
    for (int b = 0; b < nb; ++b)
        for (EdgeId e : bct.block_edges[b]) bct.edge_level[e] = bct.block_level[b];
    return bct;
}

// ---- biconnectivity augmentation ---------------------------------------------

Augmentation biconnect_augment(const PlanarGraph& g) {
    require(g.connected(), "Disconnected", "augmentation needs a connected graph");
    Augmentation out;
    out.graph = g;
    out.sim_path.assign(g.m(), {});
    BlockCutTree bct = block_cut_tree(g);
    if (bct.cut_count() == 0) return out;

    PlanarGraph& gw = out.graph;
    std::vector<int> edge_level = bct.edge_level;

    struct Plan {
        VertexId u1, u2;
        EdgeId e1, e2; // corner edges at the cut vertex: u1 via e1, u2 via e2
        VertexId via;
        int level;
    };

    // A edges: corners whose two edges both lead into child blocks.
    std::vector<Plan> a_plans;
    for (VertexId u = 0; u < g.n; ++u) {
        if (!bct.is_cut[u]) continue;
        int lu = bct.vertex_level[u];
        int deg = static_cast<int>(g.rot[u].size());
        int corners = deg == 2 ? 1 : deg;
        for (int i = 0; i < corners; ++i) {
            EdgeId e1 = g.rot[u][i];
            EdgeId e2 = g.rot[u][(i + 1) % deg];
            if (e1 == e2) continue;
            if (edge_level[e1] != lu + 1 || edge_level[e2] != lu + 1) continue;
            VertexId u1 = g.edges[e1].other(u), u2 = g.edges[e2].other(u);
            if (u1 == u2) continue;
            a_plans.push_back(Plan{u1, u2, e1, e2, u, lu + 1});
        }
    }
    for (const Plan& p : a_plans) {
        EdgeId c = gw.m();
        gw.edges.push_back(Edge{p.u1, p.u2, 1, true});
        insert_before(gw, p.u1, p.e1, c);
        insert_after(gw, p.u2, p.e2, c);
        out.a_edges.push_back(c);
        out.sim_path.push_back({p.u1, p.via, p.u2});
        edge_level.push_back(p.level);
    }

    // B edges: corners mixing a child-level and a parent-level edge, in the
    // clockwise or counter-clockwise sense chosen by the parity of l(u)/2,
    // scanned on the rotation of G plus the A edges.
    std::vector<std::vector<EdgeId>> snapshot = gw.rot;
    std::vector<Plan> b_plans;
    for (VertexId u = 0; u < g.n; ++u) {
        if (!bct.is_cut[u]) continue;
        int lu = bct.vertex_level[u];
        if (lu == 0) continue; // the root has no parent block
        bool clockwise = ((lu / 2) % 2) == 0;
        const auto& ru = snapshot[u];
        int deg = static_cast<int>(ru.size());
        if (deg < 2) continue;
        for (int i = 0; i < deg; ++i) {
            EdgeId e1 = ru[i];
            EdgeId e2 = ru[(i + 1) % deg];
            if (e1 == e2) continue;
            int l1 = edge_level[e1], l2 = edge_level[e2];
            bool match = clockwise ? (l1 == lu + 1 && l2 == lu - 1)
                                   : (l1 == lu - 1 && l2 == lu + 1);
            if (!match) continue;
            VertexId u1 = gw.edges[e1].other(u), u2 = gw.edges[e2].other(u);
            if (u1 == u2) continue;
            b_plans.push_back(Plan{u1, u2, e1, e2, u, lu});
            if (deg == 2) break; // one chord per degree-2 corner pair
        }
    }
    // Half of a simulation path: from endpoint x to the cut vertex via edge e,
    // expanding through the A-edge path when e is virtual. Excludes `via`.
    auto half_path = [&](VertexId x, EdgeId e) {
        std::vector<VertexId> part;
        if (!out.sim_path[e].empty()) {
            const auto& sp = out.sim_path[e]; // (a, w, b) with w the A cut vertex
            if (sp.front() == x)
                part.assign(sp.begin(), sp.end() - 1);
            else
                part.assign(sp.rbegin(), sp.rend() - 1);
        } else {
            part.push_back(x);
        }
        return part;
    };
    for (const Plan& p : b_plans) {
        EdgeId c = gw.m();
        gw.edges.push_back(Edge{p.u1, p.u2, 1, true});
        insert_before(gw, p.u1, p.e1, c);
        insert_after(gw, p.u2, p.e2, c);
        out.b_edges.push_back(c);
        std::vector<VertexId> path = half_path(p.u1, p.e1);
        path.push_back(p.via);
        std::vector<VertexId> back = half_path(p.u2, p.e2);
        path.insert(path.end(), back.rbegin(), back.rend());
        out.sim_path.push_back(path);
        edge_level.push_back(p.level);
    }
    return out;
}

std::vector<EdgeId> bfs_tree_edges(const PlanarGraph& g, VertexId root) {
    PlanarGraph tmp = g;
    tmp.weighted = false;
    ShortestPaths sp = single_source_distances(tmp, root);
    std::vector<EdgeId> out;
    for (VertexId v = 0; v < g.n; ++v) {
        if (v == root) continue;
        require(sp.parent[v] != -1, "TreeNotSpanning", "graph is disconnected");
        auto e = g.find_edge(v, sp.parent[v]);
        require(e.has_value(), "TreeNotSpanning", "parent edge missing");
        out.push_back(*e);
    }
    return out;
}

std::vector<EdgeId> sssp_tree_edges(const PlanarGraph& g, VertexId root) {
    ShortestPaths sp = single_source_distances(g, root);
    std::vector<EdgeId> out;
    for (VertexId v = 0; v < g.n; ++v) {
        if (v == root) continue;
        require(sp.parent[v] != -1, "TreeNotSpanning", "graph is disconnected");
        EdgeId best = -1;
        for (EdgeId e : g.rot[v]) {
            if (g.edges[e].virt) continue;
            if (g.edges[e].other(v) != sp.parent[v]) continue;
            Dist w = g.weighted ? g.edges[e].w : 1;
            if (sp.dist[sp.parent[v]] + w == sp.dist[v]) {
                best = e;
                break;
            }
        }
        require(best != -1, "TreeNotSpanning", "parent edge missing");
        out.push_back(best);
    }
    return out;
}

} // namespace pmk
