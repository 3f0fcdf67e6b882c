#include "pmk/coreset.hpp"

#include <algorithm>
#include <map>
#include <queue>

namespace pmk {

GridSpec grid(int num_sources, const Rat& source_gap, const Rat& refined_error) {
    require(num_sources >= 1, "NonpositiveParam", "need at least one source");
    require(source_gap > Rat(0), "NonpositiveParam", "source gap must be positive");
    require(refined_error > Rat(0), "NonpositiveParam", "refined error must be positive");
    GridSpec spec;
    spec.num_sources = num_sources;
    spec.source_gap = source_gap;
    spec.refined_error = refined_error;
    Rat step = refined_error / Rat(num_sources);
    long long reach = ceil_rat(Rat(num_sources) * source_gap / refined_error);
    spec.values.reserve(2 * reach + 1);
    for (long long k = -reach; k <= reach; ++k) spec.values.push_back(Rat(k) * step);
    return spec;
}

namespace {

// Membership classes over a rational delta grid, represented as per-index
// thresholds like the unweighted family.
MembershipFamily family_over_grid(const std::vector<DistanceTuple>& tuples,
                                  const GridSpec& spec) {
    DeltaDomain dom;
    dom.values = spec.values;
    MembershipFamily fam;
    fam.domain = dom;
    int l = tuples.empty() ? 0 : static_cast<int>(tuples[0].size());
    fam.per_vertex.reserve(tuples.size());
    for (const DistanceTuple& t : tuples) {
        MembershipSet m;
        m.first_delta.assign(std::max(0, l - 1), dom.size());
        for (int i = 0; i + 1 < l; ++i) {
            Rat diff(t[i] - t[i + 1]);
            // memberships are a suffix: first grid value >= diff
            auto it = std::lower_bound(dom.values.begin(), dom.values.end(), diff);
            m.first_delta[i] = static_cast<int>(it - dom.values.begin());
        }
        fam.per_vertex.push_back(std::move(m));
    }
    fam.distinct = fam.per_vertex;
    std::sort(fam.distinct.begin(), fam.distinct.end());
    fam.distinct.erase(std::unique(fam.distinct.begin(), fam.distinct.end()),
                       fam.distinct.end());
    fam.class_of.resize(tuples.size());
    for (std::size_t v = 0; v < tuples.size(); ++v)
        fam.class_of[v] = static_cast<int>(
            std::lower_bound(fam.distinct.begin(), fam.distinct.end(), fam.per_vertex[v]) -
            fam.distinct.begin());
    return fam;
}

Rat linf_distance(const DistanceTuple& a, const DistanceTuple& b) {
    Dist m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::llabs(a[i] - b[i]));
    return Rat(m);
}

} // namespace

CoreSet additive_coreset_from_tuples(const std::vector<DistanceTuple>& tuples,
                                     const std::vector<VertexId>& vertex_ids,
                                     const Rat& source_gap, const Rat& delta) {
    require(!tuples.empty(), "InvalidParams", "no tuples");
    require(delta > Rat(0), "NonpositiveParam", "delta must be positive");
    int n = static_cast<int>(tuples.size());
    CoreSet cs;
    cs.delta = delta;
    Rat delta_prime = delta / Rat(2);
    Rat gap = source_gap > Rat(0) ? source_gap : Rat(1);
    int l = static_cast<int>(tuples[0].size());

    GridSpec spec = grid(l, gap, delta_prime);
    MembershipFamily fam = family_over_grid(tuples, spec);
    cs.family_size = static_cast<long long>(fam.distinct.size());

    // one candidate per non-empty (class, k) bucket, k from d(v, s_1)
    std::map<std::pair<int, long long>, int> bucket_rep; // -> local row
    for (int v = 0; v < n; ++v) {
        long long k = floor_rat(Rat(tuples[v][0]) / delta_prime);
        auto key = std::make_pair(fam.class_of[v], k);
        auto it = bucket_rep.find(key);
        if (it == bucket_rep.end() || vertex_ids[v] < vertex_ids[it->second])
            bucket_rep[key] = v;
    }
    cs.bucket_count = static_cast<long long>(bucket_rep.size());

    std::vector<std::pair<std::pair<int, long long>, int>> candidates(bucket_rep.begin(),
                                                                      bucket_rep.end());
    // greedy prune: match every vertex to the first close candidate; only
    // matched candidates stay
    std::vector<int> chosen(candidates.size(), -1);
    std::vector<int> witness_candidate(n, -1);
    for (int v = 0; v < n; ++v) {
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (linf_distance(tuples[v], tuples[candidates[c].second]) <= delta) {
                witness_candidate[v] = static_cast<int>(c);
                chosen[c] = 1;
                break;
            }
        }
        require(witness_candidate[v] != -1, "InvalidParams",
                "bucket construction failed to cover a vertex");
    }
    std::vector<int> member_index(candidates.size(), -1);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (chosen[c] != 1) continue;
        member_index[c] = static_cast<int>(cs.members.size());
        cs.members.push_back(vertex_ids[candidates[c].second]);
        cs.bucket_of.push_back(candidates[c].first);
    }
    cs.witness.resize(n);
    for (int v = 0; v < n; ++v) cs.witness[v] = member_index[witness_candidate[v]];
    return cs;
}

CoreSet additive_coreset(const PlanarGraph& g, const FaceSources& s, const Rat& delta,
                         std::optional<Rat> max_gap) {
    FaceSet fs = enumerate_faces(g);
    check_face_sources(g, fs, s);
    std::vector<DistanceTuple> tuples = compute_tuples(g, s);
    // d: maximum consecutive source distance in the given cyclic order
    Rat gap(0);
    int l = static_cast<int>(s.vertices.size());
    for (int i = 0; i + 1 < l; ++i)
        gap = std::max(gap, Rat(tuples[s.vertices[i]][i + 1]));
    if (l > 1) gap = std::max(gap, Rat(tuples[s.vertices[l - 1]][0]));
    if (gap == Rat(0)) gap = Rat(1);
    if (max_gap && gap > *max_gap)
        fail("SourceGapExceeded", "consecutive source distance " + to_string(gap) +
                                      " exceeds bound " + to_string(*max_gap));
    std::vector<VertexId> ids(g.n);
    for (int v = 0; v < g.n; ++v) ids[v] = v;
    return additive_coreset_from_tuples(tuples, ids, gap, delta);
}

LddPartition ldd(const PlanarGraph& g, double beta, std::uint64_t seed) {
    require(beta > 0, "NonpositiveParam", "beta must be positive");
    LddPartition part;
    part.beta = beta;
    part.seed = seed;
    part.component.assign(g.n, -1);
    if (g.n == 0) return part;
    Rng rng(seed);
    std::vector<double> shift(g.n);
    for (VertexId v = 0; v < g.n; ++v) shift[v] = sample_exponential(rng, beta);

    // Dijkstra race from all shifted starts; assignment along the relaxation
    // parent keeps every cluster connected.
    using Item = std::tuple<double, VertexId, VertexId>; // key, center, vertex
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    std::vector<int> cluster(g.n, -1);
    for (VertexId v = 0; v < g.n; ++v) pq.push({-shift[v], v, v});
    while (!pq.empty()) {
        auto [key, center, v] = pq.top();
        pq.pop();
        if (cluster[v] != -1) continue;
        cluster[v] = center;
        for (EdgeId e : g.rot[v]) {
            if (g.edges[e].virt) continue;
            VertexId w = g.edges[e].other(v);
            if (cluster[w] != -1) continue;
            double nk = key + static_cast<double>(g.weighted ? g.edges[e].w : 1);
            pq.push({nk, center, w});
        }
    }
    std::map<int, int> compact;
    for (VertexId v = 0; v < g.n; ++v) compact.emplace(cluster[v], 0);
    int next = 0;
    for (auto& [c, id] : compact) id = next++;
    part.num_components = next;
    for (VertexId v = 0; v < g.n; ++v) part.component[v] = compact[cluster[v]];
    return part;
}

namespace {

// Weighted diameter of a vertex subset within the induced subgraph: exact
// for small components, a double-sweep upper bound (which only widens the
// additive radius) for large ones.
Dist component_diameter(const PlanarGraph& g, const std::vector<char>& mask,
                        const std::vector<VertexId>& verts) {
    auto ecc = [&](VertexId s, VertexId* far_vertex) {
        ShortestPaths sp = single_source_distances(g, s, &mask);
        Dist m = 0;
        for (VertexId t : verts)
            if (sp.dist[t] != INF_DIST && sp.dist[t] >= m) {
                m = sp.dist[t];
                if (far_vertex) *far_vertex = t;
            }
        return m;
    };
    if (verts.size() <= 60) {
        Dist dia = 0;
        for (VertexId s : verts) dia = std::max(dia, ecc(s, nullptr));
        return dia;
    }
    VertexId far = verts[0];
    ecc(verts[0], &far);
    return 2 * ecc(far, nullptr);
}

} // namespace

MultiCompression multiplicative_compress(const PlanarGraph& g, const FaceSources& s,
                                         const Rat& eps, std::uint64_t seed) {
    require(eps > Rat(0) && eps <= Rat(1), "InvalidParams", "eps must be in (0,1]");
    MultiCompression mc;
    mc.eps = eps;
    mc.seed = seed;
    int logn = std::max(1, ceil_log2(std::max(2, g.n)));
    mc.eps_refined = eps / Rat(4 * logn);
    mc.parts_of_vertex.assign(g.n, {});

    Dist wdist = max_distance_bound(g);
    if (wdist <= 0) wdist = 1;
    // powers of two up to 4 * max distance
    std::vector<double> betas;
    for (Dist x = 1; x <= 4 * wdist; x *= 2) betas.push_back(1.0 / static_cast<double>(x));
    mc.levels = static_cast<int>(betas.size());
    long long n3 = 1;
    for (int i = 0; i < 3; ++i) n3 *= std::max(2, g.n);
    mc.reps = ceil_log2(static_cast<std::uint64_t>(n3)); // ceil(3 log2 n)

    std::vector<char> is_source(g.n, 0);
    std::vector<int> source_pos(g.n, -1);
    for (std::size_t i = 0; i < s.vertices.size(); ++i) {
        is_source[s.vertices[i]] = 1;
        source_pos[s.vertices[i]] = static_cast<int>(i);
    }

    for (int lev = 0; lev < mc.levels; ++lev) {
        for (int rep = 0; rep < mc.reps; ++rep) {
            std::uint64_t sub_seed =
                seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(lev) * 131 +
                                                 static_cast<std::uint64_t>(rep) + 1));
            LddPartition part = ldd(g, betas[lev], sub_seed);
            std::vector<std::vector<VertexId>> comp_verts(part.num_components);
            for (VertexId v = 0; v < g.n; ++v) comp_verts[part.component[v]].push_back(v);
            for (int c = 0; c < part.num_components; ++c) {
                std::vector<VertexId> srcs;
                for (VertexId v : comp_verts[c])
                    if (is_source[v]) srcs.push_back(v);
                if (srcs.empty()) continue;
                std::vector<char> mask(g.n, 0);
                for (VertexId v : comp_verts[c]) mask[v] = 1;
                // local tuples: distances to the surviving sources inside the
                // component subgraph
                std::vector<std::vector<Dist>> rows;
                rows.reserve(srcs.size());
                for (VertexId sv : srcs)
                    rows.push_back(single_source_distances(g, sv, &mask).dist);
                std::vector<DistanceTuple> tuples(comp_verts[c].size(),
                                                  DistanceTuple(srcs.size()));
                for (std::size_t i = 0; i < comp_verts[c].size(); ++i)
                    for (std::size_t j = 0; j < srcs.size(); ++j)
                        tuples[i][j] = rows[j][comp_verts[c][i]];
                Dist dia = component_diameter(g, mask, comp_verts[c]);
                ComponentCompression cc;
                cc.vertices = comp_verts[c];
                cc.sources = srcs;
                if (dia == 0) {
                    // singleton or zero-diameter component: store exact rows
                    cc.inflation = Rat(0);
                    cc.member_tuples = {tuples[0]};
                    cc.witness_local.assign(comp_verts[c].size(), 0);
                } else {
                    Rat delta_i = mc.eps_refined * Rat(dia);
                    CoreSet cs = additive_coreset_from_tuples(tuples, comp_verts[c],
                                                              Rat(dia), delta_i);
                    cc.inflation = delta_i;
                    cc.witness_local = cs.witness;
                    cc.member_tuples.reserve(cs.members.size());
                    std::map<VertexId, int> local;
                    for (std::size_t i = 0; i < comp_verts[c].size(); ++i)
                        local[comp_verts[c][i]] = static_cast<int>(i);
                    for (VertexId m : cs.members) cc.member_tuples.push_back(tuples[local[m]]);
                }
                int pid = static_cast<int>(mc.parts.size());
                for (std::size_t i = 0; i < cc.vertices.size(); ++i)
                    mc.parts_of_vertex[cc.vertices[i]].push_back({pid, static_cast<int>(i)});
                mc.parts.push_back(std::move(cc));
            }
        }
    }
    for (const auto& p : mc.parts)
        mc.total_bits_estimate +=
            64LL * static_cast<long long>(p.member_tuples.size()) *
                static_cast<long long>(p.sources.size()) +
            static_cast<long long>(p.vertices.size()) *
                (1 + ceil_log2(std::max<std::size_t>(1, p.member_tuples.size())));
    return mc;
}

Rat multiplicative_decode(const MultiCompression& mc, VertexId source, VertexId target) {
    if (source == target) return Rat(0);
    Rat best(INF_DIST);
    for (auto [pid, local] : mc.parts_of_vertex[target]) {
        const ComponentCompression& p = mc.parts[pid];
        int spos = -1;
        for (std::size_t j = 0; j < p.sources.size(); ++j)
            if (p.sources[j] == source) spos = static_cast<int>(j);
        if (spos < 0) continue;
        const DistanceTuple& mt = p.member_tuples[p.witness_local[local]];
        Rat est = Rat(mt[spos]) + p.inflation;
        best = std::min(best, est);
    }
    return best; // INF_DIST marker when never co-clustered
}

} // namespace pmk
