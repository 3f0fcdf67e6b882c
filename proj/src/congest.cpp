#include "pmk/congest.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "pmk/fast_tuples.hpp"

namespace pmk {

namespace {

int dist_bits(const PlanarGraph& g) {
    Dist maxw = 1;
    for (const Edge& e : g.edges) maxw = std::max(maxw, e.w);
    return bits_for(static_cast<std::uint64_t>(maxw) * std::max(1, g.n));
}

// ---- label serialization ----------------------------------------------------

std::vector<std::uint64_t> label_words(const DistanceLabel& l) {
    std::vector<std::uint64_t> w;
    w.push_back(static_cast<std::uint64_t>(l.owner));
    w.push_back(l.sublabels.size());
    for (const SubLabel& s : l.sublabels) {
        w.push_back(static_cast<std::uint64_t>(s.bag_id));
        w.push_back(s.sep_dist.size());
        for (auto [v, d] : s.sep_dist) {
            w.push_back(static_cast<std::uint64_t>(v));
            w.push_back(static_cast<std::uint64_t>(d));
        }
    }
    w.push_back(static_cast<std::uint64_t>(l.leaf_bag + 1));
    w.push_back(l.leaf_row.size());
    for (auto [v, d] : l.leaf_row) {
        w.push_back(static_cast<std::uint64_t>(v));
        w.push_back(static_cast<std::uint64_t>(d));
    }
    return w;
}

DistanceLabel label_from_words(const std::vector<std::uint64_t>& w) {
    DistanceLabel l;
    std::size_t i = 0;
    l.owner = static_cast<VertexId>(w[i++]);
    std::size_t ns = w[i++];
    for (std::size_t k = 0; k < ns; ++k) {
        SubLabel s;
        s.bag_id = static_cast<int>(w[i++]);
        std::size_t cnt = w[i++];
        for (std::size_t j = 0; j < cnt; ++j) {
            VertexId v = static_cast<VertexId>(w[i++]);
            Dist d = static_cast<Dist>(w[i++]);
            s.sep_dist.push_back({v, d});
        }
        l.sublabels.push_back(std::move(s));
    }
    l.leaf_bag = static_cast<int>(w[i++]) - 1;
    std::size_t cnt = w[i++];
    for (std::size_t j = 0; j < cnt; ++j) {
        VertexId v = static_cast<VertexId>(w[i++]);
        Dist d = static_cast<Dist>(w[i++]);
        l.leaf_row.push_back({v, d});
    }
    return l;
}

std::vector<char> bag_edge_mask(const PlanarGraph& g, const Bag& bag) {
    std::vector<char> mask(g.m(), 0);
    for (EdgeId e : bag.edges) mask[e] = 1;
    return mask;
}

VertexId bag_leader(const Bag& bag) { return bag.verts.front(); }

} // namespace

long long DistanceLabel::bits(int n, Dist max_dist) const {
    int vb = bits_for(static_cast<std::uint64_t>(std::max(1, n)));
    int db = bits_for(static_cast<std::uint64_t>(std::max<Dist>(1, max_dist)));
    long long b = vb + 8;
    for (const SubLabel& s : sublabels)
        b += 24 + static_cast<long long>(s.sep_dist.size()) * (vb + db);
    b += 24 + static_cast<long long>(leaf_row.size()) * (vb + db);
    return b;
}

Dist decode_labels(const DistanceLabel& a, const DistanceLabel& b) {
    Dist best = a.owner == b.owner ? 0 : INF_DIST;
    std::size_t depth = std::min(a.sublabels.size(), b.sublabels.size());
    for (std::size_t i = 0; i < depth; ++i) {
        const SubLabel& sa = a.sublabels[i];
        const SubLabel& sb = b.sublabels[i];
        if (sa.bag_id != sb.bag_id) break;
        std::size_t x = 0, y = 0;
        while (x < sa.sep_dist.size() && y < sb.sep_dist.size()) {
            if (sa.sep_dist[x].first == sb.sep_dist[y].first) {
                if (sa.sep_dist[x].second != INF_DIST && sb.sep_dist[y].second != INF_DIST)
                    best = std::min(best, sa.sep_dist[x].second + sb.sep_dist[y].second);
                ++x;
                ++y;
            } else if (sa.sep_dist[x].first < sb.sep_dist[y].first)
                ++x;
            else
                ++y;
        }
    }
    if (a.leaf_bag != -1 && a.leaf_bag == b.leaf_bag) {
        auto it = std::lower_bound(a.leaf_row.begin(), a.leaf_row.end(),
                                   std::make_pair(b.owner, Dist(0)));
        if (it != a.leaf_row.end() && it->first == b.owner && it->second != INF_DIST)
            best = std::min(best, it->second);
    }
    return best;
}

// ---- unweighted labels --------------------------------------------------------

LabelResult unweighted_labels(SimNetwork& net, const BddTree& bdd) {
    const PlanarGraph& g = net.graph();
    LabelResult res;
    res.labels.assign(g.n, {});
    for (VertexId v = 0; v < g.n; ++v) res.labels[v].owner = v;
    std::vector<char> marked(g.n, 1);
    int vbits = bits_for(std::max(1, g.n));

    for (int depth = 0; depth <= bdd.max_depth; ++depth) {
        // one concurrent flood phase per level: (bag, separator vertex) for
        // interior bags plus (bag, member) for the leaves finalized here
        std::vector<FloodSpec> specs;
        std::vector<std::pair<int, VertexId>> inst; // (bag, source)
        std::deque<std::vector<char>> masks;
        for (int bid : bdd.by_depth[depth]) {
            const Bag& X = bdd.bags[bid];
            masks.push_back(bag_edge_mask(g, X));
            const std::vector<char>* mask = &masks.back();
            std::vector<VertexId> srcs;
            if (!X.children.empty())
                srcs.assign(X.cycle.begin(), X.cycle.end());
            else
                srcs = X.verts;
            for (VertexId s : srcs) {
                FloodSpec fs;
                fs.sources = {s};
                fs.edge_ok = mask;
                fs.weighted = false;
                fs.value_bits = vbits;
                specs.push_back(fs);
                inst.push_back({bid, s});
            }
        }
        if (specs.empty()) continue;
        auto dist = run_floods(net, "labels-bfs-depth" + std::to_string(depth), specs);
        // the decomposition level itself comes from the cited distributed
        // construction; its rounds are charged, not executed
        {
            PlanarGraph unw = g;
            unw.weighted = false;
            Dist ecc = 0;
            for (Dist d : single_source_distances(unw, bdd.root_vertex).dist)
                if (d != INF_DIST) ecc = std::max(ecc, d);
            net.ledger.charge("bdd-level-" + std::to_string(depth),
                              2LL * std::max<Dist>(1, ecc) * bits_for(g.n),
                              "balanced cycle separator per level");
        }
        // append sublabels / leaf rows
        std::map<int, std::vector<std::size_t>> by_bag;
        for (std::size_t k = 0; k < inst.size(); ++k) by_bag[inst[k].first].push_back(k);
        for (auto& [bid, ks] : by_bag) {
            const Bag& X = bdd.bags[bid];
            if (!X.children.empty()) {
                for (VertexId v : X.verts) {
                    if (!marked[v]) continue;
                    SubLabel sl;
                    sl.bag_id = bid;
                    for (std::size_t k : ks)
                        sl.sep_dist.push_back({inst[k].second, dist[k][v]});
                    std::sort(sl.sep_dist.begin(), sl.sep_dist.end());
                    res.labels[v].sublabels.push_back(std::move(sl));
                }
            } else {
                for (std::size_t k : ks) {
                    VertexId v = inst[k].second;
                    if (!marked[v]) continue;
                    res.labels[v].leaf_bag = bid;
                    for (VertexId u : X.verts)
                        res.labels[v].leaf_row.push_back({u, dist[k][u]});
                    std::sort(res.labels[v].leaf_row.begin(), res.labels[v].leaf_row.end());
                }
            }
        }
        for (int bid : bdd.by_depth[depth])
            if (!bdd.bags[bid].children.empty())
                for (VertexId s : bdd.bags[bid].cycle) marked[s] = 0;
    }
    for (const auto& l : res.labels)
        res.max_label_bits = std::max(res.max_label_bits, l.bits(g.n, g.n));
    return res;
}

// ---- weighted labels ----------------------------------------------------------

LabelResult weighted_labels(SimNetwork& net, const BddTree& bdd) {
    const PlanarGraph& g = net.graph();
    int vbits = bits_for(std::max(1, g.n));
    int db = dist_bits(g);
    Dist maxd = 0;
    // per-bag labels, built bottom-up
    std::vector<std::map<VertexId, DistanceLabel>> bag_labels(bdd.bags.size());

    for (int depth = bdd.max_depth; depth >= 0; --depth) {
        for (int bid : bdd.by_depth[depth]) {
            const Bag& X = bdd.bags[bid];
            std::vector<char> mask = bag_edge_mask(g, X);
            SimTree backbone = backbone_tree(g, X.verts, mask, bag_leader(X));
            if (X.children.empty()) {
                // everyone collects the bag's edges, then solves it locally
                std::map<VertexId, std::vector<Item>> items;
                for (EdgeId e : X.edges) {
                    Item it;
                    it.key = static_cast<std::uint64_t>(e);
                    it.words = {static_cast<std::uint64_t>(g.edges[e].u),
                                static_cast<std::uint64_t>(g.edges[e].v),
                                static_cast<std::uint64_t>(g.edges[e].w)};
                    it.bits = 2 * vbits + db;
                    items[g.edges[e].u].push_back(it);
                }
                auto got = gather_items(net, "wlabel-leaf-up-" + std::to_string(bid),
                                        backbone, items, true);
                broadcast_items(net, "wlabel-leaf-down-" + std::to_string(bid), backbone,
                                got);
                // local all-pairs inside the bag
                std::map<VertexId, int> loc;
                for (std::size_t i = 0; i < X.verts.size(); ++i) loc[X.verts[i]] = i;
                int nn = static_cast<int>(X.verts.size());
                std::vector<std::vector<std::pair<int, Dist>>> adj(nn);
                for (EdgeId e : X.edges) {
                    adj[loc[g.edges[e].u]].push_back({loc[g.edges[e].v], g.edges[e].w});
                    adj[loc[g.edges[e].v]].push_back({loc[g.edges[e].u], g.edges[e].w});
                }
                for (VertexId v : X.verts) {
                    std::vector<Dist> d(nn, INF_DIST);
                    using It = std::pair<Dist, int>;
                    std::priority_queue<It, std::vector<It>, std::greater<It>> pq;
                    d[loc[v]] = 0;
                    pq.push({0, loc[v]});
                    while (!pq.empty()) {
                        auto [dd, x] = pq.top();
                        pq.pop();
                        if (dd > d[x]) continue;
                        for (auto [y, w] : adj[x])
                            if (dd + w < d[y]) {
                                d[y] = dd + w;
                                pq.push({d[y], y});
                            }
                    }
                    DistanceLabel l;
                    l.owner = v;
                    l.leaf_bag = bid;
                    for (int i = 0; i < nn; ++i) {
                        l.leaf_row.push_back({X.verts[i], d[i]});
                        if (d[i] != INF_DIST) maxd = std::max(maxd, d[i]);
                    }
                    std::sort(l.leaf_row.begin(), l.leaf_row.end());
                    bag_labels[bid][v] = std::move(l);
                }
                continue;
            }
            // interior bag: separator vertices publish their child labels
            std::map<VertexId, std::vector<Item>> items;
            std::set<VertexId> cyc(X.cycle.begin(), X.cycle.end());
            int multiplicity = 0;
            for (VertexId s : X.cycle) {
                int m = 0;
                for (int c : X.children) {
                    auto it = bag_labels[c].find(s);
                    if (it == bag_labels[c].end()) continue;
                    ++m;
                    Item item;
                    item.key = (static_cast<std::uint64_t>(s) << 20) |
                               static_cast<std::uint64_t>(c & 0xfffff);
                    item.words = label_words(it->second);
                    item.bits = static_cast<int>(it->second.bits(g.n, std::max<Dist>(1, maxd)));
                    items[s].push_back(std::move(item));
                }
                multiplicity = std::max(multiplicity, m);
            }
            auto got = gather_items(net, "wlabel-up-" + std::to_string(bid), backbone,
                                    items, true);
            broadcast_items(net, "wlabel-down-" + std::to_string(bid), backbone, got);
            std::map<std::pair<VertexId, int>, DistanceLabel> sep_labels;
            for (const Item& it : got) {
                DistanceLabel l = label_from_words(it.words);
                int c = static_cast<int>(it.key & 0xfffff);
                sep_labels[{l.owner, c}] = std::move(l);
            }
            // each vertex runs Dijkstra on its local clique over {v} + S_X
            std::vector<VertexId> svert(X.cycle.begin(), X.cycle.end());
            std::sort(svert.begin(), svert.end());
            svert.erase(std::unique(svert.begin(), svert.end()), svert.end());
            int k = static_cast<int>(svert.size());
            // pairwise separator distances, via any shared child
            std::vector<std::vector<Dist>> sepd(k, std::vector<Dist>(k, INF_DIST));
            for (int c : X.children)
                for (int i = 0; i < k; ++i) {
                    auto li = sep_labels.find({svert[i], c});
                    if (li == sep_labels.end()) continue;
                    for (int j = i + 1; j < k; ++j) {
                        auto lj = sep_labels.find({svert[j], c});
                        if (lj == sep_labels.end()) continue;
                        Dist d = decode_labels(li->second, lj->second);
                        sepd[i][j] = std::min(sepd[i][j], d);
                        sepd[j][i] = sepd[i][j];
                    }
                }
            for (VertexId v : X.verts) {
                // v's own distances to separator vertices through its children
                std::vector<Dist> direct(k, INF_DIST);
                for (int c : X.children) {
                    auto lv = bag_labels[c].find(v);
                    if (lv == bag_labels[c].end()) continue;
                    for (int i = 0; i < k; ++i) {
                        auto ls = sep_labels.find({svert[i], c});
                        if (ls == sep_labels.end()) continue;
                        direct[i] = std::min(direct[i], decode_labels(lv->second, ls->second));
                    }
                }
                // Dijkstra on the clique {v} + separator
                std::vector<Dist> dist(k, INF_DIST);
                std::vector<char> done(k, 0);
                for (int i = 0; i < k; ++i) dist[i] = direct[i];
                for (int round = 0; round < k; ++round) {
                    int best = -1;
                    for (int i = 0; i < k; ++i)
                        if (!done[i] && dist[i] != INF_DIST &&
                            (best == -1 || dist[i] < dist[best]))
                            best = i;
                    if (best == -1) break;
                    done[best] = 1;
                    for (int j = 0; j < k; ++j)
                        if (!done[j] && sepd[best][j] != INF_DIST &&
                            dist[best] + sepd[best][j] < dist[j])
                            dist[j] = dist[best] + sepd[best][j];
                }
                SubLabel sl;
                sl.bag_id = bid;
                for (int i = 0; i < k; ++i) {
                    sl.sep_dist.push_back({svert[i], dist[i]});
                    if (dist[i] != INF_DIST) maxd = std::max(maxd, dist[i]);
                }
                DistanceLabel l;
                l.owner = v;
                l.sublabels.push_back(sl);
                if (!cyc.count(v)) {
                    // extend the unique child label
                    for (int c : X.children) {
                        auto lv = bag_labels[c].find(v);
                        if (lv == bag_labels[c].end()) continue;
                        for (const SubLabel& s : lv->second.sublabels)
                            l.sublabels.push_back(s);
                        l.leaf_bag = lv->second.leaf_bag;
                        l.leaf_row = lv->second.leaf_row;
                        break;
                    }
                }
                bag_labels[bid][v] = std::move(l);
            }
            // drop child label storage to keep memory in check
            for (int c : X.children) bag_labels[c].clear();
        }
        net.ledger.charge("bdd-weighted-level-" + std::to_string(depth),
                          4LL * dist_bits(g) * bits_for(g.n),
                          "decomposition level on the shortest-path tree");
    }
    LabelResult res;
    res.labels.assign(g.n, {});
    for (VertexId v = 0; v < g.n; ++v) {
        auto it = bag_labels[0].find(v);
        require(it != bag_labels[0].end(), "InvalidParams", "missing root label");
        res.labels[v] = it->second;
        res.max_label_bits =
            std::max(res.max_label_bits, res.labels[v].bits(g.n, std::max<Dist>(1, maxd)));
    }
    return res;
}

// ---- cross-pair evaluation shared by both diameter programs -------------------

namespace {

struct CrossSetup {
    std::vector<VertexId> hubs;   // crossing set: separator plus bag boundary
    std::vector<int> child_of;    // per graph vertex: child index or -1
    int bit_count = 1;
};

CrossSetup cross_setup(const BddTree& bdd, int bid) {
    const Bag& X = bdd.bags[bid];
    CrossSetup cs;
    std::set<VertexId> hubs(X.cycle.begin(), X.cycle.end());
    std::vector<char> marked = bdd.marked_mask(bid);
    for (VertexId v : X.verts)
        if (marked[v]) hubs.insert(v);
    cs.hubs.assign(hubs.begin(), hubs.end());
    cs.child_of.assign(bdd.g->n, -1);
    for (std::size_t c = 0; c < X.children.size(); ++c)
        for (VertexId v : bdd.bags[X.children[c]].verts)
            if (cs.child_of[v] == -1) cs.child_of[v] = static_cast<int>(c);
    cs.bit_count = std::max(1, ceil_log2(std::max<std::size_t>(2, X.children.size())));
    return cs;
}

// Tuple of exact global distances to the hubs, decoded locally from labels.
std::vector<Dist> hub_tuple(const LabelResult& labels, const CrossSetup& cs, VertexId v) {
    std::vector<Dist> t(cs.hubs.size());
    for (std::size_t i = 0; i < cs.hubs.size(); ++i)
        t[i] = decode_labels(labels.labels[v], labels.labels[cs.hubs[i]]);
    return t;
}

Dist eval_pair(const std::vector<Dist>& a, const std::vector<Dist>& b) {
    Dist best = INF_DIST;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != INF_DIST && b[i] != INF_DIST) best = std::min(best, a[i] + b[i]);
    return best;
}

} // namespace

DiameterRunResult unweighted_diameter(SimNetwork& net, const BddTree& bdd,
                                      const LabelResult& labels, std::uint64_t seed) {
    const PlanarGraph& g = net.graph();
    DiameterRunResult out;
    int vbits = bits_for(std::max(1, g.n));
    int db = bits_for(std::max(1, g.n));
    std::vector<Dist> bag_value(bdd.bags.size(), 0);

    for (int depth = bdd.max_depth; depth >= 0; --depth) {
        for (int bid : bdd.by_depth[depth]) {
            const Bag& X = bdd.bags[bid];
            std::vector<char> mask = bag_edge_mask(g, X);
            SimTree backbone = backbone_tree(g, X.verts, mask, bag_leader(X));
            std::string tag = "-bag" + std::to_string(bid);
            if (X.children.empty()) {
                // leaves: ship every member label to the leader, solve locally
                std::map<VertexId, std::vector<Item>> items;
                for (VertexId v : X.verts) {
                    Item it;
                    it.key = static_cast<std::uint64_t>(v);
                    it.words = label_words(labels.labels[v]);
                    it.bits = static_cast<int>(labels.labels[v].bits(g.n, g.n));
                    items[v].push_back(std::move(it));
                }
                auto got = gather_items(net, "diam-leaf" + tag, backbone, items, true);
                std::vector<DistanceLabel> ls;
                for (const Item& it : got) ls.push_back(label_from_words(it.words));
                Dist best = 0;
                for (std::size_t i = 0; i < ls.size(); ++i)
                    for (std::size_t j = i + 1; j < ls.size(); ++j)
                        best = std::max(best, decode_labels(ls[i], ls[j]));
                bag_value[bid] = best;
                continue;
            }
            CrossSetup cs = cross_setup(bdd, bid);
            // hub labels travel to everyone
            std::map<VertexId, std::vector<Item>> items;
            for (VertexId q : cs.hubs) {
                Item it;
                it.key = static_cast<std::uint64_t>(q);
                it.words = label_words(labels.labels[q]);
                it.bits = static_cast<int>(labels.labels[q].bits(g.n, g.n));
                items[q].push_back(std::move(it));
            }
            auto got = gather_items(net, "diam-hubs-up" + tag, backbone, items, true);
            broadcast_items(net, "diam-hubs-down" + tag, backbone, got);

            // per-vertex hub tuples, hashed and aggregated with the
            // bit-partition trick; collisions trigger a fresh base
            std::vector<std::vector<Dist>> tuples(X.verts.size());
            for (std::size_t i = 0; i < X.verts.size(); ++i)
                tuples[i] = hub_tuple(labels, cs, X.verts[i]);
            Dist cross = 0;
            for (int attempt = 0;; ++attempt) {
                require(attempt <= 3 * ceil_log2(std::max(2, g.n)) + 4, "RetriesExhausted",
                        "hash aggregation kept colliding");
                HashParams hp = make_hash_params(
                    g.n, static_cast<int>(cs.hubs.size()),
                    seed ^ (0x9e3779b97f4a7c15ULL * (bid * 37 + attempt + 1)));
                std::map<VertexId, std::vector<Item>> agg;
                for (std::size_t i = 0; i < X.verts.size(); ++i) {
                    VertexId v = X.verts[i];
                    std::uint64_t h = tuple_hash(tuples[i], hp);
                    int child = std::max(0, cs.child_of[v]);
                    for (int b = 0; b < cs.bit_count; ++b) {
                        int bit = (child >> b) & 1;
                        Item it;
                        it.key = h * 4 * cs.bit_count + 2 * b + bit;
                        it.words = {h, static_cast<std::uint64_t>(v)};
                        it.bits = 64 + vbits;
                        agg[v].push_back(std::move(it));
                    }
                }
                auto hashes = gather_items(net, "diam-hash-up" + tag, backbone, agg, true);
                // leader requests one representative tuple per distinct item
                std::vector<Item> reqs = hashes;
                broadcast_items(net, "diam-hash-req" + tag, backbone, reqs);
                std::map<VertexId, std::vector<Item>> reps;
                std::set<std::uint64_t> asked;
                for (const Item& it : hashes) {
                    VertexId holder = static_cast<VertexId>(it.words[1]);
                    if (!asked.insert(it.key).second) continue;
                    std::size_t idx =
                        std::lower_bound(X.verts.begin(), X.verts.end(), holder) -
                        X.verts.begin();
                    Item t;
                    t.key = it.key;
                    t.words.push_back(it.words[0]);
                    for (Dist d : tuples[idx])
                        t.words.push_back(static_cast<std::uint64_t>(d));
                    t.bits = 64 + static_cast<int>(cs.hubs.size()) * db;
                    reps[holder].push_back(std::move(t));
                }
                auto rep_items =
                    gather_items(net, "diam-tuples-up" + tag, backbone, reps, true);
                // verification sweep: everyone compares its tuple with the
                // representative of its hash
                broadcast_items(net, "diam-verify" + tag, backbone, rep_items);
                std::map<std::uint64_t, std::vector<Dist>> rep_of; // hash -> tuple
                for (const Item& it : rep_items) {
                    std::vector<Dist> t;
                    for (std::size_t j = 1; j < it.words.size(); ++j)
                        t.push_back(static_cast<Dist>(it.words[j]));
                    rep_of[it.words[0]] = std::move(t);
                }
                bool collision = false;
                for (std::size_t i = 0; i < X.verts.size() && !collision; ++i) {
                    std::uint64_t h = tuple_hash(tuples[i], hp);
                    if (rep_of.count(h) && rep_of[h] != tuples[i]) collision = true;
                }
                if (collision) {
                    ++out.restarts;
                    ++net.ledger.restarts;
                    continue;
                }
                // leader evaluates opposite-bit pairs
                std::map<std::pair<int, int>, std::vector<const std::vector<Dist>*>>
                    by_bit; // (b, bit) -> tuples
                std::map<std::uint64_t, const std::vector<Dist>*> tuple_of;
                for (const Item& it : rep_items) tuple_of[it.key] = &rep_of[it.words[0]];
                for (const Item& it : hashes) {
                    std::uint64_t code = it.key;
                    int bit = static_cast<int>(code & 1);
                    int b = static_cast<int>((code >> 1) % cs.bit_count);
                    by_bit[{b, bit}].push_back(tuple_of[code]);
                }
                for (int b = 0; b < cs.bit_count; ++b) {
                    for (const auto* t0 : by_bit[{b, 0}])
                        for (const auto* t1 : by_bit[{b, 1}]) {
                            Dist d = eval_pair(*t0, *t1);
                            if (d != INF_DIST) cross = std::max(cross, d);
                        }
                }
                break;
            }
            // children maxima rise to this bag's leader
            std::map<VertexId, std::vector<Item>> kid_items;
            for (std::size_t c = 0; c < X.children.size(); ++c) {
                VertexId lead = bag_leader(bdd.bags[X.children[c]]);
                Item it;
                it.key = static_cast<std::uint64_t>(c);
                it.words = {static_cast<std::uint64_t>(bag_value[X.children[c]])};
                it.bits = db;
                kid_items[lead].push_back(std::move(it));
            }
            auto kid = gather_items(net, "diam-children" + tag, backbone, kid_items, true);
            Dist best = cross;
            for (const Item& it : kid)
                best = std::max(best, static_cast<Dist>(it.words[0]));
            bag_value[bid] = best;
        }
    }
    out.value = bag_value[0];
    return out;
}

// ---- SSSP ----------------------------------------------------------------------

SsspResult sssp(SimNetwork& net, const LabelResult& labels, VertexId source) {
    const PlanarGraph& g = net.graph();
    std::vector<char> all_edges(g.m(), 1);
    std::vector<VertexId> verts(g.n);
    for (int v = 0; v < g.n; ++v) verts[v] = v;
    SimTree backbone = backbone_tree(g, verts, all_edges, source);
    Item it;
    it.key = static_cast<std::uint64_t>(source);
    it.words = label_words(labels.labels[source]);
    it.bits = static_cast<int>(labels.labels[source].bits(g.n, g.n));
    SsspResult res;
    broadcast_items(net, "sssp-label", backbone, {it});
    res.broadcast_rounds = net.ledger.phases.back().rounds;
    res.dist.assign(g.n, INF_DIST);
    for (VertexId v = 0; v < g.n; ++v)
        res.dist[v] = decode_labels(labels.labels[v], labels.labels[source]);
    auto nb = exchange_values(net, "sssp-exchange", res.dist, dist_bits(g));
    res.total_rounds = res.broadcast_rounds + net.ledger.phases.back().rounds;
    res.parent.assign(g.n, -1);
    for (VertexId v = 0; v < g.n; ++v) {
        if (v == source) continue;
        VertexId best = -1;
        Dist bestval = INF_DIST;
        for (EdgeId e : g.rot[v]) {
            if (g.edges[e].virt) continue;
            VertexId u = g.edges[e].other(v);
            Dist du = res.dist[u];
            if (du == INF_DIST) continue;
            Dist cand = du + (g.weighted ? g.edges[e].w : 1);
            if (cand == res.dist[v] && (best == -1 || u < best)) {
                best = u;
                bestval = cand;
            }
        }
        (void)bestval;
        res.parent[v] = best;
    }
    (void)nb;
    return res;
}

// ---- portals --------------------------------------------------------------------

PortalSet mark_portals(const BddTree& bdd, int bag, const Rat& spacing) {
    const PlanarGraph& g = *bdd.g;
    const Bag& X = bdd.bags[bag];
    require(!X.cycle.empty(), "InvalidParams", "bag has no separator");
    PortalSet ps;
    ps.spacing = spacing;
    // cycle order with tree/non-tree structure: consecutive cycle vertices
    // joined by base-tree edges form runs; runs split at their depth-minimal
    // vertex into monotone chains
    std::vector<VertexId> cyc = X.cycle;
    int L = static_cast<int>(cyc.size());
    auto base_edge = [&](VertexId a, VertexId b) -> bool {
        auto e = g.find_edge(a, b);
        return e && bdd.in_base_tree[*e];
    };
    // depths in the base tree
    std::vector<int> depth(g.n, -1);
    {
        std::vector<std::vector<VertexId>> adj(g.n);
        for (EdgeId e : bdd.base_tree) {
            adj[g.edges[e].u].push_back(g.edges[e].v);
            adj[g.edges[e].v].push_back(g.edges[e].u);
        }
        std::queue<VertexId> q;
        q.push(bdd.root_vertex);
        depth[bdd.root_vertex] = 0;
        while (!q.empty()) {
            VertexId v = q.front();
            q.pop();
            for (VertexId w : adj[v])
                if (depth[w] == -1) {
                    depth[w] = depth[v] + 1;
                    q.push(w);
                }
        }
    }
    // runs around the cycle (cut where the joining edge is not a tree edge)
    std::vector<std::vector<VertexId>> runs;
    {
        std::vector<int> cut;
        for (int i = 0; i < L; ++i)
            if (!base_edge(cyc[i], cyc[(i + 1) % L])) cut.push_back(i);
        if (cut.empty()) {
            runs.push_back(cyc);
        } else {
            for (std::size_t k = 0; k < cut.size(); ++k) {
                int from = (cut[k] + 1) % L;
                int to = cut[(k + 1) % cut.size()];
                std::vector<VertexId> run;
                for (int i = from;; i = (i + 1) % L) {
                    run.push_back(cyc[i]);
                    if (i == to) break;
                }
                runs.push_back(std::move(run));
            }
        }
    }
    for (auto& run : runs) {
        // split at the depth-minimal vertex: both halves are monotone chains
        int top = 0;
        for (std::size_t i = 1; i < run.size(); ++i)
            if (depth[run[i]] < depth[run[top]]) top = static_cast<int>(i);
        std::vector<std::vector<VertexId>> chains;
        if (top > 0)
            chains.push_back({run.rend() - top - 1, run.rend()}); // run[0..top] reversed
        if (top + 1 < static_cast<int>(run.size()))
            chains.push_back({run.begin() + top, run.end()});
        if (run.size() == 1) chains.push_back(run);
        for (auto& chain : chains) {
            if (chain.empty()) continue;
            ps.segments.push_back(chain);
            // portals: endpoints plus distance-class switches along the chain
            ps.portals.push_back(chain.front());
            Rat acc(0);
            long long cls = 0;
            for (std::size_t i = 1; i < chain.size(); ++i) {
                auto e = g.find_edge(chain[i - 1], chain[i]);
                acc += Rat(e ? g.edges[*e].w : 1);
                long long c = spacing > Rat(0) ? floor_rat(acc / spacing) : 0;
                if (c != cls) {
                    cls = c;
                    ps.portals.push_back(chain[i]);
                }
            }
            ps.portals.push_back(chain.back());
        }
    }
    std::sort(ps.portals.begin(), ps.portals.end());
    ps.portals.erase(std::unique(ps.portals.begin(), ps.portals.end()), ps.portals.end());
    return ps;
}

// ---- approximate weighted diameter ------------------------------------------------

ApproxDiameterResult approx_weighted_diameter(SimNetwork& net, const PlanarGraph& g,
                                              const Rat& eps, std::uint64_t seed) {
    require(eps > Rat(0) && eps <= Rat(1), "InvalidParams", "eps must be in (0,1]");
    // exact labels over the unweighted backbone, then one SSSP for the
    // two-approximation
    BuildOptions bopt;
    bopt.mode = 0;
    BddTree backbone_bdd = build_bdd(g, bfs_tree_edges(g, 0), 0, bopt);
    LabelResult labels = weighted_labels(net, backbone_bdd);
    SsspResult root_sssp = sssp(net, labels, 0);
    Dist ecc = 0;
    for (Dist d : root_sssp.dist)
        if (d != INF_DIST) ecc = std::max(ecc, d);
    ApproxDiameterResult out;
    out.two_approx = std::max<Dist>(1, ecc);
    Rat dtil(out.two_approx);
    Rat delta = eps * dtil / Rat(3);
    int logn = std::max(1, ceil_log2(std::max(2, g.n)));
    Rat eps_portal = eps / Rat(8LL * logn * logn);

    // decomposition over the SSSP tree, weighted mode
    BuildOptions wopt;
    wopt.mode = 1;
    wopt.leaf_threshold =
        std::max<long long>(4, ceil_rat(Rat(logn) * Rat(logn) / eps));
    BddTree bdd = build_bdd(g, sssp_tree_edges(g, 0), 0, wopt);
    net.ledger.charge("bdd-on-sssp", 4LL * dist_bits(g) * logn,
                      "decomposition of the shortest-path tree with shortcuts");

    int vbits = bits_for(std::max(1, g.n));
    int db = dist_bits(g);
    std::vector<Rat> bag_value(bdd.bags.size(), Rat(0));

    for (int depth = bdd.max_depth; depth >= 0; --depth) {
        for (int bid : bdd.by_depth[depth]) {
            const Bag& X = bdd.bags[bid];
            std::vector<char> mask = bag_edge_mask(g, X);
            SimTree backbone = backbone_tree(g, X.verts, mask, bag_leader(X));
            std::string tag = "-wbag" + std::to_string(bid);
            std::vector<char> marked = bdd.marked_mask(bid);
            if (X.children.empty()) {
                // actives broadcast labels; every member maximizes locally
                std::map<VertexId, std::vector<Item>> items;
                for (VertexId v : X.verts) {
                    if (marked[v]) continue;
                    Item it;
                    it.key = static_cast<std::uint64_t>(v);
                    it.words = label_words(labels.labels[v]);
                    it.bits = static_cast<int>(labels.labels[v].bits(g.n, g.n * 64));
                    items[v].push_back(std::move(it));
                }
                auto got = gather_items(net, "adiam-leaf-up" + tag, backbone, items, true);
                broadcast_items(net, "adiam-leaf-down" + tag, backbone, got);
                Dist best = 0;
                std::vector<std::pair<VertexId, Dist>> local;
                for (VertexId v : X.verts) {
                    Dist mine = 0;
                    for (const Item& it : got) {
                        DistanceLabel l = label_from_words(it.words);
                        Dist d = decode_labels(labels.labels[v], l);
                        if (d != INF_DIST) mine = std::max(mine, d);
                    }
                    local.push_back({v, mine});
                    best = std::max(best, mine);
                }
                Dist agreed = converge_max(net, "adiam-leaf-max" + tag, backbone, local, db);
                require(agreed == best, "InvalidParams", "convergecast mismatch");
                bag_value[bid] = Rat(best);
                continue;
            }
            // portals on the separator chains plus the bag boundary
            PortalSet ps = mark_portals(bdd, bid, eps_portal * dtil);
            net.ledger.charge("portal-marking" + tag,
                              2LL * db * static_cast<long long>(ps.segments.size()),
                              "distance classes along separator chains");
            CrossSetup cs = cross_setup(bdd, bid);
            {
                std::set<VertexId> hubs(ps.portals.begin(), ps.portals.end());
                for (VertexId v : X.verts)
                    if (marked[v]) hubs.insert(v);
                cs.hubs.assign(hubs.begin(), hubs.end());
            }
            std::map<VertexId, std::vector<Item>> items;
            for (VertexId q : cs.hubs) {
                Item it;
                it.key = static_cast<std::uint64_t>(q);
                it.words = label_words(labels.labels[q]);
                it.bits = static_cast<int>(labels.labels[q].bits(g.n, g.n * 64));
                items[q].push_back(std::move(it));
            }
            auto got = gather_items(net, "adiam-hubs-up" + tag, backbone, items, true);
            broadcast_items(net, "adiam-hubs-down" + tag, backbone, got);

            std::vector<std::vector<Dist>> tuples(X.verts.size());
            for (std::size_t i = 0; i < X.verts.size(); ++i)
                tuples[i] = hub_tuple(labels, cs, X.verts[i]);

            Rat cross(0);
            for (int attempt = 0;; ++attempt) {
                require(attempt <= 3 * ceil_log2(std::max(2, g.n)) + 4,
                        "RetriesExhausted", "shifted-grid aggregation kept failing");
                ProjectionSpec proj =
                    make_projection(g.n, static_cast<int>(cs.hubs.size()), delta,
                                    seed ^ (0x9e3779b97f4a7c15ULL *
                                            (bid * 101 + attempt + 1)));
                auto cell_of = [&](const std::vector<Dist>& t) {
                    std::uint64_t h = 1469598103934665603ULL;
                    for (int r = 0; r < proj.dim; ++r) {
                        double x = 0;
                        for (std::size_t i = 0; i < t.size(); ++i)
                            x += static_cast<double>(t[i]) * proj.cols[i][r];
                        long long cell = static_cast<long long>(
                            std::floor((x + proj.shift[r]) / proj.cell));
                        h = (h ^ static_cast<std::uint64_t>(cell)) * 1099511628211ULL;
                    }
                    return h;
                };
                std::map<VertexId, std::vector<Item>> agg;
                for (std::size_t i = 0; i < X.verts.size(); ++i) {
                    VertexId v = X.verts[i];
                    std::uint64_t h = cell_of(tuples[i]);
                    int child = std::max(0, cs.child_of[v]);
                    int active = marked[v] ? 0 : 1;
                    for (int b = 0; b < cs.bit_count; ++b) {
                        int bit = (child >> b) & 1;
                        Item it;
                        it.key = h * 8 * cs.bit_count + 4 * b + 2 * bit + active;
                        it.words = {h, static_cast<std::uint64_t>(v)};
                        it.bits = 64 + vbits;
                        agg[v].push_back(std::move(it));
                    }
                }
                auto hashes =
                    gather_items(net, "adiam-cell-up" + tag, backbone, agg, true);
                broadcast_items(net, "adiam-cell-req" + tag, backbone, hashes);
                std::map<VertexId, std::vector<Item>> reps;
                std::set<std::uint64_t> asked;
                for (const Item& it : hashes) {
                    if (!asked.insert(it.key).second) continue;
                    VertexId holder = static_cast<VertexId>(it.words[1]);
                    std::size_t idx =
                        std::lower_bound(X.verts.begin(), X.verts.end(), holder) -
                        X.verts.begin();
                    Item t;
                    t.key = it.key;
                    t.words.push_back(it.words[0]);
                    for (Dist d : tuples[idx])
                        t.words.push_back(static_cast<std::uint64_t>(d));
                    t.bits = 64 + static_cast<int>(cs.hubs.size()) * db;
                    reps[holder].push_back(std::move(t));
                }
                auto rep_items =
                    gather_items(net, "adiam-tuples-up" + tag, backbone, reps, true);
                broadcast_items(net, "adiam-verify" + tag, backbone, rep_items);
                std::map<std::uint64_t, std::vector<Dist>> rep_of; // cell -> tuple
                for (const Item& it : rep_items) {
                    std::vector<Dist> t;
                    for (std::size_t j = 1; j < it.words.size(); ++j)
                        t.push_back(static_cast<Dist>(it.words[j]));
                    rep_of[it.words[0]] = std::move(t);
                }
                // witness check: same cell means tuples within delta
                bool bad = false;
                for (std::size_t i = 0; i < X.verts.size() && !bad; ++i) {
                    std::uint64_t h = cell_of(tuples[i]);
                    auto it = rep_of.find(h);
                    if (it == rep_of.end()) continue;
                    for (std::size_t k = 0; k < tuples[i].size(); ++k) {
                        Dist a = tuples[i][k], b = it->second[k];
                        if (a == INF_DIST || b == INF_DIST) continue;
                        if (Rat(std::llabs(a - b)) > delta) {
                            bad = true;
                            break;
                        }
                    }
                }
                if (bad) {
                    ++out.restarts;
                    ++net.ledger.restarts;
                    continue;
                }
                std::map<std::uint64_t, const std::vector<Dist>*> tuple_of;
                for (const Item& it : rep_items) tuple_of[it.key] = &rep_of[it.words[0]];
                for (int b = 0; b < cs.bit_count; ++b)
                    for (int a0 = 0; a0 < 2; ++a0)
                        for (int a1 = 0; a1 < 2; ++a1) {
                            if (a0 == 0 && a1 == 0) continue; // one side active
                            for (const Item& i0 : hashes) {
                                if (((i0.key >> 1) & 1) != 0) continue;
                                if ((i0.key & 1) != static_cast<std::uint64_t>(a0)) continue;
                                if (static_cast<int>((i0.key >> 2) % cs.bit_count) != b)
                                    continue;
                                for (const Item& i1 : hashes) {
                                    if (((i1.key >> 1) & 1) != 1) continue;
                                    if ((i1.key & 1) != static_cast<std::uint64_t>(a1))
                                        continue;
                                    if (static_cast<int>((i1.key >> 2) % cs.bit_count) != b)
                                        continue;
                                    Dist d = eval_pair(*tuple_of.at(i0.key),
                                                       *tuple_of.at(i1.key));
                                    if (d != INF_DIST)
                                        cross = std::max(cross, Rat(d) + Rat(2) * delta);
                                }
                            }
                        }
                break;
            }
            std::map<VertexId, std::vector<Item>> kid_items;
            for (std::size_t c = 0; c < X.children.size(); ++c) {
                VertexId lead = bag_leader(bdd.bags[X.children[c]]);
                Rat val = bag_value[X.children[c]];
                Item it;
                it.key = static_cast<std::uint64_t>(c);
                it.words = {static_cast<std::uint64_t>(val.numerator()),
                            static_cast<std::uint64_t>(val.denominator())};
                it.bits = 2 * db + 16;
                kid_items[lead].push_back(std::move(it));
            }
            auto kid =
                gather_items(net, "adiam-children" + tag, backbone, kid_items, true);
            Rat best = cross;
            for (const Item& it : kid) {
                Rat v(static_cast<long long>(it.words[0]),
                      static_cast<long long>(it.words[1]));
                best = std::max(best, v);
            }
            bag_value[bid] = best;
        }
        net.ledger.charge("shortcuts-level-" + std::to_string(depth),
                          2LL * dist_bits(g) * bits_for(g.n),
                          "low-congestion shortcuts on the split graph");
    }
    out.estimate = std::max(bag_value[0], dtil);
    return out;
}

// ---- shortcut oracle ---------------------------------------------------------------

ShortcutResult shortcut_oracle(SimNetwork& net,
                               const std::vector<std::vector<VertexId>>& parts) {
    const PlanarGraph& g = net.graph();
    // parts must be disjoint and induce connected subgraphs
    std::vector<int> owner(g.n, -1);
    for (std::size_t i = 0; i < parts.size(); ++i)
        for (VertexId v : parts[i]) {
            require(owner[v] == -1, "DisconnectedPart", "parts are not disjoint");
            owner[v] = static_cast<int>(i);
        }
    ShortcutResult res;
    res.subgraphs.resize(parts.size());
    ShortestPaths bfs;
    {
        PlanarGraph unw = g;
        unw.weighted = false;
        bfs = single_source_distances(unw, 0);
    }
    std::vector<int> load(g.m(), 0);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        std::set<EdgeId> edges;
        std::vector<char> inside(g.n, 0);
        for (VertexId v : parts[i]) inside[v] = 1;
        // induced part edges
        for (VertexId v : parts[i])
            for (EdgeId e : g.rot[v]) {
                if (g.edges[e].virt) continue;
                if (inside[g.edges[e].other(v)]) edges.insert(e);
            }
        // connectivity check on the induced part
        {
            std::set<VertexId> seen;
            std::queue<VertexId> q;
            q.push(parts[i][0]);
            seen.insert(parts[i][0]);
            while (!q.empty()) {
                VertexId v = q.front();
                q.pop();
                for (EdgeId e : g.rot[v]) {
                    if (g.edges[e].virt || !edges.count(e)) continue;
                    VertexId w = g.edges[e].other(v);
                    if (inside[w] && !seen.count(w)) {
                        seen.insert(w);
                        q.push(w);
                    }
                }
            }
            require(seen.size() == parts[i].size(), "DisconnectedPart",
                    "part does not induce a connected subgraph");
        }
        // Steiner closure in the BFS tree: root paths of every part vertex
        for (VertexId v : parts[i])
            for (VertexId u = v; bfs.parent[u] != -1; u = bfs.parent[u]) {
                auto e = g.find_edge(u, bfs.parent[u]);
                if (!e || edges.count(*e)) break;
                edges.insert(*e);
            }
        res.subgraphs[i].assign(edges.begin(), edges.end());
        for (EdgeId e : edges) ++load[e];
        // dilation: BFS within the shortcut subgraph
        std::vector<char> emask(g.m(), 0);
        for (EdgeId e : edges) emask[e] = 1;
        std::vector<char> vmask(g.n, 0);
        for (EdgeId e : edges) {
            vmask[g.edges[e].u] = 1;
            vmask[g.edges[e].v] = 1;
        }
        PlanarGraph unw = g;
        unw.weighted = false;
        // distance over the edge subset
        std::vector<Dist> dist(g.n, INF_DIST);
        std::queue<VertexId> q;
        q.push(parts[i][0]);
        dist[parts[i][0]] = 0;
        Dist dia = 0;
        while (!q.empty()) {
            VertexId v = q.front();
            q.pop();
            for (EdgeId e : g.rot[v]) {
                if (!emask[e]) continue;
                VertexId w = g.edges[e].other(v);
                if (dist[w] == INF_DIST) {
                    dist[w] = dist[v] + 1;
                    dia = std::max(dia, dist[w]);
                    q.push(w);
                }
            }
        }
        res.max_dilation = std::max(res.max_dilation, 2 * dia);
    }
    for (EdgeId e = 0; e < g.m(); ++e)
        res.max_congestion = std::max(res.max_congestion, static_cast<long long>(load[e]));
    Dist ecc = 0;
    for (Dist d : bfs.dist)
        if (d != INF_DIST) ecc = std::max(ecc, d);
    net.ledger.charge("shortcut-construction",
                      2LL * std::max<Dist>(1, ecc) * bits_for(g.n),
                      "low-congestion shortcut computation");
    return res;
}

// ---- split graph --------------------------------------------------------------------

SplitGraph split_graph(const PlanarGraph& g, const BddTree& bdd, int depth) {
    // bags forming the level-depth cover: bags at that depth plus shallower leaves
    std::vector<int> level;
    for (const Bag& b : bdd.bags)
        if (b.depth == depth || (b.is_leaf && b.depth < depth)) level.push_back(b.id);

    SplitGraph sg;
    std::vector<std::vector<int>> bags_of(g.n);
    for (int bid : level)
        for (VertexId v : bdd.bags[bid].verts) bags_of[v].push_back(bid);

    sg.copies_of.assign(g.n, {});
    // originals first, copies after
    for (VertexId v = 0; v < g.n; ++v) {
        sg.orig_of.push_back(v);
        sg.bag_of.push_back(bags_of[v].size() == 1 ? bags_of[v][0] : -1);
        sg.copies_of[v].push_back(v);
    }
    std::map<std::pair<VertexId, int>, VertexId> copy_id; // (v, bag) -> split vertex
    for (VertexId v = 0; v < g.n; ++v) {
        if (bags_of[v].size() <= 1) continue;
        for (int bid : bags_of[v]) {
            VertexId c = static_cast<VertexId>(sg.orig_of.size());
            copy_id[{v, bid}] = c;
            sg.orig_of.push_back(v);
            sg.bag_of.push_back(bid);
            sg.copies_of[v].push_back(c);
        }
    }
    sg.graph.n = static_cast<int>(sg.orig_of.size());
    sg.graph.rot.assign(sg.graph.n, {});
    sg.graph.weighted = g.weighted;

    auto image = [&](VertexId v, int bid) -> VertexId {
        auto it = copy_id.find({v, bid});
        return it == copy_id.end() ? v : it->second;
    };
    // one edge per (bag, bag-edge); endpoints move to the bag copies
    std::map<std::pair<int, EdgeId>, EdgeId> new_edge;
    for (int bid : level)
        for (EdgeId e : bdd.bags[bid].edges) {
            EdgeId ne = sg.graph.m();
            sg.graph.edges.push_back(Edge{image(g.edges[e].u, bid),
                                          image(g.edges[e].v, bid), g.edges[e].w, false});
            new_edge[{bid, e}] = ne;
        }
    // attachment edges
    std::map<std::pair<VertexId, int>, EdgeId> attach;
    for (auto& [key, c] : copy_id) {
        EdgeId ne = sg.graph.m();
        sg.graph.edges.push_back(Edge{key.first, c, 1, false});
        attach[key] = ne;
    }
    // rotations: copies follow the bag-local order with the attachment in an
    // exterior corner; shared originals carry only attachments, ordered by
    // each bag's first edge in the global rotation
    for (int bid : level) {
        const Bag& B = bdd.bags[bid];
        std::vector<char> in_bag(g.m(), 0);
        for (EdgeId e : B.edges) in_bag[e] = 1;
        for (VertexId v : B.verts) {
            VertexId img = image(v, bid);
            std::vector<EdgeId> lrot;
            for (EdgeId e : g.rot[v])
                if (in_bag[e]) lrot.push_back(new_edge[{bid, e}]);
            if (img == v) {
                sg.graph.rot[v] = lrot;
                continue;
            }
            // insert the attachment after an exterior corner when known
            int pos = static_cast<int>(lrot.size());
            auto it = B.ext.find(v);
            if (it != B.ext.end())
                for (std::size_t k = 0; k < it->second.size(); ++k)
                    if (it->second[k]) {
                        pos = static_cast<int>(k) + 1;
                        break;
                    }
            lrot.insert(lrot.begin() + std::min<std::size_t>(pos, lrot.size()),
                        attach[{v, bid}]);
            sg.graph.rot[img] = lrot;
        }
    }
    for (VertexId v = 0; v < g.n; ++v) {
        if (bags_of[v].size() <= 1) continue;
        // order attachments by the first bag edge around v
        std::vector<std::pair<int, int>> order; // (rot position, bag)
        for (int bid : bags_of[v]) {
            std::vector<char> in_bag(g.m(), 0);
            for (EdgeId e : bdd.bags[bid].edges) in_bag[e] = 1;
            int first = 1 << 30;
            for (std::size_t i = 0; i < g.rot[v].size(); ++i)
                if (in_bag[g.rot[v][i]]) {
                    first = static_cast<int>(i);
                    break;
                }
            order.push_back({first, bid});
        }
        std::sort(order.begin(), order.end());
        for (auto [pos, bid] : order) sg.graph.rot[v].push_back(attach[{v, bid}]);
    }
    for (int bid : level) {
        std::vector<VertexId> part;
        for (VertexId v : bdd.bags[bid].verts) part.push_back(image(v, bid));
        std::sort(part.begin(), part.end());
        sg.parts.push_back(std::move(part));
    }
    return sg;
}

} // namespace pmk
