#include "pmk/sim.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

namespace pmk {

std::string SimLedger::to_json() const {
    std::ostringstream os;
    os << "{\n  \"executed_rounds\": " << executed_rounds()
       << ",\n  \"charged_rounds\": " << charged_rounds()
       << ",\n  \"total_rounds\": " << total_rounds() << ",\n  \"total_bits\": "
       << total_bits() << ",\n  \"restarts\": " << restarts << ",\n  \"transcript\": \""
       << std::hex << transcript_hash << std::dec << "\",\n  \"phases\": [";
    for (std::size_t i = 0; i < phases.size(); ++i) {
        const auto& p = phases[i];
        os << (i ? "," : "") << "\n    {\"name\": \"" << p.name
           << "\", \"rounds\": " << p.rounds << ", \"frames\": " << p.frames
           << ", \"bits\": " << p.bits << "}";
    }
    os << "\n  ],\n  \"charges\": [";
    for (std::size_t i = 0; i < charges.size(); ++i) {
        const auto& c = charges[i];
        os << (i ? "," : "") << "\n    {\"what\": \"" << c.what
           << "\", \"rounds\": " << c.rounds << ", \"citation\": \"" << c.citation
           << "\"}";
    }
    os << "\n  ]\n}\n";
    return os.str();
}

long long SimNetwork::run_phase(const std::string& name, const InitFn& init,
                                const StepFn& step, long long round_cap) {
    for (auto& q : queues_) q.clear();
    pending_.clear();
    init(*this);
    SimPhase rec;
    rec.name = name;
    if (round_cap < 0)
        round_cap = 256LL * (g_->n + 16) * (g_->n + 16);
    long long round = 0;
    while (!pending_.empty()) {
        ++round;
        require(round <= round_cap, "NonTermination",
                "phase '" + name + "' exceeded the round cap");
        // one frame per directed edge, in dart order
        std::vector<int> darts;
        darts.swap(pending_);
        std::sort(darts.begin(), darts.end());
        darts.erase(std::unique(darts.begin(), darts.end()), darts.end());
        std::map<VertexId, Inbox> inboxes;
        for (int dart : darts) {
            if (queues_[dart].empty()) continue;
            Frame f = std::move(queues_[dart].front());
            queues_[dart].pop_front();
            if (!queues_[dart].empty()) pending_.push_back(dart);
            ledger.note_delivery(round, dart, f);
            ++rec.frames;
            rec.bits += f.bits();
            inboxes[g_->head(dart)].push_back({g_->tail(dart), dart_edge(dart), std::move(f)});
        }
        for (auto& [v, inbox] : inboxes) step(v, round, inbox, *this);
    }
    rec.rounds = round;
    ledger.phases.push_back(rec);
    return round;
}

// ---- floods -----------------------------------------------------------------

std::vector<std::vector<Dist>> run_floods(SimNetwork& net, const std::string& phase,
                                          const std::vector<FloodSpec>& specs) {
    const PlanarGraph& g = net.graph();
    require(specs.size() <= 65535, "InvalidParams", "too many flood instances");
    std::vector<std::vector<Dist>> dist(specs.size(),
                                        std::vector<Dist>(g.n, INF_DIST));
    auto edge_allowed = [&](std::size_t inst, EdgeId e) {
        if (g.edges[e].virt) return false;
        return !specs[inst].edge_ok || (*specs[inst].edge_ok)[e];
    };
    auto announce = [&](SimNetwork& n2, std::size_t inst, VertexId v) {
        for (EdgeId e : g.rot[v]) {
            if (!edge_allowed(inst, e)) continue;
            Frame f;
            f.phase = 1;
            f.instance = static_cast<std::uint16_t>(inst);
            f.key = static_cast<std::uint64_t>(dist[inst][v]);
            f.payload_bits = specs[inst].value_bits;
            n2.send(v, e, std::move(f));
        }
    };
    auto init = [&](SimNetwork& n2) {
        for (std::size_t i = 0; i < specs.size(); ++i)
            for (VertexId s : specs[i].sources) {
                dist[i][s] = 0;
                announce(n2, i, s);
            }
    };
    auto step = [&](VertexId v, long long, const SimNetwork::Inbox& inbox,
                    SimNetwork& n2) {
        std::set<std::size_t> improved;
        for (const auto& d : inbox) {
            std::size_t inst = d.frame.instance;
            if (!edge_allowed(inst, d.via)) continue;
            Dist w = specs[inst].weighted ? g.edges[d.via].w : 1;
            Dist cand = static_cast<Dist>(d.frame.key) + w;
            if (cand < dist[inst][v]) {
                dist[inst][v] = cand;
                improved.insert(inst);
            }
        }
        for (std::size_t inst : improved) announce(n2, inst, v);
    };
    net.run_phase(phase, init, step);
    return dist;
}

SimTree SimTree::from_parents(const PlanarGraph& g, const std::vector<VertexId>& par) {
    SimTree t;
    t.parent = par;
    t.parent_edge.assign(g.n, -1);
    for (VertexId v = 0; v < g.n; ++v) {
        if (par[v] == -1) continue;
        auto e = g.find_edge(v, par[v]);
        require(e.has_value(), "InvalidParams", "tree parent edge missing");
        t.parent_edge[v] = *e;
    }
    for (VertexId v = 0; v < g.n; ++v)
        if (par[v] == -1 && t.root == -1) t.root = v;
    for (VertexId v = 0; v < g.n; ++v) {
        int d = 0;
        for (VertexId u = v; u != -1 && par[u] != -1; u = par[u]) ++d;
        t.depth = std::max(t.depth, d);
    }
    return t;
}

SimTree backbone_tree(const PlanarGraph& g, const std::vector<VertexId>& verts,
                      const std::vector<char>& edge_ok, VertexId root) {
    std::vector<VertexId> par(g.n, -1);
    std::vector<char> seen(g.n, 0);
    std::queue<VertexId> q;
    q.push(root);
    seen[root] = 1;
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop();
        for (EdgeId e : g.rot[v]) {
            if (g.edges[e].virt || !edge_ok[e]) continue;
            VertexId w = g.edges[e].other(v);
            if (!seen[w]) {
                seen[w] = 1;
                par[w] = v;
                q.push(w);
            }
        }
    }
    for (VertexId v : verts)
        require(seen[v], "InvalidParams", "backbone does not reach every vertex");
    return SimTree::from_parents(g, par);
}

namespace {

struct ItemBuf {
    Item item;
    int bits_seen = 0;
    bool complete = false;
};

int fragments_of(const Item& it, int beta) {
    int cap = beta - 40;
    return std::max(1, (it.bits + cap - 1) / cap);
}

} // namespace

std::vector<Item> gather_items(SimNetwork& net, const std::string& phase,
                               const SimTree& tree,
                               const std::map<VertexId, std::vector<Item>>& items,
                               bool dedup) {
    const PlanarGraph& g = net.graph();
    int beta = net.beta_bits;
    std::vector<std::set<std::uint64_t>> seen(g.n);
    std::map<std::uint64_t, Item> collected; // at the root
    // per-vertex send plan: fragments already queued when the item was first
    // learned; a fragment carries the whole payload words (bit accounting
    // uses the declared size)
    auto forward = [&](SimNetwork& n2, VertexId v, const Item& it) {
        if (tree.parent[v] == -1) {
            collected.emplace(it.key, it);
            return;
        }
        int frags = fragments_of(it, beta);
        int remaining = it.bits;
        for (int k = 0; k < frags; ++k) {
            Frame f;
            f.phase = 2;
            f.instance = static_cast<std::uint16_t>(std::min(frags - 1 - k, 65535));
            f.key = it.key;
            f.payload_bits = std::min(remaining, beta - 40);
            remaining -= f.payload_bits;
            if (k == frags - 1) f.words = it.words;
            n2.send(v, tree.parent_edge[v], std::move(f));
        }
    };
    std::map<std::tuple<VertexId, EdgeId, std::uint64_t>, ItemBuf> bufs;
    auto init = [&](SimNetwork& n2) {
        for (const auto& [v, list] : items)
            for (const Item& it : list) {
                if (dedup && seen[v].count(it.key)) continue;
                seen[v].insert(it.key);
                forward(n2, v, it);
            }
    };
    auto step = [&](VertexId v, long long, const SimNetwork::Inbox& inbox,
                    SimNetwork& n2) {
        for (const auto& d : inbox) {
            if (d.frame.phase != 2) continue;
            auto& buf = bufs[{v, d.via, d.frame.key}];
            buf.bits_seen += d.frame.payload_bits;
            if (d.frame.instance == 0) { // last fragment
                buf.item.key = d.frame.key;
                buf.item.words = d.frame.words;
                buf.item.bits = buf.bits_seen;
                buf.bits_seen = 0;
                if (dedup && seen[v].count(buf.item.key)) continue;
                seen[v].insert(buf.item.key);
                forward(n2, v, buf.item);
            }
        }
    };
    net.run_phase(phase, init, step);
    std::vector<Item> out;
    for (auto& [k, it] : collected) out.push_back(it);
    return out;
}

void broadcast_items(SimNetwork& net, const std::string& phase, const SimTree& tree,
                     const std::vector<Item>& items) {
    const PlanarGraph& g = net.graph();
    int beta = net.beta_bits;
    std::vector<std::vector<std::pair<VertexId, EdgeId>>> kids(g.n);
    for (VertexId v = 0; v < g.n; ++v)
        if (tree.parent[v] != -1) kids[tree.parent[v]].push_back({v, tree.parent_edge[v]});
    auto forward = [&](SimNetwork& n2, VertexId v, const Item& it) {
        for (auto [c, e] : kids[v]) {
            int frags = fragments_of(it, beta);
            int remaining = it.bits;
            for (int k = 0; k < frags; ++k) {
                Frame f;
                f.phase = 3;
                f.instance = static_cast<std::uint16_t>(std::min(frags - 1 - k, 65535));
                f.key = it.key;
                f.payload_bits = std::min(remaining, beta - 40);
                remaining -= f.payload_bits;
                if (k == frags - 1) f.words = it.words;
                n2.send(v, e, std::move(f));
            }
        }
    };
    std::map<std::tuple<VertexId, EdgeId, std::uint64_t>, ItemBuf> bufs;
    auto init = [&](SimNetwork& n2) {
        for (const Item& it : items) forward(n2, tree.root, it);
    };
    auto step = [&](VertexId v, long long, const SimNetwork::Inbox& inbox,
                    SimNetwork& n2) {
        for (const auto& d : inbox) {
            if (d.frame.phase != 3) continue;
            auto& buf = bufs[{v, d.via, d.frame.key}];
            buf.bits_seen += d.frame.payload_bits;
            if (d.frame.instance == 0) {
                Item it;
                it.key = d.frame.key;
                it.words = d.frame.words;
                it.bits = buf.bits_seen;
                buf.bits_seen = 0;
                forward(n2, v, it);
            }
        }
    };
    net.run_phase(phase, init, step);
}

Dist converge_max(SimNetwork& net, const std::string& phase, const SimTree& tree,
                  const std::vector<std::pair<VertexId, Dist>>& values, int value_bits) {
    const PlanarGraph& g = net.graph();
    std::vector<Dist> best(g.n, -1);
    std::vector<int> waiting(g.n, 0);
    std::vector<char> in_tree(g.n, 0);
    for (VertexId v = 0; v < g.n; ++v)
        if (tree.parent[v] != -1 || tree.root == v) in_tree[v] = 1;
    for (VertexId v = 0; v < g.n; ++v)
        if (in_tree[v] && tree.parent[v] != -1) ++waiting[tree.parent[v]];
    for (auto [v, x] : values) best[v] = std::max(best[v], x);
    auto send_up = [&](SimNetwork& n2, VertexId v) {
        Frame f;
        f.phase = 4;
        f.key = static_cast<std::uint64_t>(best[v] + 1); // shift so -1 encodes empty
        f.payload_bits = value_bits;
        n2.send(v, tree.parent_edge[v], std::move(f));
    };
    auto init = [&](SimNetwork& n2) {
        for (VertexId v = 0; v < g.n; ++v)
            if (in_tree[v] && waiting[v] == 0 && tree.parent[v] != -1) send_up(n2, v);
    };
    auto step = [&](VertexId v, long long, const SimNetwork::Inbox& inbox,
                    SimNetwork& n2) {
        for (const auto& d : inbox) {
            if (d.frame.phase != 4) continue;
            best[v] = std::max(best[v], static_cast<Dist>(d.frame.key) - 1);
            if (--waiting[v] == 0 && tree.parent[v] != -1) send_up(n2, v);
        }
    };
    net.run_phase(phase, init, step);
    return best[tree.root];
}

std::vector<std::vector<std::pair<VertexId, Dist>>> exchange_values(
    SimNetwork& net, const std::string& phase, const std::vector<Dist>& value,
    int value_bits) {
    const PlanarGraph& g = net.graph();
    std::vector<std::vector<std::pair<VertexId, Dist>>> out(g.n);
    auto init = [&](SimNetwork& n2) {
        for (VertexId v = 0; v < g.n; ++v)
            for (EdgeId e : g.rot[v]) {
                if (g.edges[e].virt) continue;
                Frame f;
                f.phase = 5;
                f.key = static_cast<std::uint64_t>(value[v]);
                f.payload_bits = value_bits;
                n2.send(v, e, std::move(f));
            }
    };
    auto step = [&](VertexId v, long long, const SimNetwork::Inbox& inbox, SimNetwork&) {
        for (const auto& d : inbox)
            out[v].push_back({d.from, static_cast<Dist>(d.frame.key)});
    };
    net.run_phase(phase, init, step);
    return out;
}

} // namespace pmk
