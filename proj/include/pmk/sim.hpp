#pragma once

// Deterministic synchronous message-passing simulator. Per round, each
// directed edge delivers at most one frame of at most beta_msg bits
// (frame format: len:16 | phase:8 | seq:16 | payload). Concurrent program
// instances share edges through FIFO queues, so congestion shows up as
// extra rounds instead of a separate accounting step.

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pmk/graph.hpp"

namespace pmk {

struct Frame {
    std::uint8_t phase = 0;
    std::uint16_t instance = 0;
    std::uint64_t key = 0;
    std::vector<std::uint64_t> words;
    int payload_bits = 0;

    int bits() const { return 40 + payload_bits; }
};

struct SimCharge {
    std::string what;
    long long rounds = 0;
    std::string citation;
};

struct SimPhase {
    std::string name;
    long long rounds = 0;
    long long frames = 0;
    long long bits = 0;
};

class SimLedger {
public:
    std::vector<SimPhase> phases;
    std::vector<SimCharge> charges;
    int restarts = 0;

    long long executed_rounds() const {
        long long r = 0;
        for (const auto& p : phases) r += p.rounds;
        return r;
    }
    long long charged_rounds() const {
        long long r = 0;
        for (const auto& c : charges) r += c.rounds;
        return r;
    }
    long long total_rounds() const { return executed_rounds() + charged_rounds(); }
    long long total_bits() const {
        long long b = 0;
        for (const auto& p : phases) b += p.bits;
        return b;
    }

    void charge(const std::string& what, long long rounds, const std::string& citation) {
        charges.push_back({what, rounds, citation});
    }

    std::uint64_t transcript_hash = 1469598103934665603ULL;
    void note_delivery(long long round, int dart, const Frame& f) {
        auto mix = [&](std::uint64_t x) {
            transcript_hash = (transcript_hash ^ x) * 1099511628211ULL;
        };
        mix(static_cast<std::uint64_t>(round));
        mix(static_cast<std::uint64_t>(dart));
        mix(f.key);
        mix(static_cast<std::uint64_t>(f.bits()));
    }

    std::string to_json() const;
};

class SimNetwork {
public:
    SimNetwork(const PlanarGraph& g, std::uint64_t seed)
        : g_(&g), seed_(seed), queues_(2 * g.m()) {
        beta_bits = std::max(64, 4 * ceil_log2(std::max(2, g.n)));
    }

    const PlanarGraph& graph() const { return *g_; }
    std::uint64_t seed() const { return seed_; }
    int beta_bits = 64;
    SimLedger ledger;

    // Sending is only legal from inside step callbacks; frames queue on the
    // directed edge and drain one per round.
    void send(VertexId from, EdgeId via, Frame f) {
        require(f.bits() <= beta_bits, "MessageOverflow",
                "frame of " + std::to_string(f.bits()) + " bits exceeds beta=" +
                    std::to_string(beta_bits));
        int dart = g_->edges[via].u == from ? dart_fwd(via) : dart_rev(via);
        if (queues_[dart].empty()) pending_.push_back(dart);
        queues_[dart].push_back(std::move(f));
    }

    struct Delivery {
        VertexId from;
        EdgeId via;
        Frame frame;
    };
    using Inbox = std::vector<Delivery>;
    using InitFn = std::function<void(SimNetwork&)>;
    using StepFn = std::function<void(VertexId, long long round, const Inbox&, SimNetwork&)>;

    // Runs until quiescence; returns executed rounds and appends a phase
    // record to the ledger.
    long long run_phase(const std::string& name, const InitFn& init, const StepFn& step,
                        long long round_cap = -1);

private:
    const PlanarGraph* g_;
    std::uint64_t seed_;
    std::vector<std::deque<Frame>> queues_;
    std::vector<int> pending_; // darts with queued frames (may hold duplicates)
};

// ---- reusable programs -----------------------------------------------------

struct FloodSpec {
    std::vector<VertexId> sources;
    const std::vector<char>* edge_ok = nullptr; // nullptr: every real edge
    bool weighted = false;
    int value_bits = 32;
};

// Concurrent BFS / Bellman-Ford floods; instance i writes its distance array
// into the result. Rounds include queueing delays on shared edges.
std::vector<std::vector<Dist>> run_floods(SimNetwork& net, const std::string& phase,
                                          const std::vector<FloodSpec>& specs);

struct SimTree {
    std::vector<VertexId> parent;     // -1 at the root
    std::vector<EdgeId> parent_edge;  // -1 at the root
    VertexId root = -1;
    int depth = 0;

    static SimTree from_parents(const PlanarGraph& g, const std::vector<VertexId>& par);
};

// BFS backbone of a vertex subset over an edge subset (computed locally, used
// as the communication tree of gather/broadcast phases).
SimTree backbone_tree(const PlanarGraph& g, const std::vector<VertexId>& verts,
                      const std::vector<char>& edge_ok, VertexId root);

struct Item {
    std::uint64_t key = 0;
    std::vector<std::uint64_t> words;
    int bits = 64;
};

// Pipelined gather to the root with duplicate suppression by key; returns the
// root's collection in key order.
std::vector<Item> gather_items(SimNetwork& net, const std::string& phase,
                               const SimTree& tree,
                               const std::map<VertexId, std::vector<Item>>& items,
                               bool dedup = true);

// Pipelined broadcast from the root; every tree vertex receives all items.
void broadcast_items(SimNetwork& net, const std::string& phase, const SimTree& tree,
                     const std::vector<Item>& items);

// Single max-convergecast along the tree.
Dist converge_max(SimNetwork& net, const std::string& phase, const SimTree& tree,
                  const std::vector<std::pair<VertexId, Dist>>& values, int value_bits);

// One-round value exchange with all neighbours; result[v] lists (neighbour,
// value) pairs in rotation order.
std::vector<std::vector<std::pair<VertexId, Dist>>> exchange_values(
    SimNetwork& net, const std::string& phase, const std::vector<Dist>& value,
    int value_bits);

inline int bits_for(std::uint64_t x) { return std::max(1, ceil_log2(x + 1)); }

} // namespace pmk
