#pragma once

// Euler-tour forest over a splay tree: Cut, Join, AddSubtree, GetValue in
// O(log n) amortized. Values live on the open occurrence of each vertex;
// lazy tags accumulate additively.

#include <cstdint>
#include <vector>

#include "pmk/core.hpp"

namespace pmk {

// V needs: default construction (zero), operator+=, operator==.
template <class V>
class EulerForest {
public:
    explicit EulerForest(int n, const std::vector<V>& init) : n_(n), parent_(n, -1) {
        nodes_.resize(2 * n);
        for (int v = 0; v < n; ++v) {
            nodes_[open(v)].val = init[v];
            // each vertex starts as its own one-vertex tree: (open, close)
            attach_pair(v);
        }
    }

    int parent(int v) const { return parent_[v]; }

    // Detaches v (and its subtree) from its parent.
    void cut(int v) {
        require(parent_[v] != -1, "InvalidParams", "cut on a root");
        parent_[v] = -1;
        // carve out [open(v), close(v)]
        auto [a, b] = split_before(open(v));
        auto [c, d] = split_after(close(v));
        (void)c;
        join_trees(a, d);
    }

    // Attaches root v under p (right after open(p) in the tour).
    void link(int v, int p) {
        require(parent_[v] == -1, "InvalidParams", "link of a non-root");
        parent_[v] = p;
        auto [a, b] = split_after(open(p));
        join_trees(join_trees(a, root_of(open(v))), b);
    }

    void add_subtree(int v, const V& delta) {
        auto [a, b] = split_before(open(v));
        auto [c, d] = split_after(close(v));
        if (c != -1) {
            push_into(c, delta);
        }
        join_trees(join_trees(a, c), d);
    }

    V value(int v) {
        splay(open(v));
        return nodes_[open(v)].val;
    }

    bool is_root(int v) const { return parent_[v] == -1; }

private:
    struct Node {
        int l = -1, r = -1, p = -1;
        V val{};
        V pending{};
        bool has_pending = false;
    };

    int n_;
    std::vector<Node> nodes_;
    std::vector<int> parent_;

    int open(int v) const { return 2 * v; }
    int close(int v) const { return 2 * v + 1; }

    void attach_pair(int v) {
        nodes_[open(v)].r = close(v);
        nodes_[close(v)].p = open(v);
    }

    void push_into(int x, const V& delta) {
        nodes_[x].val += delta;
        nodes_[x].pending += delta;
        nodes_[x].has_pending = true;
    }

    void push_down(int x) {
        if (!nodes_[x].has_pending) return;
        if (nodes_[x].l != -1) push_into(nodes_[x].l, nodes_[x].pending);
        if (nodes_[x].r != -1) push_into(nodes_[x].r, nodes_[x].pending);
        nodes_[x].pending = V{};
        nodes_[x].has_pending = false;
    }

    void rotate(int x) {
        int p = nodes_[x].p;
        int gp = nodes_[p].p;
        if (gp != -1) (nodes_[gp].l == p ? nodes_[gp].l : nodes_[gp].r) = x;
        nodes_[x].p = gp;
        if (nodes_[p].l == x) {
            nodes_[p].l = nodes_[x].r;
            if (nodes_[x].r != -1) nodes_[nodes_[x].r].p = p;
            nodes_[x].r = p;
        } else {
            nodes_[p].r = nodes_[x].l;
            if (nodes_[x].l != -1) nodes_[nodes_[x].l].p = p;
            nodes_[x].l = p;
        }
        nodes_[p].p = x;
    }

    void splay(int x) {
        // push pending tags down the whole access path first
        static thread_local std::vector<int> path;
        path.clear();
        for (int y = x; y != -1; y = nodes_[y].p) path.push_back(y);
        for (auto it = path.rbegin(); it != path.rend(); ++it) push_down(*it);
        while (nodes_[x].p != -1) {
            int p = nodes_[x].p;
            int gp = nodes_[p].p;
            if (gp != -1) {
                bool zigzig = (nodes_[gp].l == p) == (nodes_[p].l == x);
                rotate(zigzig ? p : x);
            }
            rotate(x);
        }
    }

    int root_of(int x) {
        while (nodes_[x].p != -1) x = nodes_[x].p;
        return x;
    }

    // Splits the sequence containing x into (before x, x and after).
    std::pair<int, int> split_before(int x) {
        splay(x);
        int left = nodes_[x].l;
        if (left != -1) {
            nodes_[left].p = -1;
            nodes_[x].l = -1;
        }
        return {left, x};
    }

    // Splits into (up to and including x, after x).
    std::pair<int, int> split_after(int x) {
        splay(x);
        int right = nodes_[x].r;
        if (right != -1) {
            nodes_[right].p = -1;
            nodes_[x].r = -1;
        }
        return {x, right};
    }

    int join_trees(int a, int b) {
        if (a == -1) return b;
        if (b == -1) return a;
        // splay the last node of a, then hang b off it
        int x = a;
        push_down(x);
        while (nodes_[x].r != -1) {
            x = nodes_[x].r;
            push_down(x);
        }
        splay(x);
        nodes_[x].r = b;
        nodes_[b].p = x;
        return x;
    }
};

// Residue arithmetic value for the hash shadow forest.
struct ModValue {
    std::uint64_t v = 0;
    std::uint64_t p = 0; // 0 = uninitialized zero

    ModValue& operator+=(const ModValue& o) {
        if (p == 0) p = o.p;
        if (o.p == 0) return *this;
        v = (v + o.v) % p;
        return *this;
    }
    bool operator==(const ModValue& o) const { return v == o.v; }
};

// Fixed-dimension real vector value for the projection shadow forest.
struct VecValue {
    std::vector<double> v;

    VecValue& operator+=(const VecValue& o) {
        if (v.empty()) v.assign(o.v.size(), 0.0);
        for (std::size_t i = 0; i < o.v.size(); ++i) v[i] += o.v[i];
        return *this;
    }
    bool operator==(const VecValue& o) const { return v == o.v; }
};

} // namespace pmk
