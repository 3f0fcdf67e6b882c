#include "pmk/fast_tuples.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace pmk {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(u128(a) * b % p); }

u64 powmod(u64 a, u64 e, u64 p) {
    u64 r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

bool is_prime(u64 x) {
    if (x < 2) return false;
    for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL})
        if (x % q == 0) return x == q;
    u64 d = x - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL,
                  37ULL}) {
        u64 v = powmod(a % x, d, x);
        if (v == 0 || v == 1 || v == x - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            v = mulmod(v, v, x);
            if (v == x - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

u64 reduce_delta(Dist delta, u64 p) {
    long long m = static_cast<long long>(delta % static_cast<Dist>(p));
    if (m < 0) m += static_cast<long long>(p);
    return static_cast<u64>(m);
}

// suffix[j] = sum_{i=j}^{l} b^i mod p, 1-based; suffix[l+1] = 0.
std::vector<u64> suffix_powers(const HashParams& hp) {
    std::vector<u64> suf(hp.num_sources + 2, 0);
    u64 bi = 1;
    std::vector<u64> pw(hp.num_sources + 1, 0);
    for (int i = 1; i <= hp.num_sources; ++i) {
        bi = mulmod(bi, hp.b % hp.p, hp.p);
        pw[i] = bi;
    }
    for (int j = hp.num_sources; j >= 1; --j) suf[j] = (suf[j + 1] + pw[j]) % hp.p;
    return suf;
}

} // namespace

u64 smallest_prime_above(u64 x) {
    u64 c = x + 1;
    if (c <= 2) return 2;
    if (c % 2 == 0) ++c;
    while (!is_prime(c)) c += 2;
    return c;
}

HashParams make_hash_params(int n, int num_sources, std::uint64_t seed) {
    HashParams hp;
    u64 n4 = 1;
    u64 base = std::max(2, n);
    for (int i = 0; i < 4; ++i) n4 *= base;
    hp.p = smallest_prime_above(n4);
    Rng rng(seed);
    hp.b = uniform_u64(rng, hp.p);
    hp.num_sources = num_sources;
    return hp;
}

u64 tuple_hash(const DistanceTuple& d, const HashParams& hp) {
    u64 h = 0;
    u64 bi = 1;
    for (std::size_t i = 0; i < d.size(); ++i) {
        bi = mulmod(bi, hp.b % hp.p, hp.p);
        h = (h + mulmod(reduce_delta(d[i], hp.p), bi, hp.p)) % hp.p;
    }
    return h;
}

u64 mirror_delta(Dist delta, int j, const HashParams& hp) {
    require(j >= 1 && j <= hp.num_sources, "InvalidParams", "source index out of range");
    u64 suf = 0;
    u64 bi = 1;
    for (int i = 1; i <= hp.num_sources; ++i) {
        bi = mulmod(bi, hp.b % hp.p, hp.p);
        if (i >= j) suf = (suf + bi) % hp.p;
    }
    return mulmod(reduce_delta(delta, hp.p), suf, hp.p);
}

std::string OpStream::dump() const {
    std::ostringstream os;
    os << "opstream v1 n=" << n << " l=" << num_sources << "\n";
    for (int v = 0; v < n; ++v)
        os << "init " << v << " parent=" << init_parent[v] << " value=" << init_value[v]
           << "\n";
    for (const Op& op : ops) {
        switch (op.kind) {
            case Kind::SourceAdvance: os << "advance\n"; break;
            case Kind::Cut: os << "cut " << op.vertex << "\n"; break;
            case Kind::Join: os << "join " << op.vertex << " " << op.parent << "\n"; break;
            case Kind::AddSubtree:
                os << "add " << op.vertex << " " << op.delta << "\n";
                break;
        }
    }
    return os.str();
}

OpStream OpStream::parse(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    OpStream st;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok == "opstream") {
            std::string ver, nkv, lkv;
            ls >> ver >> nkv >> lkv;
            require(ver == "v1", "IoError", "unknown opstream version");
            st.n = std::stoi(nkv.substr(nkv.find('=') + 1));
            st.num_sources = std::stoi(lkv.substr(lkv.find('=') + 1));
            st.init_parent.assign(st.n, -1);
            st.init_value.assign(st.n, 0);
            header = true;
        } else if (tok == "init") {
            require(header, "IoError", "init before header");
            int v;
            std::string pkv, vkv;
            ls >> v >> pkv >> vkv;
            st.init_parent[v] = std::stoi(pkv.substr(pkv.find('=') + 1));
            st.init_value[v] = std::stoll(vkv.substr(vkv.find('=') + 1));
        } else if (tok == "advance") {
            st.ops.push_back({Kind::SourceAdvance, -1, -1, 0});
        } else if (tok == "cut") {
            int v;
            ls >> v;
            st.ops.push_back({Kind::Cut, v, -1, 0});
        } else if (tok == "join") {
            int v, p;
            ls >> v >> p;
            st.ops.push_back({Kind::Join, v, p, 0});
        } else if (tok == "add") {
            int v;
            Dist d;
            ls >> v >> d;
            st.ops.push_back({Kind::AddSubtree, v, -1, d});
        } else {
            fail("IoError", "unknown opstream record '" + tok + "'");
        }
    }
    require(header, "IoError", "missing opstream header");
    return st;
}

OpStream reference_op_stream(const PlanarGraph& g, const FaceSources& s) {
    FaceSet fs = enumerate_faces(g);
    check_face_sources(g, fs, s);
    int l = static_cast<int>(s.vertices.size());
    OpStream st;
    st.n = g.n;
    st.num_sources = l;

    std::vector<ShortestPaths> sp(l);
    for (int j = 0; j < l; ++j) sp[j] = single_source_distances(g, s.vertices[j]);
    st.init_parent = sp[0].parent;
    st.init_value = sp[0].dist;

    for (int j = 1; j < l; ++j) {
        st.ops.push_back({OpStream::Kind::SourceAdvance, -1, -1, 0});
        const auto& prev = sp[j - 1];
        const auto& next = sp[j];
        // detach every vertex whose (oriented) parent edge changes
        std::vector<char> common(g.n, 0);
        for (VertexId v = 0; v < g.n; ++v) {
            if (prev.parent[v] == next.parent[v]) {
                common[v] = prev.parent[v] != -1;
            } else if (prev.parent[v] != -1) {
                st.ops.push_back({OpStream::Kind::Cut, v, -1, 0});
            }
        }
        // value fixups per fragment of the common forest: one AddSubtree per
        // vertex whose delta differs from its common-parent's delta
        std::vector<Dist> delta(g.n);
        for (VertexId v = 0; v < g.n; ++v) delta[v] = next.dist[v] - prev.dist[v];
        for (VertexId v = 0; v < g.n; ++v) {
            Dist up = common[v] ? delta[prev.parent[v]] : 0;
            Dist own = delta[v] - up;
            if (own != 0) st.ops.push_back({OpStream::Kind::AddSubtree, v, -1, own});
        }
        // reattach along the new tree
        for (VertexId v = 0; v < g.n; ++v)
            if (next.parent[v] != -1 && prev.parent[v] != next.parent[v])
                st.ops.push_back({OpStream::Kind::Join, v, next.parent[v], 0});
    }
    return st;
}

namespace {

struct DistValue {
    Dist v = 0;
    DistValue& operator+=(const DistValue& o) {
        v += o.v;
        return *this;
    }
    bool operator==(const DistValue& o) const = default;
};

// Builds the primal forest at the stream's initial state.
EulerForest<DistValue> initial_primal(const OpStream& st) {
    std::vector<DistValue> init(st.n);
    for (int v = 0; v < st.n; ++v) init[v] = DistValue{st.init_value[v]};
    EulerForest<DistValue> f(st.n, init);
    // link children in depth order so parents are always linked first
    std::vector<int> order(st.n);
    for (int v = 0; v < st.n; ++v) order[v] = v;
    std::vector<int> depth(st.n, -1);
    std::function<int(int)> dep = [&](int v) -> int {
        if (depth[v] != -1) return depth[v];
        depth[v] = st.init_parent[v] == -1 ? 0 : dep(st.init_parent[v]) + 1;
        return depth[v];
    };
    for (int v = 0; v < st.n; ++v) dep(v);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return depth[a] != depth[b] ? depth[a] < depth[b] : a < b;
    });
    for (int v : order)
        if (st.init_parent[v] != -1) f.link(v, st.init_parent[v]);
    return f;
}

} // namespace

HashedMsspResult run_hashed_mssp(const PlanarGraph& g, const FaceSources& s,
                                 const HashParams& hp, const OpStream& stream,
                                 const ReplayOptions& opt) {
    require(stream.n == g.n, "InvalidParams", "stream size mismatch");
    require(stream.num_sources == static_cast<int>(s.vertices.size()), "InvalidParams",
            "stream arity mismatch");
    std::vector<u64> suf = suffix_powers(hp);

    EulerForest<DistValue> primal = initial_primal(stream);
    std::vector<ModValue> shadow_init(g.n);
    for (int v = 0; v < g.n; ++v)
        shadow_init[v] =
            ModValue{mulmod(reduce_delta(stream.init_value[v], hp.p), suf[1], hp.p), hp.p};
    EulerForest<ModValue> shadow(g.n, shadow_init);
    std::vector<int> order(g.n);
    for (int v = 0; v < g.n; ++v) order[v] = v;
    {
        std::vector<int> depth(g.n, 0);
        for (int v = 0; v < g.n; ++v) {
            int d = 0;
            for (int u = v; stream.init_parent[u] != -1; u = stream.init_parent[u]) ++d;
            depth[v] = d;
        }
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return depth[a] != depth[b] ? depth[a] < depth[b] : a < b;
        });
    }
    for (int v : order)
        if (stream.init_parent[v] != -1) shadow.link(v, stream.init_parent[v]);

    auto spot = [&](int j) {
        if (!opt.spot_check) return;
        ShortestPaths sp = single_source_distances(g, s.vertices[j - 1]);
        for (VertexId v = 0; v < g.n; ++v)
            if (primal.value(v).v != sp.dist[v])
                fail("DriverViolation", "forest value diverges from the oracle at source " +
                                            std::to_string(j));
    };

    HashedMsspResult res;
    int j = 1;
    for (const auto& op : stream.ops) {
        ++res.op_count;
        switch (op.kind) {
            case OpStream::Kind::SourceAdvance:
                spot(j);
                ++j;
                break;
            case OpStream::Kind::Cut:
                primal.cut(op.vertex);
                shadow.cut(op.vertex);
                break;
            case OpStream::Kind::Join:
                primal.link(op.vertex, op.parent);
                shadow.link(op.vertex, op.parent);
                break;
            case OpStream::Kind::AddSubtree: {
                primal.add_subtree(op.vertex, DistValue{op.delta});
                u64 inc = mulmod(reduce_delta(op.delta, hp.p), suf[j], hp.p);
                shadow.add_subtree(op.vertex, ModValue{inc, hp.p});
                break;
            }
        }
    }
    require(j == stream.num_sources, "DriverViolation",
            "stream advanced through " + std::to_string(j) + " sources, expected " +
                std::to_string(stream.num_sources));
    spot(j);
    res.hashes.resize(g.n);
    for (VertexId v = 0; v < g.n; ++v) res.hashes[v] = shadow.value(v).v;
    return res;
}

std::vector<DistanceTuple> materialize_tuples(const OpStream& stream,
                                              const std::vector<VertexId>& reps) {
    EulerForest<DistValue> primal = initial_primal(stream);
    std::vector<DistanceTuple> out(reps.size(), DistanceTuple(stream.num_sources));
    auto harvest = [&](int j) {
        for (std::size_t i = 0; i < reps.size(); ++i)
            out[i][j - 1] = primal.value(reps[i]).v;
    };
    int j = 1;
    for (const auto& op : stream.ops) {
        switch (op.kind) {
            case OpStream::Kind::SourceAdvance:
                harvest(j);
                ++j;
                break;
            case OpStream::Kind::Cut: primal.cut(op.vertex); break;
            case OpStream::Kind::Join: primal.link(op.vertex, op.parent); break;
            case OpStream::Kind::AddSubtree:
                primal.add_subtree(op.vertex, DistValue{op.delta});
                break;
        }
    }
    harvest(j);
    return out;
}

TupleTable select_and_materialize(const std::vector<std::uint64_t>& hashes,
                                  const PlanarGraph& g, const FaceSources& s,
                                  const OpStream& stream) {
    std::map<u64, std::pair<VertexId, VertexId>> groups; // hash -> (rep, checker)
    for (VertexId v = 0; v < g.n; ++v) {
        auto it = groups.find(hashes[v]);
        if (it == groups.end())
            groups[hashes[v]] = {v, v};
        else
            it->second.second = v; // keep the largest id as the checker
    }
    std::vector<VertexId> reps, checkers;
    for (auto& [h, rc] : groups) {
        reps.push_back(rc.first);
        checkers.push_back(rc.second);
    }
    std::vector<VertexId> both = reps;
    both.insert(both.end(), checkers.begin(), checkers.end());
    std::vector<DistanceTuple> tuples = materialize_tuples(stream, both);
    std::size_t k = reps.size();
    for (std::size_t i = 0; i < k; ++i)
        if (tuples[i] != tuples[k + i])
            fail("HashCollisionDetected",
                 "hash group mixes distinct tuples (vertices " + std::to_string(reps[i]) +
                     ", " + std::to_string(checkers[i]) + ")");

    // assemble the table: rows from representatives, vertices indexed by group
    TupleTable tab;
    tab.num_sources = stream.num_sources;
    std::vector<DistanceTuple> rows(tuples.begin(), tuples.begin() + k);
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    tab.table = rows;
    Dist bound = 0;
    for (const auto& r : rows)
        for (Dist d : r)
            if (d != INF_DIST) bound = std::max(bound, d);
    tab.dist_bound = bound;
    std::map<u64, int> row_of_hash;
    for (std::size_t i = 0; i < k; ++i) {
        int row = static_cast<int>(
            std::lower_bound(tab.table.begin(), tab.table.end(), tuples[i]) -
            tab.table.begin());
        row_of_hash[hashes[reps[i]]] = row;
    }
    tab.targets.resize(g.n);
    tab.index_of.resize(g.n);
    for (VertexId v = 0; v < g.n; ++v) {
        tab.targets[v] = v;
        tab.index_of[v] = row_of_hash[hashes[v]];
    }
    (void)s;
    return tab;
}

TupleTable fast_compress(const PlanarGraph& g, const FaceSources& s, std::uint64_t seed,
                         int max_attempts) {
    OpStream stream = reference_op_stream(g, s);
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        HashParams hp =
            make_hash_params(g.n, static_cast<int>(s.vertices.size()), seed + attempt);
        HashedMsspResult res = run_hashed_mssp(g, s, hp, stream);
        try {
            return select_and_materialize(res.hashes, g, s, stream);
        } catch (const Error& e) {
            if (e.code() != "HashCollisionDetected" || attempt + 1 == max_attempts) throw;
        }
    }
    fail("HashCollisionDetected", "retries exhausted");
}

ProjectionSpec make_projection(int n, int num_sources, const Rat& delta,
                               std::uint64_t seed) {
    ProjectionSpec spec;
    int nn = std::max(2, n);
    spec.dim = static_cast<int>(std::ceil(24.0 * std::log(static_cast<double>(nn))));
    Rng rng(seed);
    double scale = 1.0 / std::sqrt(static_cast<double>(spec.dim));
    spec.cols.assign(num_sources, std::vector<double>(spec.dim));
    for (int i = 0; i < num_sources; ++i)
        for (int r = 0; r < spec.dim; ++r) spec.cols[i][r] = sample_gaussian(rng) * scale;
    // cell size Z = delta / (2 sqrt(r)); same-cell tuples end up delta-close
    spec.cell = to_double(delta) / (2.0 * std::sqrt(static_cast<double>(spec.dim)));
    require(spec.cell > 0, "NonpositiveParam", "delta must be positive");
    spec.shift.resize(spec.dim);
    for (int r = 0; r < spec.dim; ++r) spec.shift[r] = uniform_unit(rng) * spec.cell;
    return spec;
}

CoreSet weighted_fast_coreset(const PlanarGraph& g, const FaceSources& s, const Rat& delta,
                              std::uint64_t seed) {
    require(delta > Rat(0), "NonpositiveParam", "delta must be positive");
    OpStream stream = reference_op_stream(g, s);
    int l = static_cast<int>(s.vertices.size());
    int attempts = std::max(4, 3 * ceil_log2(std::max(2, g.n)));
    // exact tuples for the witness verification (and the returned members)
    std::vector<VertexId> everyone(g.n);
    for (int v = 0; v < g.n; ++v) everyone[v] = v;
    std::vector<DistanceTuple> tuples = materialize_tuples(stream, everyone);

    for (int attempt = 0; attempt < attempts; ++attempt) {
        ProjectionSpec proj = make_projection(g.n, l, delta, seed + 1000003ULL * attempt);
        // shadow forests maintain the projected tuples alongside the stream
        std::vector<VecValue> init(g.n);
        std::vector<double> colsum(proj.dim, 0.0);
        for (int i = 0; i < l; ++i)
            for (int r = 0; r < proj.dim; ++r) colsum[r] += proj.cols[i][r];
        for (int v = 0; v < g.n; ++v) {
            init[v].v.assign(proj.dim, 0.0);
            for (int r = 0; r < proj.dim; ++r)
                init[v].v[r] = static_cast<double>(stream.init_value[v]) * colsum[r];
        }
        EulerForest<VecValue> shadow(g.n, init);
        {
            std::vector<int> depth(g.n, 0), order(g.n);
            for (int v = 0; v < g.n; ++v) {
                int d = 0;
                for (int u = v; stream.init_parent[u] != -1; u = stream.init_parent[u]) ++d;
                depth[v] = d;
                order[v] = v;
            }
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                return depth[a] != depth[b] ? depth[a] < depth[b] : a < b;
            });
            for (int v : order)
                if (stream.init_parent[v] != -1) shadow.link(v, stream.init_parent[v]);
        }
        int j = 1;
        std::vector<std::vector<double>> sufcols(l + 2, std::vector<double>(proj.dim, 0.0));
        for (int i = l; i >= 1; --i)
            for (int r = 0; r < proj.dim; ++r)
                sufcols[i][r] = sufcols[i + 1][r] + proj.cols[i - 1][r];
        for (const auto& op : stream.ops) {
            switch (op.kind) {
                case OpStream::Kind::SourceAdvance: ++j; break;
                case OpStream::Kind::Cut: shadow.cut(op.vertex); break;
                case OpStream::Kind::Join: shadow.link(op.vertex, op.parent); break;
                case OpStream::Kind::AddSubtree: {
                    VecValue d;
                    d.v.resize(proj.dim);
                    for (int r = 0; r < proj.dim; ++r)
                        d.v[r] = static_cast<double>(op.delta) * sufcols[j][r];
                    shadow.add_subtree(op.vertex, d);
                    break;
                }
            }
        }
        // shifted-grid bucketing of the projected tuples
        std::map<std::vector<long long>, VertexId> cell_rep;
        std::vector<std::vector<long long>> key_of(g.n);
        for (VertexId v = 0; v < g.n; ++v) {
            VecValue pv = shadow.value(v);
            std::vector<long long> key(proj.dim);
            for (int r = 0; r < proj.dim; ++r)
                key[r] = static_cast<long long>(
                    std::floor((pv.v[r] + proj.shift[r]) / proj.cell));
            key_of[v] = key;
            auto it = cell_rep.find(key);
            if (it == cell_rep.end() || v < it->second) cell_rep[key] = v;
        }
        CoreSet cs;
        cs.delta = delta;
        std::map<std::vector<long long>, int> cell_index;
        for (auto& [key, rep] : cell_rep) {
            cell_index[key] = static_cast<int>(cs.members.size());
            cs.members.push_back(rep);
            cs.bucket_of.push_back({-1, static_cast<long long>(cell_index[key])});
        }
        cs.witness.resize(g.n);
        bool ok = true;
        for (VertexId v = 0; v < g.n && ok; ++v) {
            cs.witness[v] = cell_index[key_of[v]];
            const auto& mt = tuples[cs.members[cs.witness[v]]];
            for (int i = 0; i < l; ++i)
                if (Rat(std::llabs(tuples[v][i] - mt[i])) > delta) {
                    ok = false;
                    break;
                }
        }
        cs.bucket_count = static_cast<long long>(cs.members.size());
        cs.family_size = cs.bucket_count;
        if (ok) return cs;
    }
    fail("RetriesExhausted", "shifted-grid bucketing kept violating the radius");
}

} // namespace pmk
