#include "pmk/compression.hpp"

#include <algorithm>
#include <bit>

namespace pmk {

std::vector<std::pair<int, int>> MembershipSet::members(const DeltaDomain& dom) const {
    std::vector<std::pair<int, int>> out;
    for (std::size_t i = 0; i < first_delta.size(); ++i)
        for (int k = first_delta[i]; k < dom.size(); ++k)
            out.push_back({static_cast<int>(i) + 1, k});
    return out;
}

std::vector<DistanceTuple> compute_tuples(const PlanarGraph& g, const FaceSources& s) {
    FaceSet fs = enumerate_faces(g);
    check_face_sources(g, fs, s);
    int l = static_cast<int>(s.vertices.size());
    std::vector<std::vector<Dist>> rows(l);
    for (int i = 0; i < l; ++i) rows[i] = single_source_distances(g, s.vertices[i]).dist;
    std::vector<DistanceTuple> tuples(g.n, DistanceTuple(l));
    for (VertexId v = 0; v < g.n; ++v)
        for (int i = 0; i < l; ++i) tuples[v][i] = rows[i][v];
    return tuples;
}

MembershipFamily membership_family_from_tuples(const std::vector<DistanceTuple>& tuples,
                                               const DeltaDomain& dom) {
    MembershipFamily fam;
    fam.domain = dom;
    int l = tuples.empty() ? 0 : static_cast<int>(tuples[0].size());
    fam.per_vertex.reserve(tuples.size());
    for (const DistanceTuple& t : tuples) {
        MembershipSet m;
        m.first_delta.assign(std::max(0, l - 1), dom.size());
        for (int i = 0; i + 1 < l; ++i) {
            Rat diff(t[i] - t[i + 1]); // member of (i,delta) iff diff <= delta
            for (int k = 0; k < dom.size(); ++k)
                if (diff <= dom.values[k]) {
                    m.first_delta[i] = k;
                    break;
                }
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

MembershipFamily membership_family(const PlanarGraph& g, const FaceSources& s,
                                   const DeltaDomain& dom) {
    return membership_family_from_tuples(compute_tuples(g, s), dom);
}

DistanceTuple reconstruct_tuple(int anchor, Dist anchor_dist, const MembershipSet& m,
                                int num_sources) {
    require(anchor >= 1 && anchor <= num_sources, "InvalidParams",
            "anchor index out of range");
    require(static_cast<int>(m.first_delta.size()) == std::max(0, num_sources - 1),
            "InvalidParams", "membership arity mismatch");
    // Unweighted domain {-1, 0}: membership of (i,-1) implies (i,0).
    for (int fd : m.first_delta)
        require(fd >= 0 && fd <= 2, "InconsistentMembership",
                "membership set not over the {-1,0} domain");
    DistanceTuple t(num_sources, 0);
    t[anchor - 1] = anchor_dist;
    // Walking left of the anchor: d(v,s_i) from d(v,s_{i+1}).
    for (int i = anchor - 1; i >= 1; --i) {
        int fd = m.first_delta[i - 1];
        Dist step = fd == 0 ? -1 : (fd == 1 ? 0 : +1);
        t[i - 1] = t[i] + step;
        require(t[i - 1] >= 0, "InconsistentMembership",
                "reconstruction drove a distance negative");
    }
    // Walking right: d(v,s_{i+1}) from d(v,s_i); the sign flips.
    for (int i = anchor; i <= num_sources - 1; ++i) {
        int fd = m.first_delta[i - 1];
        Dist step = fd == 0 ? +1 : (fd == 1 ? 0 : -1);
        t[i] = t[i - 1] + step;
        require(t[i] >= 0, "InconsistentMembership",
                "reconstruction drove a distance negative");
    }
    return t;
}

TupleTable build_table(const std::vector<DistanceTuple>& tuples,
                       const std::vector<VertexId>& targets, int num_sources,
                       Dist dist_bound) {
    TupleTable tab;
    tab.num_sources = num_sources;
    tab.dist_bound = dist_bound;
    tab.targets = targets;
    std::vector<DistanceTuple> rows;
    rows.reserve(targets.size());
    for (VertexId t : targets) rows.push_back(tuples[t]);
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    tab.table = std::move(rows);
    tab.index_of.reserve(targets.size());
    for (VertexId t : targets)
        tab.index_of.push_back(static_cast<int>(
            std::lower_bound(tab.table.begin(), tab.table.end(), tuples[t]) -
            tab.table.begin()));
    return tab;
}

TupleTable encode(const PlanarGraph& g, const FaceSources& s,
                  const std::vector<VertexId>& targets) {
    std::vector<DistanceTuple> tuples = compute_tuples(g, s);
    Dist bound = 0;
    for (const auto& t : tuples)
        for (Dist d : t)
            if (d != INF_DIST) bound = std::max(bound, d);
    return build_table(tuples, targets, static_cast<int>(s.vertices.size()), bound);
}

Dist TupleTable::decode(int source_index, VertexId t) const {
    if (target_pos_.empty()) {
        VertexId vmax = -1;
        for (VertexId v : targets) vmax = std::max(vmax, v);
        target_pos_.assign(vmax + 1, -1);
        for (std::size_t i = 0; i < targets.size(); ++i) target_pos_[targets[i]] = i;
    }
    if (t < 0 || t >= static_cast<VertexId>(target_pos_.size()) || target_pos_[t] < 0)
        fail("UnknownTarget", "vertex " + std::to_string(t) + " is not a target");
    return table[index_of[target_pos_[t]]][source_index];
}

long long TupleTable::table_bits() const {
    // varint first entry per row plus 2-bit deltas, as serialized
    long long bits = 0;
    for (const auto& row : table) {
        std::uint64_t x = row.empty() ? 0 : static_cast<std::uint64_t>(row[0]);
        int bytes = 1;
        while (x >= 0x80) {
            x >>= 7;
            ++bytes;
        }
        bits += 8LL * bytes;
        if (num_sources > 1) bits += 2LL * (num_sources - 1);
    }
    return bits;
}

long long TupleTable::index_bits() const {
    int b = table.size() <= 1 ? 1 : ceil_log2(table.size());
    return static_cast<long long>(targets.size()) * b;
}

namespace {

void put_varint(std::vector<std::uint8_t>& out, std::uint64_t x) {
    while (x >= 0x80) {
        out.push_back(static_cast<std::uint8_t>(x) | 0x80);
        x >>= 7;
    }
    out.push_back(static_cast<std::uint8_t>(x));
}

std::uint64_t get_varint(const std::vector<std::uint8_t>& in, std::size_t& pos) {
    std::uint64_t x = 0;
    int shift = 0;
    for (;;) {
        require(pos < in.size(), "IoError", "truncated varint");
        std::uint8_t b = in[pos++];
        x |= static_cast<std::uint64_t>(b & 0x7f) << shift;
        if (!(b & 0x80)) return x;
        shift += 7;
    }
}

class BitWriter {
public:
    void put(std::uint64_t value, int bits) {
        for (int i = 0; i < bits; ++i) {
            if (used_ == 0) bytes_.push_back(0);
            if ((value >> i) & 1) bytes_.back() |= std::uint8_t(1) << used_;
            used_ = (used_ + 1) % 8;
        }
    }
    void drain(std::vector<std::uint8_t>& out) {
        out.insert(out.end(), bytes_.begin(), bytes_.end());
    }

private:
    std::vector<std::uint8_t> bytes_;
    int used_ = 0;
};

class BitReader {
public:
    BitReader(const std::vector<std::uint8_t>& bytes, std::size_t start)
        : bytes_(&bytes), pos_(start) {}
    std::uint64_t get(int bits) {
        std::uint64_t v = 0;
        for (int i = 0; i < bits; ++i) {
            require(pos_ < bytes_->size(), "IoError", "truncated bit stream");
            if (((*bytes_)[pos_] >> used_) & 1) v |= std::uint64_t(1) << i;
            used_ = (used_ + 1) % 8;
            if (used_ == 0) ++pos_;
        }
        return v;
    }

private:
    const std::vector<std::uint8_t>* bytes_;
    std::size_t pos_;
    int used_ = 0;
};

} // namespace

std::vector<std::uint8_t> TupleTable::serialize() const {
    std::vector<std::uint8_t> out;
    out.push_back('p');
    out.push_back('m');
    out.push_back('k');
    out.push_back('1');
    put_varint(out, num_sources);
    put_varint(out, table.size());
    put_varint(out, static_cast<std::uint64_t>(dist_bound));
    put_varint(out, targets.size());
    // rows: varint first entry, then deltas (00: -1, 01: 0, 10: +1, 11: raw
    // varint escape stored out of band for non-consecutive sources)
    std::vector<std::uint64_t> escapes;
    BitWriter bw;
    for (const auto& row : table) {
        put_varint(out, static_cast<std::uint64_t>(row[0]));
        for (int i = 1; i < num_sources; ++i) {
            Dist d = row[i] - row[i - 1];
            if (d >= -1 && d <= 1)
                bw.put(static_cast<std::uint64_t>(d + 1), 2);
            else {
                bw.put(3, 2);
                escapes.push_back(static_cast<std::uint64_t>(d + (1LL << 62)));
            }
        }
    }
    bw.drain(out);
    put_varint(out, escapes.size());
    for (std::uint64_t e : escapes) put_varint(out, e);
    // target ids and row indices, fixed width
    int idx_bits = table.size() <= 1 ? 1 : ceil_log2(table.size());
    BitWriter ix;
    for (VertexId t : targets) put_varint(out, static_cast<std::uint64_t>(t));
    for (int k : index_of) ix.put(static_cast<std::uint64_t>(k), idx_bits);
    ix.drain(out);
    return out;
}

TupleTable TupleTable::deserialize(const std::vector<std::uint8_t>& bytes) {
    require(bytes.size() > 4 && bytes[0] == 'p' && bytes[1] == 'm' && bytes[2] == 'k' &&
                bytes[3] == '1',
            "IoError", "bad magic");
    std::size_t pos = 4;
    TupleTable tab;
    tab.num_sources = static_cast<int>(get_varint(bytes, pos));
    std::size_t rows = get_varint(bytes, pos);
    tab.dist_bound = static_cast<Dist>(get_varint(bytes, pos));
    std::size_t nt = get_varint(bytes, pos);
    std::vector<Dist> firsts(rows);
    // interleaved layout: firsts are varints written before the delta block
    // in serialize(); reproduce the same order
    std::vector<std::uint8_t> deltas_raw;
    // serialize wrote: for each row (varint first); then the packed deltas.
    // Re-read accordingly.
    for (std::size_t r = 0; r < rows; ++r) firsts[r] = static_cast<Dist>(get_varint(bytes, pos));
    std::size_t delta_bits = rows == 0 ? 0 : rows * 2 * (tab.num_sources - 1);
    std::size_t delta_bytes = (delta_bits + 7) / 8;
    BitReader br(bytes, pos);
    tab.table.assign(rows, DistanceTuple(tab.num_sources));
    std::vector<int> escape_slots;
    for (std::size_t r = 0; r < rows; ++r) {
        tab.table[r][0] = firsts[r];
        for (int i = 1; i < tab.num_sources; ++i) {
            std::uint64_t code = br.get(2);
            if (code == 3) {
                escape_slots.push_back(static_cast<int>(r * tab.num_sources + i));
                tab.table[r][i] = 0;
            } else {
                tab.table[r][i] = tab.table[r][i - 1] + (static_cast<Dist>(code) - 1);
            }
        }
    }
    pos += delta_bytes;
    std::size_t nesc = get_varint(bytes, pos);
    require(nesc == escape_slots.size(), "IoError", "escape count mismatch");
    for (std::size_t k = 0; k < nesc; ++k) {
        std::uint64_t raw = get_varint(bytes, pos);
        int slot = escape_slots[k];
        std::size_t r = slot / tab.num_sources;
        int i = slot % tab.num_sources;
        tab.table[r][i] = tab.table[r][i - 1] + (static_cast<Dist>(raw) - (1LL << 62));
    }
    tab.targets.resize(nt);
    for (std::size_t k = 0; k < nt; ++k)
        tab.targets[k] = static_cast<VertexId>(get_varint(bytes, pos));
    int idx_bits = rows <= 1 ? 1 : ceil_log2(rows);
    BitReader ix(bytes, pos);
    tab.index_of.resize(nt);
    for (std::size_t k = 0; k < nt; ++k)
        tab.index_of[k] = static_cast<int>(ix.get(idx_bits));
    return tab;
}

int vc_dimension(const std::vector<std::uint64_t>& family, int universe_size, int cap) {
    require(universe_size <= 63, "InvalidParams", "universe too large for the probe");
    std::vector<int> elems(universe_size);
    for (int i = 0; i < universe_size; ++i) elems[i] = i;
    auto shattered = [&](std::uint64_t mask, int k) {
        std::vector<std::uint64_t> traces;
        traces.reserve(family.size());
        for (std::uint64_t f : family) traces.push_back(f & mask);
        std::sort(traces.begin(), traces.end());
        traces.erase(std::unique(traces.begin(), traces.end()), traces.end());
        return traces.size() == (std::size_t(1) << k);
    };
    int best = 0;
    for (int k = 1; k <= cap + 1 && k <= universe_size; ++k) {
        // enumerate k-subsets of the universe
        std::vector<int> idx(k);
        for (int i = 0; i < k; ++i) idx[i] = i;
        bool found = false;
        for (;;) {
            std::uint64_t mask = 0;
            for (int i : idx) mask |= std::uint64_t(1) << i;
            if (shattered(mask, k)) {
                found = true;
                break;
            }
            int p = k - 1;
            while (p >= 0 && idx[p] == universe_size - k + p) --p;
            if (p < 0) break;
            ++idx[p];
            for (int q = p + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
        }
        if (!found) break;
        best = k;
    }
    return best;
}

std::vector<std::uint64_t> family_masks(const MembershipFamily& fam, int num_sources,
                                        int* universe_size) {
    int dsz = fam.domain.size();
    int usz = num_sources * dsz; // pairs (i, delta), i in [1, l]
    require(usz <= 63, "InvalidParams", "universe too large for bitmask probe");
    if (universe_size) *universe_size = usz;
    std::vector<std::uint64_t> out;
    out.reserve(fam.distinct.size());
    for (const MembershipSet& s : fam.distinct) {
        std::uint64_t mask = 0;
        for (std::size_t i = 0; i < s.first_delta.size(); ++i)
            for (int k = s.first_delta[i]; k < dsz; ++k)
                mask |= std::uint64_t(1) << (static_cast<int>(i) * dsz + k);
        out.push_back(mask);
    }
    return out;
}

} // namespace pmk
