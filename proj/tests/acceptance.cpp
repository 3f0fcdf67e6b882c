// Acceptance suite: one check per shipped guarantee, each printing a
// pass/fail line with the measured quantity it is about.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <iostream>
#include <set>

#include "pmk/congest.hpp"
#include "pmk/diameter.hpp"
#include "pmk/experiment.hpp"
#include "pmk/fast_tuples.hpp"

using namespace pmk;

namespace {

struct Instance {
    PlanarGraph g;
    FaceSources s;
};

// Face-consecutive corpus: grids and boundary-faced triangulations.
std::vector<Instance> compression_corpus(int count, int max_n, int max_sources) {
    std::vector<Instance> out;
    Rng rng(20240901);
    while (static_cast<int>(out.size()) < count) {
        Instance inst;
        int l = 2 + static_cast<int>(uniform_u64(rng, max_sources - 1));
        if (out.size() % 3 == 0) {
            int r = 3 + static_cast<int>(uniform_u64(rng, 12));
            int c = std::max(l, 3 + static_cast<int>(uniform_u64(rng, 14)));
            if (r * c > max_n) continue;
            inst.g = make_grid(r, c);
        } else {
            int boundary = std::max(l + 1, 6);
            int n = boundary +
                    static_cast<int>(uniform_u64(rng, std::max(8, max_n - boundary)));
            if (n > max_n) continue;
            inst.g = make_random_triangulation(n, next_u64(rng), boundary);
        }
        FaceSet fs = enumerate_faces(inst.g);
        inst.s = sources_on_face(inst.g, fs, outer_face(inst.g, fs), l);
        out.push_back(std::move(inst));
    }
    return out;
}

void report(int idx, const std::string& name, bool pass, const std::string& detail) {
    std::cout << "[criterion " << idx << "] " << (pass ? "PASS" : "FAIL") << "  " << name
              << "  " << detail << std::endl;
    CHECK_MESSAGE(pass, name, ": ", detail);
}

} // namespace

TEST_CASE("1: compression exactness on 200 instances") {
    auto t0 = std::chrono::steady_clock::now();
    auto corpus = compression_corpus(200, 256, 16);
    long long pairs = 0, wrong = 0;
    for (auto& inst : corpus) {
        std::vector<VertexId> all(inst.g.n);
        for (int v = 0; v < inst.g.n; ++v) all[v] = v;
        TupleTable tab = encode(inst.g, inst.s, all);
        DistOracle oracle(inst.g);
        for (std::size_t i = 0; i < inst.s.vertices.size(); ++i)
            for (VertexId v = 0; v < inst.g.n; ++v) {
                ++pairs;
                if (tab.decode(static_cast<int>(i), v) !=
                    oracle.dist(inst.s.vertices[i], v))
                    ++wrong;
            }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(1, "decode equals the oracle on all pairs", wrong == 0 && secs < 120.0,
           std::to_string(pairs) + " pairs over 200 instances, " + std::to_string(wrong) +
               " mismatches, " + std::to_string(secs) + "s");
}

TEST_CASE("2: tuple-count bound and reconstruction surjection") {
    auto corpus = compression_corpus(60, 256, 12);
    double worst_c = 0;
    long long recon_fail = 0;
    for (auto& inst : corpus) {
        auto tuples = compute_tuples(inst.g, inst.s);
        int l = static_cast<int>(inst.s.vertices.size());
        std::vector<VertexId> all(inst.g.n);
        for (int v = 0; v < inst.g.n; ++v) all[v] = v;
        TupleTable tab = build_table(tuples, all, l, 0);
        DistOracle oracle(inst.g);
        Dist D = oracle.diameter();
        double bound = std::pow(static_cast<double>(l), 3) * static_cast<double>(D + 1);
        worst_c = std::max(worst_c, static_cast<double>(tab.table.size()) / bound);
        auto fam = membership_family_from_tuples(tuples, DeltaDomain::unweighted());
        for (VertexId v = 0; v < inst.g.n; ++v)
            for (int r = 1; r <= l; ++r)
                if (reconstruct_tuple(r, tuples[v][r - 1], fam.per_vertex[v], l) !=
                    tuples[v])
                    ++recon_fail;
    }
    report(2, "distinct tuples within c*|S|^3*(D+1), c<=4; reconstruction onto",
           worst_c <= 4.0 && recon_fail == 0,
           "fitted c=" + std::to_string(worst_c) + ", surjection failures=" +
               std::to_string(recon_fail));
}

TEST_CASE("3: no 4-shattered subset in any membership family") {
    int counterexamples = 0;
    // unweighted: sources up to 12 on grids and triangulations
    for (int l : {6, 9, 12}) {
        PlanarGraph g1 = make_grid(7, std::max(7, l + 1));
        FaceSet fs1 = enumerate_faces(g1);
        FaceSources s1 = sources_on_face(g1, fs1, outer_face(g1, fs1), l);
        auto fam = membership_family(g1, s1);
        int usz = 0;
        auto masks = family_masks(fam, l, &usz);
        if (vc_dimension(masks, usz, 3) > 3) ++counterexamples;

        PlanarGraph g2 = make_random_triangulation(160, 77 + l, l + 2);
        FaceSet fs2 = enumerate_faces(g2);
        FaceSources s2 = sources_on_face(g2, fs2, outer_face(g2, fs2), l);
        auto fam2 = membership_family(g2, s2);
        auto masks2 = family_masks(fam2, l, &usz);
        if (vc_dimension(masks2, usz, 3) > 3) ++counterexamples;
    }
    // weighted: rational grid domains with universe up to 24
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        PlanarGraph g = make_random_triangulation(60, seed, 5);
        randomize_weights(g, 9, seed);
        FaceSet fs = enumerate_faces(g);
        FaceSources s = sources_on_face(g, fs, outer_face(g, fs), 4);
        auto tuples = compute_tuples(g, s);
        GridSpec spec = grid(4, Rat(3), Rat(2)); // 13 values -> universe 52? keep small
        spec = grid(4, Rat(2), Rat(4));          // 5 values, universe 20
        DeltaDomain dom;
        dom.values = spec.values;
        auto fam = membership_family_from_tuples(tuples, dom);
        int usz = 0;
        auto masks = family_masks(fam, 4, &usz);
        if (usz > 24 || vc_dimension(masks, usz, 3) > 3) ++counterexamples;
    }
    report(3, "exhaustive shattering search finds no 4-set", counterexamples == 0,
           std::to_string(counterexamples) + " counterexamples");
}

TEST_CASE("4: hashed tuple computation matches brute force") {
    int mismatches = 0;
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
        int n = 48 + static_cast<int>(seed) * 20;
        PlanarGraph g = make_random_triangulation(std::min(n, 128), seed, 6);
        FaceSet fs = enumerate_faces(g);
        FaceSources s = sources_on_face(g, fs, outer_face(g, fs), 5);
        OpStream stream = reference_op_stream(g, s);
        HashParams hp = make_hash_params(g.n, 5, seed);
        auto res = run_hashed_mssp(g, s, hp, stream);
        auto tuples = compute_tuples(g, s);
        for (VertexId v = 0; v < g.n; ++v)
            if (res.hashes[v] != tuple_hash(tuples[v], hp)) ++mismatches;
    }
    // planted collision: base 1 merges P3's two distinct tuples
    bool detected = false, recovered = false;
    {
        PlanarGraph p3 = make_path(3);
        FaceSources s;
        s.face_id = 0;
        s.vertices = {0, 1};
        OpStream stream = reference_op_stream(p3, s);
        HashParams hp;
        hp.p = smallest_prime_above(81);
        hp.b = 1;
        hp.num_sources = 2;
        auto res = run_hashed_mssp(p3, s, hp, stream);
        try {
            select_and_materialize(res.hashes, p3, s, stream);
        } catch (const Error& e) {
            detected = e.code() == "HashCollisionDetected";
        }
        recovered = fast_compress(p3, s, 5).table.size() == 3;
    }
    // measured collision frequency over random bases
    double rate, budget;
    {
        PlanarGraph p3 = make_path(3);
        FaceSources s;
        s.face_id = 0;
        s.vertices = {0, 1};
        auto tuples = compute_tuples(p3, s);
        std::uint64_t p = smallest_prime_above(81);
        Rng rng(99);
        int trials = 100000, coll = 0;
        for (int t = 0; t < trials; ++t) {
            HashParams hp{p, uniform_u64(rng, p), 2};
            if (tuple_hash(tuples[0], hp) == tuple_hash(tuples[1], hp)) ++coll;
        }
        rate = static_cast<double>(coll) / trials;
        budget = 2.0 * 2 / static_cast<double>(p);
    }
    report(4, "hashed tuples equal brute force; collisions detected and rare",
           mismatches == 0 && detected && recovered && rate <= budget,
           "mismatches=" + std::to_string(mismatches) + ", planted detection=" +
               std::to_string(detected) + ", rate=" + std::to_string(rate) + " <= " +
               std::to_string(budget));
}

TEST_CASE("5: additive core-sets verify their radius on 100 weighted instances") {
    int bad = 0;
    double worst_c = 0;
    Rng rng(5150);
    for (int i = 0; i < 100; ++i) {
        int l = 3 + static_cast<int>(uniform_u64(rng, 3));
        int n = 30 + static_cast<int>(uniform_u64(rng, 30));
        PlanarGraph g = make_random_triangulation(n, next_u64(rng), l + 2);
        randomize_weights(g, 8, next_u64(rng));
        FaceSet fs = enumerate_faces(g);
        FaceSources s = sources_on_face(g, fs, outer_face(g, fs), l);
        auto tuples = compute_tuples(g, s);
        Rat gap(0);
        for (int k = 0; k + 1 < l; ++k)
            gap = std::max(gap, Rat(tuples[s.vertices[k]][k + 1]));
        if (gap == Rat(0)) gap = Rat(1);
        Rat delta = Rat(4 + static_cast<long long>(uniform_u64(rng, 12)));
        CoreSet slow = additive_coreset(g, s, delta);
        CoreSet fast = weighted_fast_coreset(g, s, delta, next_u64(rng));
        for (const CoreSet& cs : {slow, fast})
            for (VertexId v = 0; v < g.n; ++v) {
                const auto& mt = tuples[cs.members[cs.witness[v]]];
                for (int k = 0; k < l; ++k)
                    if (Rat(std::llabs(tuples[v][k] - mt[k])) > delta) ++bad;
            }
        double bound = std::pow(static_cast<double>(l), 6) *
                       std::pow(to_double(gap / delta), 4);
        worst_c = std::max(worst_c,
                           static_cast<double>(slow.members.size()) / std::max(1e-9, bound));
    }
    report(5, "slow and fast core-sets both satisfy the witness radius", bad == 0,
           "violations=" + std::to_string(bad) +
               ", size constant c=" + std::to_string(worst_c) +
               " (|V'| <= c*l^6*(d/delta)^4)");
}

TEST_CASE("6: multiplicative compression sandwich over seeds") {
    long long samples = 0, within = 0, under = 0;
    for (std::uint64_t seed = 0; seed < 32; ++seed) {
        for (auto [n, wmax] : std::vector<std::pair<int, Dist>>{{48, 9}, {64, 5}}) {
            PlanarGraph g = make_random_triangulation(n, 31 + seed % 4, 6);
            randomize_weights(g, wmax, 77 + seed % 4);
            FaceSet fs = enumerate_faces(g);
            FaceSources s = sources_on_face(g, fs, outer_face(g, fs), 4);
            DistOracle oracle(g);
            for (Rat eps : {Rat(1), Rat(1, 2), Rat(1, 4)}) {
                MultiCompression mc = multiplicative_compress(g, s, eps, seed * 131 + 7);
                for (VertexId sv : s.vertices)
                    for (VertexId t = 0; t < g.n; t += 3) {
                        Rat est = multiplicative_decode(mc, sv, t);
                        Rat truth(oracle.dist(sv, t));
                        ++samples;
                        if (est < truth) ++under;
                        if (truth == Rat(0) ? est == Rat(0)
                                            : est <= (Rat(1) + eps) * truth)
                            ++within;
                    }
            }
        }
    }
    double ratio = static_cast<double>(within) / static_cast<double>(samples);
    report(6, "estimates stay in [true, (1+eps) true] for 99% of samples",
           under == 0 && ratio >= 0.99,
           "underestimates=" + std::to_string(under) + ", within=" + std::to_string(within) +
               "/" + std::to_string(samples) + " (" + std::to_string(100 * ratio) + "%)");
}

TEST_CASE("7: decomposition validator passes on the corpus") {
    int failures = 0;
    double worst_ratio = 0, worst_mult = 0;
    auto run = [&](const PlanarGraph& g, int mode, long long threshold) {
        BuildOptions opt;
        opt.mode = mode;
        opt.leaf_threshold = threshold;
        auto tree = mode == 1 ? sssp_tree_edges(g, 0) : bfs_tree_edges(g, 0);
        BddTree bdd = build_bdd(g, tree, 0, opt);
        PropertyReport rep = validate_bdd(bdd, g);
        if (!rep.all_pass) {
            ++failures;
            std::cout << rep.summary();
        }
        if (const auto* c = rep.find("child<=5/6-parent"))
            worst_ratio = std::max(worst_ratio, c->measured);
        if (const auto* c = rep.find("per-depth-edge-multiplicity<=2"))
            worst_mult = std::max(worst_mult, c->measured);
    };
    run(make_grid(8, 8), 0, 8);
    run(make_grid(12, 12), 0, 10);
    run(make_grid(9, 14), 0, -1); // default threshold
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL})
        run(make_random_triangulation(150, seed), 0, 12);
    {
        PlanarGraph g = make_grid(9, 9);
        randomize_weights(g, 9, 5);
        run(g, 1, 8);
        PlanarGraph t = make_random_triangulation(120, 4);
        randomize_weights(t, 7, 4);
        run(t, 1, 10);
    }
    report(7, "all definitional and derived properties hold", failures == 0,
           "failing instances=" + std::to_string(failures) + ", worst child ratio=" +
               std::to_string(worst_ratio) + ", worst edge multiplicity=" +
               std::to_string(worst_mult));
}

TEST_CASE("8: distributed programs match their oracles") {
    // unweighted diameter on 100 instances
    int diam_ok = 0;
    Rng rng(808);
    for (int i = 0; i < 100; ++i) {
        PlanarGraph g;
        if (i % 4 == 0) {
            int k = 5 + static_cast<int>(uniform_u64(rng, 5));
            g = make_grid(k, std::min(200 / k, 5 + static_cast<int>(uniform_u64(rng, 9))));
        } else {
            int n = 60 + static_cast<int>(uniform_u64(rng, 141));
            g = make_random_triangulation(n, next_u64(rng));
        }
        BuildOptions opt;
        opt.leaf_threshold = 10 + static_cast<int>(uniform_u64(rng, 10));
        BddTree bdd = build_bdd(g, bfs_tree_edges(g, 0), 0, opt);
        SimNetwork net(g, next_u64(rng));
        LabelResult lr = unweighted_labels(net, bdd);
        auto res = unweighted_diameter(net, bdd, lr, next_u64(rng));
        if (res.value == DistOracle(g).diameter()) ++diam_ok;
    }
    // weighted labels and SSSP, all pairs
    bool weighted_ok = true;
    for (std::uint64_t seed : {3ULL, 9ULL}) {
        PlanarGraph g = make_grid(7, 7);
        randomize_weights(g, 12, seed);
        BuildOptions opt;
        opt.leaf_threshold = 8;
        BddTree bdd = build_bdd(g, bfs_tree_edges(g, 0), 0, opt);
        SimNetwork net(g, seed);
        LabelResult lr = weighted_labels(net, bdd);
        DistOracle oracle(g);
        for (VertexId u = 0; u < g.n && weighted_ok; ++u)
            for (VertexId v = 0; v < g.n; ++v)
                if (decode_labels(lr.labels[u], lr.labels[v]) != oracle.dist(u, v)) {
                    weighted_ok = false;
                    break;
                }
        SsspResult s = sssp(net, lr, 5);
        if (s.dist != single_source_distances(g, 5).dist) weighted_ok = false;
    }
    // approximate weighted diameter, 100 seeded runs at eps = 1/2
    int sandwich = 0;
    for (int run = 0; run < 100; ++run) {
        PlanarGraph g;
        if (run % 2) {
            g = make_grid(5, 5);
            randomize_weights(g, 8, 900 + run);
        } else {
            g = make_random_triangulation(30, 500 + run, 5);
            randomize_weights(g, 6, 700 + run);
        }
        Dist truth = DistOracle(g).diameter();
        SimNetwork net(g, run);
        auto res = approx_weighted_diameter(net, g, Rat(1, 2), run);
        if (res.estimate >= Rat(truth) && res.estimate <= Rat(3, 2) * Rat(truth))
            ++sandwich;
    }
    report(8, "diameter exact 100/100; weighted decode exact; sandwich >= 95/100",
           diam_ok == 100 && weighted_ok && sandwich >= 95,
           "diameter " + std::to_string(diam_ok) + "/100, weighted exact=" +
               std::to_string(weighted_ok) + ", sandwich " + std::to_string(sandwich) +
               "/100");
}

TEST_CASE("9: round scaling exponents on grid families") {
    std::vector<double> logd_u, logr_u, logd_w, logr_w;
    for (int k : {8, 12, 16, 20}) {
        PlanarGraph g = make_grid(k, k);
        Dist D = 2 * (k - 1);
        {
            BuildOptions opt;
            BddTree bdd = build_bdd(g, bfs_tree_edges(g, 0), 0, opt);
            SimNetwork net(g, 1);
            LabelResult lr = unweighted_labels(net, bdd);
            auto res = unweighted_diameter(net, bdd, lr, 1);
            REQUIRE(res.value == 2 * (k - 1));
            logd_u.push_back(std::log(static_cast<double>(D)));
            logr_u.push_back(std::log(static_cast<double>(net.ledger.total_rounds())));
        }
        {
            PlanarGraph w = g;
            randomize_weights(w, 9, k);
            BuildOptions opt;
            BddTree bdd = build_bdd(w, bfs_tree_edges(w, 0), 0, opt);
            SimNetwork net(w, 1);
            LabelResult lr = weighted_labels(net, bdd);
            (void)lr;
            logd_w.push_back(std::log(static_cast<double>(D)));
            logr_w.push_back(std::log(static_cast<double>(net.ledger.total_rounds())));
        }
    }
    auto slope = [](const std::vector<double>& x, const std::vector<double>& y) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            mx += x[i];
            my += y[i];
        }
        mx /= x.size();
        my /= y.size();
        double num = 0, den = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            num += (x[i] - mx) * (y[i] - my);
            den += (x[i] - mx) * (x[i] - mx);
        }
        return num / den;
    };
    double a_u = slope(logd_u, logr_u);
    double a_w = slope(logd_w, logr_w);
    report(9, "fitted exponents: diameter <= 5, weighted labels <= 3",
           a_u <= 5.0 && a_w <= 3.0,
           "unweighted diameter a=" + std::to_string(a_u) + ", weighted labels a=" +
               std::to_string(a_w) + " (regression over k in {8,12,16,20})");
}

TEST_CASE("10: determinism of replayed runs") {
    bool ok = true;
    // suite replay
    {
        ExperimentSpec spec;
        spec.command = "sim-diameter";
        GraphSource src;
        src.gen.kind = "grid";
        src.gen.a = 6;
        src.gen.b = 6;
        spec.graphs.push_back(src);
        src.gen.kind = "random-triangulation";
        src.gen.a = 60;
        src.gen.seed = 9;
        spec.graphs.push_back(src);
        spec.seed = 42;
        SuiteResult a = run_suite(spec);
        SuiteResult b = run_suite(spec);
        ok = ok && a.json == b.json && a.csv == b.csv;
    }
    // transcript replay
    {
        PlanarGraph g = make_random_triangulation(80, 3);
        auto once = [&]() {
            BuildOptions opt;
            opt.leaf_threshold = 10;
            BddTree bdd = build_bdd(g, bfs_tree_edges(g, 0), 0, opt);
            SimNetwork net(g, 77);
            LabelResult lr = unweighted_labels(net, bdd);
            unweighted_diameter(net, bdd, lr, 77);
            return net.ledger.transcript_hash;
        };
        ok = ok && once() == once();
    }
    // serialized artifacts
    {
        PlanarGraph g = make_grid(5, 7);
        FaceSet fs = enumerate_faces(g);
        FaceSources s = sources_on_face(g, fs, outer_face(g, fs), 5);
        std::vector<VertexId> all(g.n);
        for (int v = 0; v < g.n; ++v) all[v] = v;
        ok = ok && encode(g, s, all).serialize() == encode(g, s, all).serialize();
        OpStream st = reference_op_stream(g, s);
        ok = ok && st.dump() == OpStream::parse(st.dump()).dump();
    }
    report(10, "identical spec and seed reproduce outputs byte for byte", ok,
           ok ? "suite, transcript and binary artifacts replay identically"
              : "replay diverged");
}
