// pmk: planar metric kit. Graph generation and validation, separators,
// decompositions, metric compression, core-sets, diameters, and the
// synchronous simulator, from one binary.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "pmk/bdd.hpp"
#include "pmk/compression.hpp"
#include "pmk/congest.hpp"
#include "pmk/coreset.hpp"
#include "pmk/diameter.hpp"
#include "pmk/experiment.hpp"
#include "pmk/fast_tuples.hpp"

using namespace pmk;
using nlohmann::json;

namespace {

struct Global {
    std::uint64_t seed = 1;
    bool as_json = false;
    bool quiet = false;
};

void emit(const Global& g, const json& j, const std::string& plain) {
    if (g.quiet) return;
    if (g.as_json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << plain;
}

FaceSources parse_sources(const PlanarGraph& g, const std::string& spec) {
    // face:<id>[:k]
    require(spec.rfind("face:", 0) == 0, "SpecError",
            "sources must be 'face:<id>[:k]', got '" + spec + "'");
    std::string rest = spec.substr(5);
    auto colon = rest.find(':');
    int face = std::stoi(rest.substr(0, colon));
    FaceSet fs = enumerate_faces(g);
    if (face < 0) face = outer_face(g, fs);
    int k = colon == std::string::npos ? 4 : std::stoi(rest.substr(colon + 1));
    return sources_on_face(g, fs, face, k);
}

std::vector<EdgeId> parse_tree(const PlanarGraph& g, const std::string& spec) {
    if (spec.rfind("bfs:", 0) == 0) return bfs_tree_edges(g, std::stoi(spec.substr(4)));
    if (spec.rfind("sssp:", 0) == 0) return sssp_tree_edges(g, std::stoi(spec.substr(5)));
    fail("SpecError", "tree must be bfs:<root> or sssp:<root>");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"planar metric kit"};
    app.require_subcommand(1);
    app.fallthrough();
    Global gl;
    app.add_option("--seed", gl.seed, "global seed");
    app.add_flag("--json", gl.as_json, "machine-readable output");
    app.add_flag("--quiet", gl.quiet, "suppress output");

    // validate
    std::string v_file;
    auto* c_validate = app.add_subcommand("validate", "check a rotation system");
    c_validate->add_option("file", v_file)->required();

    // gen
    std::string g_kind, g_out;
    int g_a = 4, g_b = 0;
    long long g_wmax = 0;
    auto* c_gen = app.add_subcommand("gen", "generate a graph");
    c_gen->add_option("kind", g_kind, "grid|random-triangulation|path|cycle")->required();
    c_gen->add_option("a", g_a, "size (rows or n)")->required();
    c_gen->add_option("b", g_b, "grid columns / triangulation boundary");
    c_gen->add_option("--weighted", g_wmax, "random integer weights in [1,wmax]");
    c_gen->add_option("-o,--out", g_out, "output file (default stdout)");

    // sep
    std::string s_file, s_tree = "bfs:0", s_weights = "unit";
    auto* c_sep = app.add_subcommand("sep", "balanced cycle separator");
    c_sep->add_option("file", s_file)->required();
    c_sep->add_option("--tree", s_tree, "bfs:<root> or sssp:<root>");
    c_sep->add_option("--weights", s_weights, "unit or a file of vertex weights");

    // bdd
    std::string b_file, b_tree = "bfs:0", b_dump;
    long long b_threshold = -1;
    bool b_validate = false;
    auto* c_bdd = app.add_subcommand("bdd", "bounded-diameter decomposition");
    c_bdd->add_option("file", b_file)->required();
    c_bdd->add_option("--tree", b_tree);
    c_bdd->add_option("--threshold", b_threshold);
    c_bdd->add_flag("--validate", b_validate);
    c_bdd->add_option("--dump", b_dump, "write the bag list to a file");

    // compress / fast-compress
    std::string k_file, k_sources = "face:-1:4", k_out, k_targets = "all";
    auto* c_comp = app.add_subcommand("compress", "exact tuple-table compression");
    c_comp->add_option("file", k_file)->required();
    c_comp->add_option("--sources", k_sources);
    c_comp->add_option("--targets", k_targets, "all or a file of vertex ids");
    c_comp->add_option("--out", k_out, "binary output path");
    std::string f_file, f_sources = "face:-1:4", f_opstream, f_prime = "auto";
    auto* c_fast = app.add_subcommand("fast-compress", "hashed tuple compression");
    c_fast->add_option("file", f_file)->required();
    c_fast->add_option("--sources", f_sources);
    c_fast->add_option("--prime", f_prime, "auto (smallest prime above n^4)");
    c_fast->add_option("--opstream", f_opstream, "dump the operation stream");

    // coreset / mcompress
    std::string cs_file, cs_sources = "face:-1:4", cs_delta = "1";
    auto* c_core = app.add_subcommand("coreset", "additive core-set");
    c_core->add_option("file", cs_file)->required();
    c_core->add_option("--sources", cs_sources);
    c_core->add_option("--delta", cs_delta)->required();
    bool cs_fast = false;
    c_core->add_flag("--fast", cs_fast, "projection + shifted-grid construction");
    std::string mc_file, mc_sources = "face:-1:4", mc_eps = "1/2";
    auto* c_mc = app.add_subcommand("mcompress", "multiplicative compression");
    c_mc->add_option("file", mc_file)->required();
    c_mc->add_option("--sources", mc_sources);
    c_mc->add_option("--eps", mc_eps)->required();

    // diameter
    std::string d_file, d_eps;
    auto* c_diam = app.add_subcommand("diameter", "centralized diameter");
    c_diam->add_option("file", d_file)->required();
    c_diam->add_option("--eps", d_eps, "approximation (weighted graphs)");

    // sim
    std::string sim_prog, sim_file, sim_eps = "1/2", sim_ledger;
    auto* c_sim = app.add_subcommand("sim", "synchronous simulator programs");
    c_sim->add_option("program", sim_prog, "diameter|sssp|labels")->required();
    c_sim->add_option("file", sim_file)->required();
    c_sim->add_option("--eps", sim_eps);
    c_sim->add_option("--ledger", sim_ledger, "write the round ledger JSON");

    // suite
    std::string su_file;
    auto* c_suite = app.add_subcommand("suite", "run an experiment spec");
    c_suite->add_option("spec", su_file)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*c_validate) {
            PlanarGraph g = load_graph_file(v_file);
            EmbeddingReport rep = validate_embedding(g);
            json j{{"ok", rep.ok},
                   {"faces", rep.faces},
                   {"components", rep.components},
                   {"error", rep.error_code},
                   {"detail", rep.detail}};
            std::ostringstream os;
            os << (rep.ok ? "valid" : "INVALID ") << rep.error_code << " faces=" << rep.faces
               << " components=" << rep.components << "\n";
            emit(gl, j, os.str());
            return rep.ok ? 0 : 3;
        }
        if (*c_gen) {
            GenParams p;
            p.kind = g_kind;
            p.a = g_a;
            p.b = g_b;
            p.seed = gl.seed;
            p.wmax = g_wmax;
            PlanarGraph g = generate(p);
            if (g_out.empty())
                std::cout << write_graph(g);
            else
                save_graph_file(g, g_out);
            return 0;
        }
        if (*c_sep) {
            PlanarGraph g = load_graph_file(s_file);
            std::vector<long long> w(g.n, 1);
            if (s_weights != "unit") {
                std::ifstream in(s_weights);
                require(static_cast<bool>(in), "IoError", "cannot open " + s_weights);
                for (auto& x : w) in >> x;
            }
            auto tree = parse_tree(g, s_tree);
            PlanarGraph host = g;
            if (!is_biconnected(host)) host = biconnect_augment(g).graph;
            CycleSeparator sep = cycle_separator(host, tree, w);
            json edges = json::array();
            for (EdgeId e : sep.tree_path_edges) edges.push_back(e);
            json j{{"cycle_vertices", sep.cycle_vertices},
                   {"tree_path_edges", edges},
                   {"closing_virtual", sep.closing_virtual},
                   {"weight_inside", sep.weight_inside},
                   {"weight_outside", sep.weight_outside},
                   {"weight_cycle", sep.weight_cycle},
                   {"balance", sep.balance}};
            std::ostringstream os;
            os << "cycle of " << sep.cycle_vertices.size() << " vertices, balance "
               << sep.balance << (sep.closing_virtual ? " (virtual closing edge)" : "")
               << "\n";
            emit(gl, j, os.str());
            return 0;
        }
        if (*c_bdd) {
            PlanarGraph g = load_graph_file(b_file);
            BuildOptions opt;
            opt.leaf_threshold = b_threshold;
            opt.mode = b_tree.rfind("sssp:", 0) == 0 ? 1 : 0;
            VertexId root = std::stoi(b_tree.substr(b_tree.find(':') + 1));
            BddTree bdd = build_bdd(g, parse_tree(g, b_tree), root, opt);
            if (!b_dump.empty()) {
                std::ofstream f(b_dump);
                f << dump_bdd(bdd);
            }
            json j{{"bags", bdd.bags.size()},
                   {"depth", bdd.max_depth},
                   {"threshold", bdd.leaf_threshold}};
            std::ostringstream os;
            os << "bags=" << bdd.bags.size() << " depth=" << bdd.max_depth << "\n";
            int code = 0;
            if (b_validate) {
                PropertyReport rep = validate_bdd(bdd, g);
                j["all_pass"] = rep.all_pass;
                os << rep.summary();
                if (!rep.all_pass) code = 3;
            }
            emit(gl, j, os.str());
            return code;
        }
        if (*c_comp) {
            PlanarGraph g = load_graph_file(k_file);
            FaceSources s = parse_sources(g, k_sources);
            std::vector<VertexId> targets;
            if (k_targets == "all") {
                targets.resize(g.n);
                for (int v = 0; v < g.n; ++v) targets[v] = v;
            } else {
                std::ifstream in(k_targets);
                require(static_cast<bool>(in), "IoError", "cannot open " + k_targets);
                VertexId v;
                while (in >> v) targets.push_back(v);
            }
            TupleTable tab = encode(g, s, targets);
            if (!k_out.empty()) {
                auto bytes = tab.serialize();
                std::ofstream f(k_out, std::ios::binary);
                f.write(reinterpret_cast<const char*>(bytes.data()),
                        static_cast<std::streamsize>(bytes.size()));
            }
            json j{{"l", s.vertices.size()},
                   {"rows", tab.table.size()},
                   {"targets", tab.targets.size()},
                   {"table_bits", tab.table_bits()},
                   {"index_bits", tab.index_bits()}};
            std::ostringstream os;
            os << "rows=" << tab.table.size() << " bits=" << tab.total_bits() << "\n";
            emit(gl, j, os.str());
            return 0;
        }
        if (*c_fast) {
            PlanarGraph g = load_graph_file(f_file);
            FaceSources s = parse_sources(g, f_sources);
            require(f_prime == "auto", "SpecError", "only --prime auto is supported");
            if (!f_opstream.empty()) {
                OpStream st = reference_op_stream(g, s);
                std::ofstream f(f_opstream);
                f << st.dump();
            }
            TupleTable tab = fast_compress(g, s, gl.seed);
            json j{{"l", s.vertices.size()},
                   {"rows", tab.table.size()},
                   {"table_bits", tab.table_bits()}};
            std::ostringstream os;
            os << "rows=" << tab.table.size() << "\n";
            emit(gl, j, os.str());
            return 0;
        }
        if (*c_core) {
            PlanarGraph g = load_graph_file(cs_file);
            FaceSources s = parse_sources(g, cs_sources);
            Rat delta = parse_rat(cs_delta);
            CoreSet cs = cs_fast ? weighted_fast_coreset(g, s, delta, gl.seed)
                                 : additive_coreset(g, s, delta);
            auto tuples = compute_tuples(g, s);
            int violations = 0;
            for (VertexId v = 0; v < g.n; ++v) {
                const auto& mt = tuples[cs.members[cs.witness[v]]];
                for (std::size_t i = 0; i < mt.size(); ++i)
                    if (Rat(std::llabs(tuples[v][i] - mt[i])) > cs.delta) ++violations;
            }
            json j{{"members", cs.members.size()},
                   {"delta", to_string(cs.delta)},
                   {"bucket_budget", cs.bucket_count},
                   {"family_size", cs.family_size},
                   {"witness_violations", violations}};
            std::ostringstream os;
            os << "members=" << cs.members.size() << " violations=" << violations << "\n";
            emit(gl, j, os.str());
            return violations ? 3 : 0;
        }
        if (*c_mc) {
            PlanarGraph g = load_graph_file(mc_file);
            FaceSources s = parse_sources(g, mc_sources);
            Rat eps = parse_rat(mc_eps);
            MultiCompression mc = multiplicative_compress(g, s, eps, gl.seed);
            DistOracle oracle(g);
            int pairs = 0, within = 0, under = 0;
            for (VertexId sv : s.vertices)
                for (VertexId t = 0; t < g.n; ++t) {
                    Rat est = multiplicative_decode(mc, sv, t);
                    Rat truth(oracle.dist(sv, t));
                    ++pairs;
                    if (est < truth) ++under;
                    if (truth == Rat(0) || est <= (Rat(1) + eps) * truth) ++within;
                }
            json j{{"parts", mc.parts.size()},
                   {"levels", mc.levels},
                   {"reps", mc.reps},
                   {"pairs", pairs},
                   {"within", within},
                   {"underestimates", under}};
            std::ostringstream os;
            os << "parts=" << mc.parts.size() << " within=" << within << "/" << pairs
               << "\n";
            emit(gl, j, os.str());
            return under ? 3 : 0;
        }
        if (*c_diam) {
            PlanarGraph g = load_graph_file(d_file);
            DiameterStats st;
            json j;
            std::ostringstream os;
            if (!d_eps.empty()) {
                Rat est = approx_diameter(g, parse_rat(d_eps), gl.seed, false, &st);
                j["estimate"] = to_string(est);
                os << "estimate=" << to_string(est);
            } else {
                require(!g.weighted, "SpecError", "weighted graphs need --eps");
                Dist v = exact_diameter(g, &st);
                j["value"] = v;
                os << "diameter=" << v;
            }
            j["depth"] = st.depth;
            j["frames"] = st.frames;
            j["max_coreset"] = st.max_coreset;
            os << " depth=" << st.depth << " frames=" << st.frames << "\n";
            emit(gl, j, os.str());
            return 0;
        }
        if (*c_sim) {
            PlanarGraph g = load_graph_file(sim_file);
            SimNetwork net(g, gl.seed);
            json j;
            std::ostringstream os;
            int code = 0;
            if (sim_prog == "diameter" && g.weighted) {
                auto res = approx_weighted_diameter(net, g, parse_rat(sim_eps), gl.seed);
                j["estimate"] = to_string(res.estimate);
                j["two_approx"] = res.two_approx;
                os << "estimate=" << to_string(res.estimate) << "\n";
            } else {
                BuildOptions opt;
                BddTree bdd = build_bdd(g, bfs_tree_edges(g, 0), 0, opt);
                LabelResult lr =
                    g.weighted ? weighted_labels(net, bdd) : unweighted_labels(net, bdd);
                if (sim_prog == "labels") {
                    j["max_label_bits"] = lr.max_label_bits;
                    os << "labels ok, max_bits=" << lr.max_label_bits << "\n";
                } else if (sim_prog == "sssp") {
                    SsspResult res = sssp(net, lr, 0);
                    auto sp = single_source_distances(g, 0);
                    bool ok = res.dist == sp.dist;
                    j["ok"] = ok;
                    os << (ok ? "sssp ok" : "SSSP MISMATCH") << "\n";
                    if (!ok) code = 3;
                } else if (sim_prog == "diameter") {
                    auto res = unweighted_diameter(net, bdd, lr, gl.seed);
                    j["value"] = res.value;
                    os << "diameter=" << res.value << "\n";
                } else {
                    fail("SpecError", "unknown sim program '" + sim_prog + "'");
                }
            }
            j["executed_rounds"] = net.ledger.executed_rounds();
            j["charged_rounds"] = net.ledger.charged_rounds();
            j["total_rounds"] = net.ledger.total_rounds();
            if (!sim_ledger.empty()) {
                std::ofstream f(sim_ledger);
                f << net.ledger.to_json();
            }
            emit(gl, j, os.str());
            return code;
        }
        if (*c_suite) {
            ExperimentSpec spec = ExperimentSpec::load(su_file);
            SuiteResult res = run_suite(spec);
            json j{{"runs", res.runs}, {"violations", res.violations}};
            std::ostringstream os;
            os << "runs=" << res.runs << " violations=" << res.violations << "\n";
            if (spec.out_csv.empty() && !gl.as_json) os << res.csv;
            emit(gl, j, os.str());
            return res.violations ? 3 : 0;
        }
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        bool property = std::string(e.code()) == "NonPlanarRotation" ||
                        e.code() == "HashCollisionDetected" || e.code() == "DriverViolation";
        return property ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
