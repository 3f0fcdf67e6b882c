#pragma once

// Experiment harness: serializable run specifications, per-run JSON records
// and aggregate CSV series. Replaying a spec reproduces outputs byte for
// byte.

#include <string>
#include <vector>

#include "pmk/graph.hpp"
#include "pmk/rational.hpp"

namespace pmk {

struct GraphSource {
    std::string file;  // takes precedence when non-empty
    GenParams gen;

    PlanarGraph load() const;
    std::string describe() const;
};

struct ExperimentSpec {
    std::string command; // compress | coreset | mcompress | diameter | sim-diameter |
                         // sim-labels | sim-sssp | bdd
    std::vector<GraphSource> graphs;
    int sources_k = 4;
    Rat eps = Rat(1, 2);
    Rat delta = Rat(1);
    std::uint64_t seed = 1;
    int repetitions = 1;
    long long leaf_threshold = -1;
    std::string out_json; // per-run records
    std::string out_csv;  // aggregate series

    std::string to_json() const;
    static ExperimentSpec from_json(const std::string& text);
    static ExperimentSpec load(const std::string& path);
};

struct SuiteResult {
    std::string json; // per-run records (also written to out_json if set)
    std::string csv;  // aggregate table (also written to out_csv if set)
    int runs = 0;
    int violations = 0; // failed property checks across runs
};

SuiteResult run_suite(const ExperimentSpec& spec);

} // namespace pmk
