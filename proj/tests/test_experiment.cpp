#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pmk/experiment.hpp"

using namespace pmk;

namespace {

ExperimentSpec grid_spec(const std::string& command) {
    ExperimentSpec s;
    s.command = command;
    for (int k : {4, 5, 6}) {
        GraphSource src;
        src.gen.kind = "grid";
        src.gen.a = k;
        src.gen.b = k;
        s.graphs.push_back(src);
    }
    s.sources_k = 3;
    s.seed = 5;
    return s;
}

} // namespace

TEST_CASE("spec serialization round-trips") {
    ExperimentSpec s = grid_spec("compress");
    s.eps = Rat(1, 4);
    s.delta = Rat(3, 2);
    std::string text = s.to_json();
    ExperimentSpec back = ExperimentSpec::from_json(text);
    CHECK(back.to_json() == text);
    CHECK(back.command == "compress");
    CHECK(back.graphs.size() == 3);
    CHECK(back.eps == Rat(1, 4));
}

TEST_CASE("compress suite emits the expected schema and passes") {
    ExperimentSpec s = grid_spec("compress");
    SuiteResult res = run_suite(s);
    CHECK(res.runs == 3);
    CHECK(res.violations == 0);
    CHECK(res.csv.rfind("graph,n,D,l,distinct_tuples,bound_ratio", 0) == 0);
    CHECK(std::count(res.csv.begin(), res.csv.end(), '\n') == 4); // header + 3 rows
}

TEST_CASE("zero repetitions emit only the header") {
    ExperimentSpec s = grid_spec("coreset");
    s.repetitions = 0;
    SuiteResult res = run_suite(s);
    CHECK(res.runs == 0);
    CHECK(std::count(res.csv.begin(), res.csv.end(), '\n') == 1);
    CHECK(res.json == "[]\n");
}

TEST_CASE("replaying a spec is byte-identical") {
    for (const char* cmd : {"compress", "coreset", "diameter", "sim-diameter"}) {
        ExperimentSpec s = grid_spec(cmd);
        s.delta = Rat(4);
        SuiteResult a = run_suite(s);
        SuiteResult b = run_suite(s);
        CHECK(a.json == b.json);
        CHECK(a.csv == b.csv);
    }
}

TEST_CASE("weighted diameter suite runs the approximate path") {
    ExperimentSpec s;
    s.command = "diameter";
    GraphSource src;
    src.gen.kind = "grid";
    src.gen.a = 5;
    src.gen.b = 5;
    src.gen.wmax = 7;
    src.gen.seed = 3;
    s.graphs.push_back(src);
    s.eps = Rat(1, 2);
    SuiteResult res = run_suite(s);
    CHECK(res.runs == 1);
    CHECK(res.violations == 0);
    CHECK(res.json.find("approx") != std::string::npos);
}

TEST_CASE("unknown commands are rejected") {
    ExperimentSpec s = grid_spec("nope");
    CHECK_THROWS_WITH_AS(run_suite(s), doctest::Contains("SpecError"), Error);
}
