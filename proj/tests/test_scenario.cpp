#include "doctest.h"

#include <string>

#include "espsim/scenario.hpp"

using namespace espsim;

namespace {

const char* kInlineScenario = R"(# single balanced job
alpha = 2
P = 4
policies = uceq
objective = G

[instance balanced]
job = release=0 phases=4:4
)";

}  // namespace

TEST_CASE("parse a minimal scenario") {
    const Scenario sc = parse_scenario_text(kInlineScenario, "inline.scn");
    CHECK(sc.alpha == 2.0);
    CHECK(sc.P == 4);
    REQUIRE(sc.policies.size() == 1);
    CHECK(sc.policies[0] == "uceq");
    REQUIRE(sc.objectives.size() == 1);
    CHECK(sc.objectives[0] == Objective::G);
    CHECK(sc.output == "-");
    REQUIRE(sc.sources.size() == 1);
    CHECK(sc.sources[0].id == "balanced");
    REQUIRE(sc.sources[0].jobs.size() == 1);
    CHECK(sc.sources[0].jobs[0].phases[0].work == 4.0);
    CHECK(sc.sources[0].jobs[0].phases[0].parallelism == 4.0);
}

TEST_CASE("parse errors carry file, line, and field") {
    CHECK_THROWS_WITH_AS(
        parse_scenario_text("alpha = 1.0\nP = 2\npolicies = uceq\n"
                            "[instance i]\njob = release=0 phases=1:1\n",
                            "bad.scn"),
        doctest::Contains("alpha must exceed 1"), ScenarioError);
    CHECK_THROWS_WITH_AS(
        parse_scenario_text("alpha = 1.0\n", "bad.scn"),
        doctest::Contains("bad.scn:1"), ScenarioError);
    CHECK_THROWS_WITH_AS(
        parse_scenario_text("alpha = 2\nP = 2\npolicies = frobnicate\n", "p.scn"),
        doctest::Contains("unknown policy"), ScenarioError);
    CHECK_THROWS_WITH_AS(
        parse_scenario_text("alpha = 2\nP = 2\nbogus = 1\n", "k.scn"),
        doctest::Contains("'bogus'"), ScenarioError);
    // uniform-random without any seed
    CHECK_THROWS_WITH_AS(
        parse_scenario_text("alpha = 2\nP = 2\npolicies = uceq\n"
                            "[generator r]\nkind = uniform-random\njobs = 3\n",
                            "s.scn"),
        doctest::Contains("requires a seed"), ScenarioError);
    // missing P
    CHECK_THROWS_AS(parse_scenario_text("alpha = 2\n", "m.scn"), ScenarioError);
    // instance with no jobs
    CHECK_THROWS_AS(
        parse_scenario_text("alpha = 2\nP = 2\npolicies = uceq\n[instance e]\n",
                            "e.scn"),
        ScenarioError);
}

TEST_CASE("infinite parallelism spelled inf") {
    const Scenario sc = parse_scenario_text(
        "alpha = 2\nP = 2\npolicies = pfirst\nobjective = H\n"
        "[instance par]\njob = release=0 phases=2:inf,1:1\n",
        "inf.scn");
    const Phase& p = sc.sources[0].jobs[0].phases[0];
    CHECK(p.fully_parallel());
}

TEST_CASE("generator sections realize deterministically") {
    const Scenario sc = parse_scenario_text(
        "alpha = 2\nP = 4\npolicies = uceq\n"
        "[generator stair]\nkind = theorem5\n"
        "[generator rnd]\nkind = uniform-random\njobs = 5\nseed = 9\n"
        "phases = 1..2\nwork = 0.5..1.5\nparallelism = 1..4\n",
        "gen.scn");
    const PowerParams params(sc.alpha, sc.P);

    const Instance stair = realize_source(sc.sources[0], params, std::nullopt);
    CHECK(stair.jobs.size() == 4);

    const Instance a = realize_source(sc.sources[1], params, std::nullopt);
    const Instance b = realize_source(sc.sources[1], params, std::nullopt);
    REQUIRE(a.jobs.size() == 5);
    REQUIRE(a.jobs.size() == b.jobs.size());
    for (std::size_t i = 0; i < a.jobs.size(); ++i) {
        REQUIRE(a.jobs[i].phases.size() == b.jobs[i].phases.size());
        for (std::size_t k = 0; k < a.jobs[i].phases.size(); ++k) {
            CHECK(a.jobs[i].phases[k].work == b.jobs[i].phases[k].work);
            CHECK(a.jobs[i].phases[k].parallelism == b.jobs[i].phases[k].parallelism);
        }
    }
    // a seed override changes the draw
    const Instance c = realize_source(sc.sources[1], params, 1234);
    bool differs = false;
    for (std::size_t i = 0; i < a.jobs.size() && !differs; ++i)
        differs = a.jobs[i].phases.size() != c.jobs[i].phases.size() ||
                  a.jobs[i].phases[0].work != c.jobs[i].phases[0].work;
    CHECK(differs);
}

TEST_CASE("parseq generators emit only sequential and fully-parallel phases") {
    const Scenario sc = parse_scenario_text(
        "alpha = 2\nP = 4\npolicies = pfirst\nobjective = H\n"
        "[generator ps]\nkind = uniform-random\njobs = 8\nseed = 3\nparseq = true\n",
        "ps.scn");
    const Instance inst =
        realize_source(sc.sources[0], PowerParams(sc.alpha, sc.P), std::nullopt);
    CHECK(parseq(inst));
    CHECK(batched(inst));
}

TEST_CASE("run produces the documented row for the balanced job") {
    const Scenario sc = parse_scenario_text(kInlineScenario, "inline.scn");
    const RunResult r = run_scenario(sc, std::nullopt);
    CHECK(r.all_bounds_ok);
    const std::string expected_header =
        "instance_id,policy,alpha,P,n_jobs,F,E,M,G,H,lower_bound,ratio,"
        "theorem_bound,bound_ok";
    CHECK(r.csv.substr(0, expected_header.size()) == expected_header);
    CHECK(r.csv.find("balanced,uceq,2,4,1,2,2,2,4,4,4,1,12,true") !=
          std::string::npos);
}

TEST_CASE("run reports the staircase numbers") {
    const char* text =
        "alpha = 2\nP = 3\npolicies = pfirst\nobjective = H\n"
        "[generator stair]\nkind = theorem5\n";
    const Scenario sc = parse_scenario_text(text, "stair.scn");
    const RunResult r = run_scenario(sc, std::nullopt);
    CHECK(r.all_bounds_ok);
    // H ~ 2.9528, lower bound ~ 2.7080
    CHECK(r.csv.find("2.95279327577") != std::string::npos);
    CHECK(r.csv.find("2.70801280155") != std::string::npos);
    CHECK(r.csv.find(",true") != std::string::npos);
}

TEST_CASE("run is byte-deterministic for a fixed seed") {
    const char* text =
        "alpha = 2\nP = 4\npolicies = uceq, nequi\nobjective = G\n"
        "[generator rnd]\nkind = uniform-random\njobs = 6\nseed = 11\n";
    const Scenario sc = parse_scenario_text(text, "det.scn");
    CHECK(run_scenario(sc, std::nullopt).csv == run_scenario(sc, std::nullopt).csv);
    CHECK(run_scenario(sc, 99).csv != run_scenario(sc, std::nullopt).csv);
}

TEST_CASE("sweep orders rows value-major and appends normalization") {
    const char* text =
        "alpha = 2\nP = 2\npolicies = nequi\nobjective = G\n"
        "[instance one]\njob = release=0 phases=1:1\n";
    const Scenario sc = parse_scenario_text(text, "sweep.scn");
    const RunResult r = sweep_scenario(sc, "P", {2, 4}, std::nullopt);
    const auto first = r.csv.find("\none,nequi,2,2,");
    const auto second = r.csv.find("\none,nequi,2,4,");
    REQUIRE(first != std::string::npos);
    REQUIRE(second != std::string::npos);
    CHECK(first < second);
    CHECK(r.csv.find(",sweep_param,sweep_value,ratio_norm") != std::string::npos);
    CHECK(r.csv.find(",P,2,") != std::string::npos);
    CHECK(r.csv.find(",P,4,") != std::string::npos);

    CHECK_THROWS_AS(sweep_scenario(sc, "P", {}, std::nullopt), ScenarioError);
    CHECK_THROWS_AS(sweep_scenario(sc, "n_jobs", {3}, std::nullopt), ScenarioError);
    CHECK_THROWS_AS(sweep_scenario(sc, "gamma", {1}, std::nullopt), ScenarioError);
    CHECK_THROWS_AS(sweep_scenario(sc, "alpha", {0.5}, std::nullopt), ScenarioError);
}

TEST_CASE("alpha sweep keeps uceq inside its constants") {
    const char* text =
        "alpha = 2\nP = 8\npolicies = uceq\nobjective = G\n"
        "[generator rnd]\nkind = uniform-random\njobs = 6\nseed = 5\n"
        "parallelism = 1..8\n";
    const Scenario sc = parse_scenario_text(text, "a.scn");
    const RunResult r = sweep_scenario(sc, "alpha", {1.5, 2.0, 3.0}, std::nullopt);
    CHECK(r.all_bounds_ok);
    CHECK(r.csv.find(",alpha,1.5,") != std::string::npos);
    CHECK(r.csv.find(",alpha,3,") != std::string::npos);
}

TEST_CASE("game sections sweep over P against the analytic floor") {
    const char* text = "alpha = 2\nP = 2\n[game g]\n";
    const Scenario sc = parse_scenario_text(text, "game.scn");  // no policies needed
    const RunResult r = sweep_scenario(sc, "P", {2, 4, 8, 16, 32}, std::nullopt);
    CHECK(r.all_bounds_ok);  // ratio >= 0.5 * sqrt(H_P) at every point
    int rows = 0;
    for (char c : r.csv)
        if (c == '\n') ++rows;
    CHECK(rows == 6);  // header + one row per sweep value
}

TEST_CASE("bounds lists both lower bounds where they apply") {
    const char* text =
        "alpha = 2\nP = 3\npolicies = uceq\n"
        "[generator stair]\nkind = theorem5\n"
        "[instance loose]\njob = release=0.5 phases=1:2\n";
    const Scenario sc = parse_scenario_text(text, "b.scn");
    const std::string csv = bounds_csv(sc, std::nullopt);
    CHECK(csv.find("instance_id,alpha,P,n_jobs,g1_lower_bound,h_lower_bound") == 0);
    CHECK(csv.find("stair,2,3,3,") != std::string::npos);
    // non-batched instance: h bound column left empty
    CHECK(csv.find("loose,2,3,1,") != std::string::npos);
    const auto line_start = csv.find("loose");
    const auto line_end = csv.find('\n', line_start);
    const std::string line = csv.substr(line_start, line_end - line_start);
    CHECK(line.back() == ',');
}

TEST_CASE("game rows report the adversary ratio against the floor") {
    const RunResult r = game_csv(PowerParams(2.0, 2), 1.0);
    CHECK(r.all_bounds_ok);
    CHECK(r.csv.find("game,game,2,2,1,,,,,,") != std::string::npos);
    CHECK(r.csv.find("1.08239220029") != std::string::npos);
}

TEST_CASE("game sections inside scenarios") {
    const char* text =
        "alpha = 2\nP = 4\n"
        "[game adversary]\nbudget = 1\n";
    const Scenario sc = parse_scenario_text(text, "g.scn");
    const RunResult r = run_scenario(sc, std::nullopt);
    CHECK(r.csv.find("adversary,game,2,4,1,") != std::string::npos);
    CHECK(r.all_bounds_ok);
}
