#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "espsim/analysis.hpp"
#include "espsim/model.hpp"

namespace espsim {

// Scenario-file problem: message carries file:line and the field name.
struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RandomSpec {
    int n_jobs = 0;
    int phases_lo = 1, phases_hi = 3;
    double work_lo = 0.5, work_hi = 2.0;
    int parallelism_lo = 1, parallelism_hi = 8;
    bool parseq = false;          // draw h from {1, inf} instead of the range
    double release_spread = 0.0;  // 0 => batched; else releases in [0, spread]
    std::optional<std::uint64_t> seed;
};

struct SourceSpec {
    enum class Kind { inline_jobs, theorem5, uniform_random, game };
    Kind kind = Kind::inline_jobs;
    std::string id;
    int line = 0;
    std::vector<Job> jobs;      // inline_jobs
    RandomSpec random;          // uniform_random
    double game_budget = -1.0;  // game; < 0 => default 1/(alpha-1)
};

struct Scenario {
    double alpha = 0.0;
    int P = 0;
    std::vector<std::string> policies;
    std::vector<Objective> objectives{Objective::G};
    std::string output = "-";
    std::optional<std::uint64_t> seed;  // fallback for generators without one
    std::vector<SourceSpec> sources;
    std::string filename;
};

Scenario parse_scenario_file(const std::string& path);
Scenario parse_scenario_text(const std::string& text, const std::string& filename);

// Builds the instance a source describes. The seed override (ESPSIM_SEED)
// takes precedence over per-generator and scenario seeds.
Instance realize_source(const SourceSpec& source, const PowerParams& params,
                        std::optional<std::uint64_t> seed_override);

struct RunResult {
    std::string csv;
    bool all_bounds_ok = true;
};

// One row per (instance, policy, objective) in scenario order; game
// sources produce a single row with the adversary ratio in `ratio` and the
// analytic floor in `lower_bound` (bound_ok then means ratio >= floor).
RunResult run_scenario(const Scenario& scenario,
                       std::optional<std::uint64_t> seed_override);

// run rows repeated per sweep value (value major), with sweep_param,
// sweep_value and ratio_norm = ratio / ln(P)^e appended; e is 1 for
// nequi/G, 1/alpha for game rows, 1-1/alpha for pfirst/H, 0 otherwise.
RunResult sweep_scenario(const Scenario& scenario, const std::string& param,
                         const std::vector<double>& values,
                         std::optional<std::uint64_t> seed_override);

// Lower bounds only: instance_id, alpha, P, n_jobs, g1_lower_bound and,
// for batched PAR-SEQ instances, h_lower_bound. Game sources are skipped.
std::string bounds_csv(const Scenario& scenario,
                       std::optional<std::uint64_t> seed_override);

// Single adversary-game row (the `game` CLI verb).
RunResult game_csv(const PowerParams& params, double budget);

}  // namespace espsim
