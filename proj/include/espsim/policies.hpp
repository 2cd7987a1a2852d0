#pragma once

#include <functional>
#include <string>
#include <vector>

#include "espsim/model.hpp"

namespace espsim {

// Scheduler information levels. The views make information hiding
// structural: a non-clairvoyant decision function cannot read parallelism
// because its view simply does not carry it.
enum class Clairvoyance { non, semi };

// Active job ids only, ascending.
struct NonClairvoyantView {
    std::vector<int> jobs;
    int n_active() const { return static_cast<int>(jobs.size()); }
};

// Ids plus the parallelism of each job's currently running phase
// ("instantaneous parallelism"). No remaining work, no future phases.
struct SemiClairvoyantView {
    struct ActiveJob {
        int id;
        double parallelism;
    };
    std::vector<ActiveJob> jobs;  // ascending id
    int n_active() const { return static_cast<int>(jobs.size()); }
};

struct JobAssignment {
    int job;
    Assignment assignment;
};
// One entry per active job, ascending id. Sum of allocated counts <= P.
using AssignmentPlan = std::vector<JobAssignment>;

// Nonuniform equipartition: every active job gets floor(P/n) processors
// speed-laddered as s_j = (1/((alpha-1) H_P j))^(1/alpha). When n > P the
// P lowest-id jobs get one ladder-top processor each, the rest none.
AssignmentPlan nequi(const NonClairvoyantView& view, const PowerParams& params);

// Uniform conservative equipartition: fluid count min(h, P/n) at uniform
// speed (1/((alpha-1) a))^(1/alpha); per-job power is exactly 1/(alpha-1).
AssignmentPlan uceq(const SemiClairvoyantView& view, const PowerParams& params);

// Parallel-first (batched PAR-SEQ jobs only): if any job is in a
// fully-parallel phase, the lowest-id such job takes all P processors;
// otherwise the P' = min(n, P) processors are shared equally. Total power
// is exactly 1/(alpha-1) either way.
AssignmentPlan pfirst(const SemiClairvoyantView& view, const PowerParams& params);

// A named policy the engine can drive. Decisions are pure functions of the
// view, so identical views produce bit-identical plans.
struct Policy {
    std::string name;
    Clairvoyance level = Clairvoyance::non;
    std::function<AssignmentPlan(const NonClairvoyantView&, const PowerParams&)>
        decide_non;
    std::function<AssignmentPlan(const SemiClairvoyantView&, const PowerParams&)>
        decide_semi;
    bool needs_batched_parseq = false;
};

// "nequi" | "uceq" | "pfirst"; throws std::invalid_argument otherwise.
Policy make_policy(const std::string& name);
const std::vector<std::string>& policy_names();

}  // namespace espsim
