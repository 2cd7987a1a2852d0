#include "espsim/policies.hpp"

#include <cmath>

#include "espsim/numeric.hpp"

namespace espsim {

namespace {

double ladder_speed(const PowerParams& params, double harmonic_P, int rung) {
    return std::pow(1.0 / ((params.alpha - 1.0) * harmonic_P * rung),
                    1.0 / params.alpha);
}

double uniform_speed_for(const PowerParams& params, double count) {
    return std::pow(1.0 / ((params.alpha - 1.0) * count), 1.0 / params.alpha);
}

}  // namespace

AssignmentPlan nequi(const NonClairvoyantView& view, const PowerParams& params) {
    const int n = view.n_active();
    const double h_p = harmonic_number(params.P);
    const int share = params.P / n;  // floor

    AssignmentPlan plan;
    plan.reserve(view.jobs.size());
    if (share >= 1) {
        Discrete ladder;
        ladder.speeds.reserve(share);
        for (int j = 1; j <= share; ++j)
            ladder.speeds.push_back(ladder_speed(params, h_p, j));
        for (int id : view.jobs) plan.push_back({id, ladder});
        return plan;
    }
    // n > P: serve the P lowest ids with one ladder-top processor each.
    const double top = ladder_speed(params, h_p, 1);
    int served = 0;
    for (int id : view.jobs) {
        if (served < params.P) {
            plan.push_back({id, Discrete{{top}}});
            ++served;
        } else {
            plan.push_back({id, Discrete{}});
        }
    }
    return plan;
}

AssignmentPlan uceq(const SemiClairvoyantView& view, const PowerParams& params) {
    const double fair_share = static_cast<double>(params.P) / view.n_active();
    AssignmentPlan plan;
    plan.reserve(view.jobs.size());
    for (const auto& job : view.jobs) {
        const double count = std::min(job.parallelism, fair_share);
        plan.push_back({job.id, Fluid{count, uniform_speed_for(params, count)}});
    }
    return plan;
}

AssignmentPlan pfirst(const SemiClairvoyantView& view, const PowerParams& params) {
    int parallel_id = -1;
    for (const auto& job : view.jobs) {
        if (std::isinf(job.parallelism)) {
            if (parallel_id < 0) parallel_id = job.id;
        } else if (job.parallelism != 1.0) {
            throw ModelViolation("pfirst saw a phase with parallelism " +
                                 std::to_string(job.parallelism) +
                                 "; instance is not PAR-SEQ");
        }
    }

    AssignmentPlan plan;
    plan.reserve(view.jobs.size());
    if (parallel_id >= 0) {
        const double speed =
            uniform_speed_for(params, static_cast<double>(params.P));
        for (const auto& job : view.jobs) {
            if (job.id == parallel_id)
                plan.push_back({job.id, Fluid{static_cast<double>(params.P), speed}});
            else
                plan.push_back({job.id, Fluid{0.0, 0.0}});
        }
        return plan;
    }

    const int shared = std::min(view.n_active(), params.P);
    const double count = static_cast<double>(shared) / view.n_active();
    const double speed = uniform_speed_for(params, static_cast<double>(shared));
    for (const auto& job : view.jobs)
        plan.push_back({job.id, Fluid{count, speed}});
    return plan;
}

Policy make_policy(const std::string& name) {
    Policy p;
    p.name = name;
    if (name == "nequi") {
        p.level = Clairvoyance::non;
        p.decide_non = nequi;
        return p;
    }
    if (name == "uceq") {
        p.level = Clairvoyance::semi;
        p.decide_semi = uceq;
        return p;
    }
    if (name == "pfirst") {
        p.level = Clairvoyance::semi;
        p.decide_semi = pfirst;
        p.needs_batched_parseq = true;
        return p;
    }
    throw std::invalid_argument("unknown policy: " + name);
}

const std::vector<std::string>& policy_names() {
    static const std::vector<std::string> names = {"nequi", "uceq", "pfirst"};
    return names;
}

}  // namespace espsim
