#include "espsim/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "espsim/baselines.hpp"
#include "espsim/numeric.hpp"

namespace espsim {

namespace {

// count of entries >= z in a descending-sorted vector
int count_at_least(const std::vector<double>& sorted_desc, double z) {
    auto it = std::lower_bound(sorted_desc.begin(), sorted_desc.end(), z,
                               [](double v, double key) { return v >= key; });
    return static_cast<int>(it - sorted_desc.begin());
}

}  // namespace

double potential(const PotentialState& state, const PowerParams& params) {
    std::vector<double> online = state.online_remaining;
    std::vector<double> reference = state.reference_remaining;
    std::sort(online.begin(), online.end(), std::greater<>());
    std::sort(reference.begin(), reference.end(), std::greater<>());

    std::vector<double> breakpoints;
    breakpoints.reserve(online.size() + reference.size());
    for (double w : online)
        if (w > 0.0) breakpoints.push_back(w);
    for (double w : reference)
        if (w > 0.0) breakpoints.push_back(w);
    if (breakpoints.empty()) return 0.0;
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()),
                      breakpoints.end());

    const double e = 1.0 - 1.0 / params.alpha;
    std::vector<double> rank_pow_prefix(online.size() + 1, 0.0);
    for (std::size_t i = 1; i <= online.size(); ++i)
        rank_pow_prefix[i] =
            rank_pow_prefix[i - 1] + std::pow(static_cast<double>(i), e);

    // On (b_{k-1}, b_k] both staircases are constant: count entries >= b_k.
    KahanSum integral;
    double prev = 0.0;
    for (double b : breakpoints) {
        const int n = count_at_least(online, b);
        const int n_ref = count_at_least(reference, b);
        const double term =
            rank_pow_prefix[n] - std::pow(static_cast<double>(n), e) * n_ref;
        integral.add((b - prev) * term);
        prev = b;
    }
    return state.eta * integral.value();
}

bool check_arrival_condition(const PotentialState& state, double new_work,
                             const PowerParams& params) {
    PotentialState after = state;
    after.online_remaining.push_back(new_work);
    after.reference_remaining.push_back(new_work);
    return potential(after, params) <= potential(state, params) + 1e-9;
}

double potential_eta(Bound bound, const PowerParams& params) {
    const BoundConstants c = competitive_constants(params, bound);
    const double p_pow = std::pow(params.P, 1.0 - 1.0 / params.alpha);
    switch (bound) {
        case Bound::nequi_g:
            return c.eta_prime *
                   std::pow(harmonic_number(params.P), 1.0 / params.alpha) / p_pow;
        case Bound::uceq_g:
            return c.eta_prime / p_pow;
        default:
            throw std::invalid_argument("no potential eta for this bound");
    }
}

RatioReport ratio_harness(const Instance& instance,
                          const std::string& policy_name, Objective objective,
                          const std::string& instance_id) {
    const Policy policy = make_policy(policy_name);
    const Trace trace = simulate(instance, policy);

    RatioReport report;
    report.instance_id = instance_id;
    report.policy = policy_name;
    report.objective = objective;
    report.measured = metrics(trace);
    report.objective_value =
        objective == Objective::G ? report.measured.g : report.measured.h;
    report.reference = objective == Objective::G ? g1_lower_bound(instance)
                                                 : h_lower_bound(instance);
    report.ratio = report.objective_value / report.reference;

    std::optional<Bound> bound;
    if (objective == Objective::G && policy_name == "nequi")
        bound = Bound::nequi_g;
    else if (objective == Objective::G && policy_name == "uceq")
        bound = Bound::uceq_g;
    else if (objective == Objective::H && policy_name == "pfirst")
        bound = Bound::pfirst_h;
    if (bound) {
        report.bound = competitive_constants(instance.params, *bound).bound;
        report.bound_ok = report.ratio <= *report.bound + 1e-9;
    }
    return report;
}

}  // namespace espsim
