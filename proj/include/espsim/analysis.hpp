#pragma once

#include <optional>
#include <string>
#include <vector>

#include "espsim/adversarial.hpp"
#include "espsim/engine.hpp"
#include "espsim/model.hpp"

namespace espsim {

// Snapshot for the amortized potential: remaining work per live job under
// the measured schedule and under a reference schedule. The boundary,
// arrival, and completion properties hold for any reference multiset.
struct PotentialState {
    std::vector<double> online_remaining;
    std::vector<double> reference_remaining;
    double eta = 1.0;
};

// Phi = eta * integral over z of
//   [ sum_{i=1}^{n(z)} i^(1-1/alpha) - n(z)^(1-1/alpha) n*(z) ] dz
// where n(z) / n*(z) count jobs with remaining work >= z. Both are
// staircases with breakpoints at the remaining works, so the integral is
// evaluated exactly as a finite sum.
double potential(const PotentialState& state, const PowerParams& params);

// Adding one job of work `new_work` to both multisets must not increase
// the potential; true iff that holds within 1e-9.
bool check_arrival_condition(const PotentialState& state, double new_work,
                             const PowerParams& params);

// The eta each G analysis pairs with the potential:
// nequi_g: eta' H_P^(1/alpha) / P^(1-1/alpha); uceq_g: eta' / P^(1-1/alpha).
double potential_eta(Bound bound, const PowerParams& params);

enum class Objective { G, H };

struct RatioReport {
    std::string instance_id;
    std::string policy;
    Objective objective = Objective::G;
    Metrics measured;
    double objective_value = 0.0;
    double reference = 0.0;  // the applicable lower bound
    double ratio = 0.0;
    std::optional<double> bound;  // competitive bound when one applies
    bool bound_ok = true;
};

// Simulates the named policy, divides the objective by the matching lower
// bound (G -> g1_lower_bound, H -> h_lower_bound), and checks the
// competitive bound when one applies to the (policy, objective) pair.
RatioReport ratio_harness(const Instance& instance,
                          const std::string& policy_name, Objective objective,
                          const std::string& instance_id = "");

}  // namespace espsim
