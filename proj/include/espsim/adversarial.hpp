#pragma once

#include <vector>

#include "espsim/model.hpp"

namespace espsim {

// A budgeted non-increasing speed profile; budget = sum of speeds^alpha.
struct SpeedVector {
    std::vector<double> speeds;
    double budget = 0.0;

    // Validates ordering and recomputes the budget.
    SpeedVector(std::vector<double> speeds_, double alpha);
};

// The budget-b speed vector minimizing the adversary's best ratio:
// s_j proportional to x_j = j^(1-1/alpha) - (j-1)^(1-1/alpha), which makes
// g(h) = h^(1-1/alpha) / (s_1 + ... + s_h) constant over h = 1..P. The
// constancy is verified to 1e-9 relative at construction.
SpeedVector robust_speed_vector(const PowerParams& params, double budget);

struct AdversaryChoice {
    int parallelism;  // the h in 1..P the adversary picks
    double ratio;     // fixed-speed cost over the clairvoyant single-phase optimum
};

// Best constant parallelism against a fixed speed vector:
// ratio(h) = (alpha-1)^(1-1/alpha) (1+u)/alpha * h^(1-1/alpha)/sum_{j<=h} s_j,
// maximized over h (lowest h on ties). Throws AllZeroSpeeds if the vector
// is identically zero.
AdversaryChoice adversary_best_h(const SpeedVector& speeds,
                                 const PowerParams& params);

// Analytic floor on the adversary ratio for any speed vector:
// (alpha-1)/alpha * H_P^(1/alpha).
double adversary_ratio_floor(const PowerParams& params);

// Batched instance of P sequential jobs with spans (P-i+1)^(-1/alpha),
// i = 1..P: the staircase on which equal-rate execution of sequential
// work is forced to pay the harmonic factor.
Instance adversarial_sequential_instance(const PowerParams& params);

// Competitive bounds, named by (policy, objective) pair.
enum class Bound {
    nequi_g,   // nonuniform equipartition, flow time plus energy
    uceq_g,    // uniform conservative equipartition, flow time plus energy
    pfirst_h,  // parallel-first, makespan plus energy
};

// For the G bounds the ratio bound is c1 + c2 and eta_prime/lambda are the
// potential-function multipliers; the H bound is the single factor
// 1 + H_P^(1-1/alpha) (c1, c2, eta_prime, lambda left 0).
struct BoundConstants {
    double c1 = 0.0;
    double c2 = 0.0;
    double eta_prime = 0.0;
    double lambda = 0.0;
    double bound = 0.0;
};

BoundConstants competitive_constants(const PowerParams& params, Bound bound);

}  // namespace espsim
