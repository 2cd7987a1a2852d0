#pragma once

#include "espsim/engine.hpp"
#include "espsim/model.hpp"

namespace espsim {

// alpha / (alpha-1)^(1-1/alpha); > 1 for all alpha > 1, equals 2 at alpha 2.
double kappa(double alpha);

// Universal lower bound on flow time plus energy:
// kappa * sum over phases of work / parallelism^(1-1/alpha).
// Fully-parallel phases contribute 0 (the analytic h -> inf limit).
double g1_lower_bound(const Instance& instance);

// Lower bound on makespan plus energy for batched PAR-SEQ instances:
// kappa * max(total work / P^(1-1/alpha), (sum of span^alpha)^(1/alpha)).
// Throws NotBatched / NotParseq otherwise.
double h_lower_bound(const Instance& instance);

// Rescales each segment to constant total power 1/(alpha-1): speeds scale
// by k = (1/((alpha-1) u))^(1/alpha) and the duration by 1/k, so per-phase
// work is preserved exactly. Never increases makespan plus energy and is
// idempotent. All-idle segments are dropped; a zero-power segment in which
// some job still progresses throws DegenerateSegment.
Trace equal_power_transform(const Trace& trace, const PowerParams& params);

// Speed grid for the exhaustive-search oracle, in multiples of
// (1/(alpha-1))^(1/alpha), log-spaced.
struct BruteForceGrid {
    int speed_points = 64;
    double lo = 0.05;
    double hi = 4.0;
};

// Upper bound on the optimal flow time plus energy of a tiny instance
// (<= 3 jobs, <= 4 phases total, P <= 4; throws TooLarge beyond that).
// Exhausts schedules with per-phase constant uniform-speed allocations,
// a in 1..min(h, P), grid speeds, and list scheduling under every job
// priority order. For single-phase jobs this family contains a
// near-optimal schedule; for multi-phase/multi-job instances the result
// is an upper bound only. Deterministic; when the joint choice space
// exceeds an internal budget the grid is coarsened (halved) until it fits.
double brute_force_g(const Instance& instance, const BruteForceGrid& grid = {});

}  // namespace espsim
