#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace espsim {

inline constexpr double kInfiniteParallelism =
    std::numeric_limits<double>::infinity();

// Base class for runtime failures of simulations and analyses. Input
// validation failures throw std::invalid_argument instead.
struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Every active job has rate 0 and no arrival is pending.
struct NonTermination : SimError {
    using SimError::SimError;
};
// A policy requested more processors than exist.
struct CapacityViolation : SimError {
    using SimError::SimError;
};
// A policy was driven outside its declared job model.
struct ModelViolation : SimError {
    using SimError::SimError;
};
struct NotBatched : SimError {
    using SimError::SimError;
};
struct NotParseq : SimError {
    using SimError::SimError;
};
// Instance exceeds the exhaustive-search size limits.
struct TooLarge : SimError {
    using SimError::SimError;
};
// A trace segment draws no power while some job still progresses.
struct DegenerateSegment : SimError {
    using SimError::SimError;
};
// A speed vector with every entry zero.
struct AllZeroSpeeds : SimError {
    using SimError::SimError;
};

// Power model: a processor running at speed s draws s^alpha, alpha > 1
// strictly. P identical speed-scalable processors.
struct PowerParams {
    double alpha;
    int P;

    PowerParams(double alpha_, int processors) : alpha(alpha_), P(processors) {
        if (!(alpha > 1.0) || !std::isfinite(alpha))
            throw std::invalid_argument("alpha must exceed 1");
        if (P < 1)
            throw std::invalid_argument("processor count must be at least 1");
    }
};

// One phase of a job: `work` units executable at linear speedup up to
// `parallelism` processors. parallelism may be +inf (fully-parallel);
// span is work/parallelism, 0 exactly for fully-parallel phases.
struct Phase {
    double work = 1.0;
    double parallelism = 1.0;

    bool fully_parallel() const { return std::isinf(parallelism); }
    bool sequential() const { return parallelism == 1.0; }
    double span() const { return fully_parallel() ? 0.0 : work / parallelism; }
};

struct Job {
    int id = 0;
    double release_time = 0.0;
    std::vector<Phase> phases;  // executed strictly in order, non-empty

    double total_work() const;
    double total_span() const;
};

struct Instance {
    PowerParams params;
    std::vector<Job> jobs;  // non-empty, unique ids
};

// All release times are 0.
bool batched(const Instance& instance);
// Every phase is sequential (h = 1) or fully-parallel (h = inf).
bool parseq(const Instance& instance);
// Throws std::invalid_argument naming the offending job/phase.
void validate(const Instance& instance);

// Per-job processor allocation. Discrete lists explicit per-processor
// speeds, sorted non-increasing; Fluid is `count` (possibly fractional)
// processors all at `speed`.
struct Discrete {
    std::vector<double> speeds;
};
struct Fluid {
    double count = 0.0;
    double speed = 0.0;
};
using Assignment = std::variant<Discrete, Fluid>;

// Number of allocated processors (fractional for Fluid).
double allocated_count(const Assignment& a);

// Execution rate under the maximum-utilization rule: the fastest
// min(allocated, h) processors contribute their speeds. Fractional h uses
// a linear fraction of the next-fastest processor so that discrete and
// fluid allocations agree in the limit.
double execution_rate(const Assignment& a, double parallelism);

// Total power drawn by the allocation: sum of s^alpha over allocated
// processors (count * speed^alpha for Fluid). Allocated processors burn
// power per their assigned speed whether or not the job can use them.
double power(const Assignment& a, double alpha);

struct Metrics {
    double flow_total = 0.0;  // F = sum of (completion - release)
    double energy = 0.0;      // E
    double makespan = 0.0;    // M = last completion
    double g = 0.0;           // F + E
    double h = 0.0;           // M + E
};

}  // namespace espsim
