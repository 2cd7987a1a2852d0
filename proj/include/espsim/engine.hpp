#pragma once

#include <vector>

#include "espsim/model.hpp"
#include "espsim/policies.hpp"

namespace espsim {

// Event-time ties (simultaneous completions/arrivals) are batched within
// this absolute tolerance; capacity is checked to kCapacityTolerance.
inline constexpr double kEventTimeTolerance = 1e-12;
inline constexpr double kCapacityTolerance = 1e-9;

struct SegmentJob {
    int job;
    int phase;  // index into the job's phase list
    Assignment assignment;
    double rate;
    double power;
};

// A maximal interval with no arrival, phase completion, or job completion.
// `jobs` lists exactly the jobs active over the interval, ascending id
// (deprived jobs appear with zero-count assignments).
struct TraceSegment {
    double t_start = 0.0;
    double t_end = 0.0;
    std::vector<SegmentJob> jobs;

    double duration() const { return t_end - t_start; }
    double total_power() const;
};

struct JobOutcome {
    int job;
    double release;
    double completion;

    double flow() const { return completion - release; }
};

struct Trace {
    std::vector<TraceSegment> segments;   // time-ordered
    std::vector<JobOutcome> outcomes;     // ascending job id

    double makespan() const;
};

// Exact simulation: every implemented policy holds its assignment constant
// between events, so phase completions are solved in closed form rather
// than time-stepped. Throws NonTermination if nothing in the system can
// progress, CapacityViolation if a plan oversubscribes P, NotBatched /
// NotParseq when the policy demands a batched PAR-SEQ instance.
Trace simulate(const Instance& instance, const Policy& policy);

// F via both the active-count integral and the per-job flow sum (they must
// agree to 1e-9 relative), E as the power integral, M as last completion.
Metrics metrics(const Trace& trace);

}  // namespace espsim
