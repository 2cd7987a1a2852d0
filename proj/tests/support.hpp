#pragma once

#include <map>
#include <utility>
#include <vector>

#include "espsim/engine.hpp"
#include "espsim/model.hpp"
#include "espsim/numeric.hpp"

namespace espsim::test {

inline Instance single_job_instance(double work, double parallelism, double alpha,
                                    int P, double release = 0.0) {
    return Instance{PowerParams(alpha, P),
                    {Job{0, release, {Phase{work, parallelism}}}}};
}

struct CorpusOptions {
    int max_jobs = 10;
    int max_phases = 3;
    double work_lo = 0.5, work_hi = 2.0;
    bool batched = false;        // force all releases to 0
    bool parseq = false;         // phases from {1, inf}
    bool allow_infinite = false; // permit h = inf outside parseq mode
    double release_spread = 2.0;
};

inline Instance random_instance(Rng& rng, double alpha, int P,
                                const CorpusOptions& opt = {}) {
    Instance instance{PowerParams(alpha, P), {}};
    const int n = rng.uniform_int(1, opt.max_jobs);
    for (int i = 0; i < n; ++i) {
        Job job;
        job.id = i;
        job.release_time = (opt.batched || i == 0)
                               ? 0.0
                               : rng.uniform(0.0, opt.release_spread);
        const int phases = rng.uniform_int(1, opt.max_phases);
        for (int k = 0; k < phases; ++k) {
            Phase p;
            p.work = rng.uniform(opt.work_lo, opt.work_hi);
            if (opt.parseq)
                p.parallelism = rng.coin() ? kInfiniteParallelism : 1.0;
            else if (opt.allow_infinite && rng.uniform() < 0.2)
                p.parallelism = kInfiniteParallelism;
            else
                p.parallelism = rng.uniform_int(1, P);
            job.phases.push_back(p);
        }
        instance.jobs.push_back(std::move(job));
    }
    return instance;
}

// Work executed per (job, phase), integrated over the trace segments.
inline std::map<std::pair<int, int>, double> executed_work(const Trace& trace) {
    std::map<std::pair<int, int>, KahanSum> acc;
    for (const TraceSegment& seg : trace.segments)
        for (const SegmentJob& j : seg.jobs)
            acc[{j.job, j.phase}].add(j.rate * seg.duration());
    std::map<std::pair<int, int>, double> out;
    for (const auto& [key, sum] : acc) out[key] = sum.value();
    return out;
}

// Rescales each segment's speeds by a random factor (duration by its
// inverse), preserving per-phase work while roughening the power profile.
inline Trace jitter_speeds(const Trace& trace, const PowerParams& params,
                           Rng& rng) {
    Trace out;
    out.outcomes = trace.outcomes;
    out.segments.reserve(trace.segments.size());
    double t = 0.0;
    for (const TraceSegment& seg : trace.segments) {
        const double f = rng.uniform(0.5, 2.0);
        TraceSegment scaled;
        scaled.t_start = t;
        scaled.t_end = t + seg.duration() / f;
        for (SegmentJob j : seg.jobs) {
            if (auto* d = std::get_if<Discrete>(&j.assignment)) {
                for (double& s : d->speeds) s *= f;
            } else {
                std::get<Fluid>(j.assignment).speed *= f;
            }
            j.rate *= f;
            j.power = power(j.assignment, params.alpha);
            scaled.jobs.push_back(std::move(j));
        }
        t = scaled.t_end;
        out.segments.push_back(std::move(scaled));
    }
    for (JobOutcome& o : out.outcomes) o.completion = 0.0;
    for (const TraceSegment& seg : out.segments)
        for (const SegmentJob& j : seg.jobs)
            for (JobOutcome& o : out.outcomes)
                if (o.job == j.job) o.completion = seg.t_end;
    return out;
}

}  // namespace espsim::test
