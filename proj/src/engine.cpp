#include "espsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "espsim/numeric.hpp"

namespace espsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ActiveJob {
    const Job* job;
    int phase;
    double remaining;  // work left in the current phase, > 0

    int id() const { return job->id; }
    double parallelism() const { return job->phases[phase].parallelism; }
};

NonClairvoyantView make_non_view(const std::vector<ActiveJob>& active) {
    NonClairvoyantView v;
    v.jobs.reserve(active.size());
    for (const ActiveJob& a : active) v.jobs.push_back(a.id());
    return v;
}

SemiClairvoyantView make_semi_view(const std::vector<ActiveJob>& active) {
    SemiClairvoyantView v;
    v.jobs.reserve(active.size());
    for (const ActiveJob& a : active) v.jobs.push_back({a.id(), a.parallelism()});
    return v;
}

AssignmentPlan query(const Policy& policy, const std::vector<ActiveJob>& active,
                     const PowerParams& params) {
    AssignmentPlan plan = policy.level == Clairvoyance::non
                              ? policy.decide_non(make_non_view(active), params)
                              : policy.decide_semi(make_semi_view(active), params);
    if (plan.size() != active.size())
        throw ModelViolation("policy '" + policy.name + "' returned " +
                             std::to_string(plan.size()) + " assignments for " +
                             std::to_string(active.size()) + " active jobs");
    double total = 0.0;
    for (std::size_t i = 0; i < plan.size(); ++i) {
        if (plan[i].job != active[i].id())
            throw ModelViolation("policy '" + policy.name +
                                 "' returned an assignment for job " +
                                 std::to_string(plan[i].job) + " where job " +
                                 std::to_string(active[i].id()) + " was expected");
        if (const auto* d = std::get_if<Discrete>(&plan[i].assignment))
            for (std::size_t j = 1; j < d->speeds.size(); ++j)
                if (d->speeds[j] > d->speeds[j - 1] + 1e-12 * d->speeds[j - 1])
                    throw ModelViolation("policy '" + policy.name +
                                         "' returned an unsorted speed ladder");
        total += allocated_count(plan[i].assignment);
    }
    if (total > params.P + kCapacityTolerance)
        throw CapacityViolation("policy '" + policy.name + "' allocated " +
                                std::to_string(total) + " of " +
                                std::to_string(params.P) + " processors");
    return plan;
}

}  // namespace

double TraceSegment::total_power() const {
    double sum = 0.0;
    for (const SegmentJob& j : jobs) sum += j.power;
    return sum;
}

double Trace::makespan() const {
    double m = 0.0;
    for (const JobOutcome& o : outcomes) m = std::max(m, o.completion);
    return m;
}

Trace simulate(const Instance& instance, const Policy& policy) {
    validate(instance);
    if (policy.needs_batched_parseq) {
        if (!batched(instance))
            throw NotBatched("policy '" + policy.name +
                             "' requires a batched instance");
        if (!parseq(instance))
            throw NotParseq("policy '" + policy.name +
                            "' requires a PAR-SEQ instance");
    }

    // Release-ordered arrival queue (ties by id).
    std::vector<const Job*> pending;
    pending.reserve(instance.jobs.size());
    for (const Job& j : instance.jobs) pending.push_back(&j);
    std::stable_sort(pending.begin(), pending.end(),
                     [](const Job* a, const Job* b) {
                         if (a->release_time != b->release_time)
                             return a->release_time < b->release_time;
                         return a->id < b->id;
                     });
    std::size_t next_arrival = 0;

    std::vector<ActiveJob> active;
    Trace trace;
    trace.outcomes.reserve(instance.jobs.size());

    std::size_t total_phases = 0;
    for (const Job& j : instance.jobs) total_phases += j.phases.size();
    // Segments are bounded by events; anything past this is a corrupt loop.
    const std::size_t segment_cap = 4 * (total_phases + 2 * instance.jobs.size()) + 64;

    double now = pending.front()->release_time;

    auto admit_due = [&](double t) {
        while (next_arrival < pending.size() &&
               pending[next_arrival]->release_time <= t + kEventTimeTolerance) {
            const Job* j = pending[next_arrival++];
            ActiveJob a{j, 0, j->phases[0].work};
            active.insert(std::upper_bound(active.begin(), active.end(), a,
                                           [](const ActiveJob& x, const ActiveJob& y) {
                                               return x.id() < y.id();
                                           }),
                          a);
        }
    };

    while (true) {
        if (active.empty()) {
            if (next_arrival == pending.size()) break;
            now = std::max(now, pending[next_arrival]->release_time);
        }
        admit_due(now);

        const AssignmentPlan plan = query(policy, active, instance.params);

        std::vector<double> rates(active.size()), powers(active.size());
        double min_dt = kInf;
        for (std::size_t i = 0; i < active.size(); ++i) {
            rates[i] = execution_rate(plan[i].assignment, active[i].parallelism());
            powers[i] = power(plan[i].assignment, instance.params.alpha);
            if (rates[i] > 0.0)
                min_dt = std::min(min_dt, active[i].remaining / rates[i]);
        }
        const double arrival_t = next_arrival < pending.size()
                                     ? pending[next_arrival]->release_time
                                     : kInf;
        if (min_dt == kInf && arrival_t == kInf)
            throw NonTermination("policy '" + policy.name +
                                 "' makes no progress and no arrival is pending");

        const double t_event = std::min(now + min_dt, arrival_t);
        const double dt = t_event - now;

        if (dt > 0.0) {
            TraceSegment seg;
            seg.t_start = now;
            seg.t_end = t_event;
            seg.jobs.reserve(active.size());
            for (std::size_t i = 0; i < active.size(); ++i)
                seg.jobs.push_back({active[i].id(), active[i].phase,
                                    plan[i].assignment, rates[i], powers[i]});
            trace.segments.push_back(std::move(seg));
            if (trace.segments.size() > segment_cap)
                throw SimError("segment count exceeded the event bound; "
                               "policy is not event-stable");
        }

        // Batch every phase boundary falling within the tie tolerance.
        std::vector<ActiveJob> survivors;
        survivors.reserve(active.size());
        for (std::size_t i = 0; i < active.size(); ++i) {
            ActiveJob a = active[i];
            const bool completes =
                rates[i] > 0.0 &&
                a.remaining / rates[i] <= dt + kEventTimeTolerance;
            if (!completes) {
                a.remaining -= rates[i] * dt;
                if (a.remaining < 0.0) a.remaining = 0.0;
                survivors.push_back(a);
                continue;
            }
            if (a.phase + 1 < static_cast<int>(a.job->phases.size())) {
                a.phase += 1;
                a.remaining = a.job->phases[a.phase].work;
                survivors.push_back(a);
            } else {
                trace.outcomes.push_back({a.id(), a.job->release_time, t_event});
            }
        }
        active = std::move(survivors);
        now = t_event;
        admit_due(now);
    }

    std::sort(trace.outcomes.begin(), trace.outcomes.end(),
              [](const JobOutcome& a, const JobOutcome& b) { return a.job < b.job; });
    return trace;
}

Metrics metrics(const Trace& trace) {
    Metrics m;
    if (trace.segments.empty() && trace.outcomes.empty()) return m;

    KahanSum flow_integral, flow_sum, energy;
    for (const TraceSegment& seg : trace.segments) {
        flow_integral.add(seg.duration() * static_cast<double>(seg.jobs.size()));
        energy.add(seg.duration() * seg.total_power());
    }
    for (const JobOutcome& o : trace.outcomes) flow_sum.add(o.flow());

    const double a = flow_integral.value();
    const double b = flow_sum.value();
    if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(b)))
        throw SimError("flow accounting mismatch: active-count integral " +
                       std::to_string(a) + " vs per-job sum " + std::to_string(b));

    m.flow_total = b;
    m.energy = energy.value();
    m.makespan = trace.makespan();
    m.g = m.flow_total + m.energy;
    m.h = m.makespan + m.energy;
    return m;
}

}  // namespace espsim
