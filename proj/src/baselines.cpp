#include "espsim/baselines.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "espsim/numeric.hpp"

namespace espsim {

double kappa(double alpha) {
    return alpha / std::pow(alpha - 1.0, 1.0 - 1.0 / alpha);
}

double g1_lower_bound(const Instance& instance) {
    validate(instance);
    const double e = 1.0 - 1.0 / instance.params.alpha;
    KahanSum sum;
    for (const Job& job : instance.jobs)
        for (const Phase& p : job.phases)
            if (!p.fully_parallel()) sum.add(p.work / std::pow(p.parallelism, e));
    return kappa(instance.params.alpha) * sum.value();
}

double h_lower_bound(const Instance& instance) {
    validate(instance);
    if (!batched(instance)) throw NotBatched("h_lower_bound needs a batched instance");
    if (!parseq(instance)) throw NotParseq("h_lower_bound needs a PAR-SEQ instance");

    const double alpha = instance.params.alpha;
    KahanSum work, span_pow;
    for (const Job& job : instance.jobs) {
        work.add(job.total_work());
        span_pow.add(std::pow(job.total_span(), alpha));
    }
    const double parallel_term =
        work.value() / std::pow(instance.params.P, 1.0 - 1.0 / alpha);
    const double sequential_term = std::pow(span_pow.value(), 1.0 / alpha);
    return kappa(alpha) * std::max(parallel_term, sequential_term);
}

Trace equal_power_transform(const Trace& trace, const PowerParams& params) {
    for (const JobOutcome& o : trace.outcomes)
        if (o.release != 0.0)
            throw NotBatched("equal_power_transform needs a batched trace");

    const double target = 1.0 / (params.alpha - 1.0);
    Trace out;
    out.segments.reserve(trace.segments.size());

    double t = 0.0;
    for (const TraceSegment& seg : trace.segments) {
        const double u = seg.total_power();
        if (u <= 0.0) {
            for (const SegmentJob& j : seg.jobs)
                if (j.rate > 0.0)
                    throw DegenerateSegment(
                        "segment draws no power but a job progresses");
            continue;  // all-idle segment: drop it
        }
        // Fixed point: already at the target power.
        const double k = std::abs(u - target) <= 1e-12 * target
                             ? 1.0
                             : std::pow(1.0 / ((params.alpha - 1.0) * u),
                                        1.0 / params.alpha);
        TraceSegment scaled;
        scaled.t_start = t;
        scaled.t_end = t + seg.duration() / k;
        scaled.jobs.reserve(seg.jobs.size());
        for (const SegmentJob& j : seg.jobs) {
            SegmentJob sj = j;
            if (auto* d = std::get_if<Discrete>(&sj.assignment)) {
                for (double& s : d->speeds) s *= k;
            } else {
                std::get<Fluid>(sj.assignment).speed *= k;
            }
            sj.rate = j.rate * k;  // rates are linear in the speed vector
            sj.power = power(sj.assignment, params.alpha);
            scaled.jobs.push_back(std::move(sj));
        }
        t = scaled.t_end;
        out.segments.push_back(std::move(scaled));
    }

    // Completions move to the end of each job's last segment.
    out.outcomes = trace.outcomes;
    for (JobOutcome& o : out.outcomes) o.completion = 0.0;
    for (const TraceSegment& seg : out.segments)
        for (const SegmentJob& j : seg.jobs)
            for (JobOutcome& o : out.outcomes)
                if (o.job == j.job) o.completion = seg.t_end;
    return out;
}

namespace {

struct OraclePhase {
    int job;      // index into instance.jobs
    double work;
    int max_alloc;  // min(h, P), floored
};

// List scheduler for one fully chosen plan: per-phase (a, s) and a job
// priority order. Waiting jobs draw no power; within the order a job runs
// iff its allocation fits in the processors left.
class OracleScheduler {
public:
    OracleScheduler(const Instance& instance, std::vector<int> phase_base)
        : instance_(instance), phase_base_(std::move(phase_base)) {}

    double flow_plus_energy(const std::vector<std::array<double, 2>>& choice,
                            const std::vector<int>& order) {
        const auto& jobs = instance_.jobs;
        const std::size_t n = jobs.size();
        phase_.assign(n, 0);
        remaining_.resize(n);
        done_.assign(n, false);
        for (std::size_t i = 0; i < n; ++i) remaining_[i] = jobs[i].phases[0].work;

        double t = jobs[0].release_time;
        for (const Job& j : jobs) t = std::min(t, j.release_time);
        KahanSum flow, energy;
        std::size_t completed = 0;
        int guard = 0;

        while (completed < n) {
            if (++guard > 1000)
                throw SimError("oracle scheduler failed to converge");

            double next_release = std::numeric_limits<double>::infinity();
            bool any_active = false;
            for (std::size_t i = 0; i < n; ++i) {
                if (done_[i]) continue;
                if (jobs[i].release_time > t + 1e-12)
                    next_release = std::min(next_release, jobs[i].release_time);
                else
                    any_active = true;
            }
            if (!any_active) {
                t = next_release;
                continue;
            }

            double free = instance_.params.P;
            double power_total = 0.0;
            rate_.assign(n, 0.0);
            for (int i : order) {
                if (done_[i] || jobs[i].release_time > t + 1e-12) continue;
                const auto& c = choice[phase_base_[i] + phase_[i]];
                if (c[0] <= free + 1e-9) {
                    free -= c[0];
                    rate_[i] = c[0] * c[1];
                    power_total += c[0] * std::pow(c[1], instance_.params.alpha);
                }
            }

            double dt = next_release - t;
            for (std::size_t i = 0; i < n; ++i)
                if (rate_[i] > 0.0) dt = std::min(dt, remaining_[i] / rate_[i]);

            energy.add(dt * power_total);
            const double t_next = t + dt;
            for (std::size_t i = 0; i < n; ++i) {
                if (rate_[i] <= 0.0) continue;
                if (remaining_[i] / rate_[i] <= dt + 1e-12) {
                    if (phase_[i] + 1 < static_cast<int>(jobs[i].phases.size())) {
                        phase_[i] += 1;
                        remaining_[i] = jobs[i].phases[phase_[i]].work;
                    } else {
                        done_[i] = true;
                        ++completed;
                        flow.add(t_next - jobs[i].release_time);
                    }
                } else {
                    remaining_[i] -= rate_[i] * dt;
                }
            }
            t = t_next;
        }
        return flow.value() + energy.value();
    }

private:
    const Instance& instance_;
    std::vector<int> phase_base_;  // first global phase index per job
    std::vector<int> phase_;
    std::vector<double> remaining_;
    std::vector<double> rate_;
    std::vector<bool> done_;
};

}  // namespace

double brute_force_g(const Instance& instance, const BruteForceGrid& grid) {
    validate(instance);
    std::size_t total_phases = 0;
    for (const Job& j : instance.jobs) total_phases += j.phases.size();
    if (instance.jobs.size() > 3 || total_phases > 4 || instance.params.P > 4)
        throw TooLarge("brute_force_g accepts at most 3 jobs, 4 phases, P <= 4");
    if (grid.speed_points < 2 || !(grid.lo > 0.0) || !(grid.lo < grid.hi) ||
        !std::isfinite(grid.hi))
        throw std::invalid_argument("invalid brute-force speed grid");

    const double alpha = instance.params.alpha;
    const int P = instance.params.P;

    std::vector<OraclePhase> phases;
    std::vector<int> phase_base(instance.jobs.size());
    for (std::size_t i = 0; i < instance.jobs.size(); ++i) {
        phase_base[i] = static_cast<int>(phases.size());
        for (const Phase& p : instance.jobs[i].phases) {
            const int amax = p.fully_parallel()
                                 ? P
                                 : std::min(P, static_cast<int>(p.parallelism));
            phases.push_back({static_cast<int>(i), p.work, std::max(1, amax)});
        }
    }

    std::vector<std::vector<int>> orders;
    std::vector<int> perm(instance.jobs.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        orders.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));

    // Keep the joint choice space within a fixed budget so the worst legal
    // input still finishes; coarse grids only weaken the upper bound.
    int points = grid.speed_points;
    auto combos = [&](int p) {
        double c = static_cast<double>(orders.size());
        for (const OraclePhase& ph : phases) c *= ph.max_alloc * p;
        return c;
    };
    while (combos(points) > 2e7 && points > 8) points = std::max(8, points / 2);

    const double base = std::pow(1.0 / (alpha - 1.0), 1.0 / alpha);
    std::vector<double> speeds(points);
    for (int i = 0; i < points; ++i)
        speeds[i] = grid.lo * base *
                    std::pow(grid.hi / grid.lo,
                             static_cast<double>(i) / (points - 1));

    // Admissible per-phase floor: work * kappa / min(h,P)^(1-1/alpha).
    std::vector<double> tail_lb(phases.size() + 1, 0.0);
    for (std::size_t i = phases.size(); i-- > 0;)
        tail_lb[i] = tail_lb[i + 1] +
                     kappa(alpha) * phases[i].work /
                         std::pow(phases[i].max_alloc, 1.0 - 1.0 / alpha);

    OracleScheduler scheduler(instance, phase_base);
    std::vector<std::array<double, 2>> choice(phases.size());
    double best = std::numeric_limits<double>::infinity();

    std::function<void(std::size_t, double)> search = [&](std::size_t idx,
                                                          double partial) {
        if (partial + tail_lb[idx] >= best) return;
        if (idx == phases.size()) {
            for (const auto& order : orders)
                best = std::min(best, scheduler.flow_plus_energy(choice, order));
            return;
        }
        const OraclePhase& ph = phases[idx];
        for (int a = 1; a <= ph.max_alloc; ++a) {
            // grid speeds plus the stationary speed of this allocation, so
            // the family minimum is not lost to grid quantization
            const double stationary =
                std::pow(1.0 / ((alpha - 1.0) * a), 1.0 / alpha);
            for (int si = 0; si <= points; ++si) {
                const double s = si < points ? speeds[si] : stationary;
                choice[idx] = {static_cast<double>(a), s};
                const double cost =
                    ph.work * (1.0 / (a * s) + std::pow(s, alpha - 1.0));
                search(idx + 1, partial + cost);
            }
        }
    };
    search(0, 0.0);
    return best;
}

}  // namespace espsim
