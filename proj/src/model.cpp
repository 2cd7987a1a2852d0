#include "espsim/model.hpp"

#include <algorithm>
#include <set>

#include "espsim/numeric.hpp"

namespace espsim {

double Job::total_work() const {
    KahanSum s;
    for (const Phase& p : phases) s.add(p.work);
    return s.value();
}

double Job::total_span() const {
    KahanSum s;
    for (const Phase& p : phases) s.add(p.span());
    return s.value();
}

bool batched(const Instance& instance) {
    return std::all_of(instance.jobs.begin(), instance.jobs.end(),
                       [](const Job& j) { return j.release_time == 0.0; });
}

bool parseq(const Instance& instance) {
    for (const Job& j : instance.jobs)
        for (const Phase& p : j.phases)
            if (!p.sequential() && !p.fully_parallel()) return false;
    return true;
}

void validate(const Instance& instance) {
    if (instance.jobs.empty())
        throw std::invalid_argument("instance has no jobs");
    std::set<int> ids;
    for (const Job& j : instance.jobs) {
        const std::string tag = "job " + std::to_string(j.id);
        if (!ids.insert(j.id).second)
            throw std::invalid_argument(tag + ": duplicate id");
        if (!(j.release_time >= 0.0) || !std::isfinite(j.release_time))
            throw std::invalid_argument(tag +
                                        ": release time must be finite and >= 0");
        if (j.phases.empty())
            throw std::invalid_argument(tag + ": has no phases");
        for (std::size_t k = 0; k < j.phases.size(); ++k) {
            const Phase& p = j.phases[k];
            if (!(p.work > 0.0) || !std::isfinite(p.work))
                throw std::invalid_argument(tag + " phase " + std::to_string(k) +
                                            ": work must be positive and finite");
            if (!(p.parallelism >= 1.0))
                throw std::invalid_argument(tag + " phase " + std::to_string(k) +
                                            ": parallelism must be >= 1");
        }
    }
}

double allocated_count(const Assignment& a) {
    if (const auto* d = std::get_if<Discrete>(&a))
        return static_cast<double>(d->speeds.size());
    return std::get<Fluid>(a).count;
}

double execution_rate(const Assignment& a, double parallelism) {
    if (const auto* d = std::get_if<Discrete>(&a)) {
        const auto& s = d->speeds;
        const std::size_t n = s.size();
        double sum = 0.0;
        if (std::isinf(parallelism) || parallelism >= static_cast<double>(n)) {
            for (double v : s) sum += v;
            return sum;
        }
        const std::size_t whole = static_cast<std::size_t>(parallelism);
        const double frac = parallelism - static_cast<double>(whole);
        for (std::size_t j = 0; j < whole; ++j) sum += s[j];
        if (frac > 0.0 && whole < n) sum += frac * s[whole];
        return sum;
    }
    const auto& f = std::get<Fluid>(a);
    return std::min(f.count, parallelism) * f.speed;
}

double power(const Assignment& a, double alpha) {
    if (const auto* d = std::get_if<Discrete>(&a)) {
        double sum = 0.0;
        for (double v : d->speeds) sum += std::pow(v, alpha);
        return sum;
    }
    const auto& f = std::get<Fluid>(a);
    return f.count * std::pow(f.speed, alpha);
}

}  // namespace espsim
