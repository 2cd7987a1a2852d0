#include "espsim/adversarial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "espsim/numeric.hpp"

namespace espsim {

SpeedVector::SpeedVector(std::vector<double> speeds_, double alpha)
    : speeds(std::move(speeds_)) {
    if (speeds.empty())
        throw std::invalid_argument("speed vector must not be empty");
    KahanSum b;
    for (std::size_t j = 0; j < speeds.size(); ++j) {
        if (!(speeds[j] >= 0.0) || !std::isfinite(speeds[j]))
            throw std::invalid_argument("speeds must be finite and >= 0");
        if (j > 0 && speeds[j] > speeds[j - 1] + 1e-12 * speeds[j - 1])
            throw std::invalid_argument("speeds must be sorted non-increasing");
        b.add(std::pow(speeds[j], alpha));
    }
    budget = b.value();
}

SpeedVector robust_speed_vector(const PowerParams& params, double budget) {
    if (!(budget > 0.0) || !std::isfinite(budget))
        throw std::invalid_argument("budget must be positive and finite");
    const double e = 1.0 - 1.0 / params.alpha;

    std::vector<double> x(params.P);
    KahanSum x_pow;
    for (int j = 1; j <= params.P; ++j) {
        x[j - 1] = std::pow(j, e) - std::pow(j - 1.0, e);
        x_pow.add(std::pow(x[j - 1], params.alpha));
    }
    const double scale = std::pow(budget / x_pow.value(), 1.0 / params.alpha);
    for (double& v : x) v *= scale;

    SpeedVector out(std::move(x), params.alpha);

    // Equal-ratio check: g(h) = h^(1-1/alpha)/prefix_sum(h) constant in h.
    double prefix = 0.0, g1 = 0.0;
    for (int h = 1; h <= params.P; ++h) {
        prefix += out.speeds[h - 1];
        const double g = std::pow(h, e) / prefix;
        if (h == 1)
            g1 = g;
        else if (std::abs(g - g1) > 1e-9 * g1)
            throw SimError("robust speed vector failed the equal-ratio check at h=" +
                           std::to_string(h));
    }
    return out;
}

AdversaryChoice adversary_best_h(const SpeedVector& speeds,
                                 const PowerParams& params) {
    if (speeds.speeds[0] <= 0.0)
        throw AllZeroSpeeds("every speed is zero; the job never completes");

    const double alpha = params.alpha;
    const double e = 1.0 - 1.0 / alpha;
    const double front = std::pow(alpha - 1.0, e) * (1.0 + speeds.budget) / alpha;

    const int P = std::min<int>(params.P, static_cast<int>(speeds.speeds.size()));
    AdversaryChoice best{1, 0.0};
    double prefix = 0.0;
    for (int h = 1; h <= P; ++h) {
        prefix += speeds.speeds[h - 1];
        if (prefix <= 0.0) continue;
        const double ratio = front * std::pow(h, e) / prefix;
        // Lowest h wins ties (the robust vector ties everywhere).
        if (ratio > best.ratio * (1.0 + 1e-12)) best = {h, ratio};
    }
    return best;
}

double adversary_ratio_floor(const PowerParams& params) {
    return (params.alpha - 1.0) / params.alpha *
           std::pow(harmonic_number(params.P), 1.0 / params.alpha);
}

Instance adversarial_sequential_instance(const PowerParams& params) {
    Instance instance{params, {}};
    instance.jobs.reserve(params.P);
    for (int i = 1; i <= params.P; ++i) {
        const double span =
            1.0 / std::pow(params.P - i + 1.0, 1.0 / params.alpha);
        instance.jobs.push_back({i - 1, 0.0, {Phase{span, 1.0}}});
    }
    return instance;
}

BoundConstants competitive_constants(const PowerParams& params, Bound bound) {
    const double a = params.alpha;
    const double h_p = harmonic_number(params.P);
    BoundConstants c;
    switch (bound) {
        case Bound::nequi_g:
            c.c1 = std::max(4.0 * a * a * a / ((a - 1.0) * (a - 1.0)),
                            std::pow(4.0, a) * a * h_p);
            c.c2 = 2.0 * a * std::pow(2.0 * h_p, 1.0 / a);
            c.eta_prime = 4.0 * a * a / std::pow(a - 1.0, 1.0 - 1.0 / a);
            c.lambda = std::pow(4.0, a - 1.0) * std::pow(a - 1.0, 1.0 - 1.0 / a);
            c.bound = c.c1 + c.c2;
            break;
        case Bound::uceq_g:
            c.c1 = std::max(2.0 * a * a / (a - 1.0), std::pow(2.0, a) * a);
            c.c2 = 2.0 * a;
            c.eta_prime = 2.0 * a * a / std::pow(a - 1.0, 1.0 - 1.0 / a);
            c.lambda = std::pow(2.0, a - 1.0) * std::pow(a - 1.0, 1.0 - 1.0 / a);
            c.bound = c.c1 + c.c2;
            break;
        case Bound::pfirst_h:
            c.bound = 1.0 + std::pow(h_p, 1.0 - 1.0 / a);
            break;
    }
    return c;
}

}  // namespace espsim
