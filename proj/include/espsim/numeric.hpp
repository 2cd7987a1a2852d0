#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace espsim {

// Neumaier-compensated accumulator; keeps long segment sums below 1e-12
// relative error.
class KahanSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// H_n = 1 + 1/2 + ... + 1/n
inline double harmonic_number(int n) {
    KahanSum s;
    for (int i = 1; i <= n; ++i) s.add(1.0 / i);
    return s.value();
}

// Deterministic uniform sampling over mt19937_64. The engine core of
// std::mt19937_64 is bit-exact across platforms; std::*_distribution is not,
// so the mappings are done by hand to keep replays byte-identical.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // [0, 1)
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // inclusive range
    int uniform_int(int lo, int hi) {
        const int span = hi - lo + 1;
        int v = lo + static_cast<int>(uniform() * span);
        return v > hi ? hi : v;
    }

    bool coin() { return (gen_() & 1u) != 0; }

private:
    std::mt19937_64 gen_;
};

}  // namespace espsim
