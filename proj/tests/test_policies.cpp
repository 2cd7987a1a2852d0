#include "doctest.h"

#include <cmath>

#include "espsim/model.hpp"
#include "espsim/numeric.hpp"
#include "espsim/policies.hpp"

using namespace espsim;

namespace {

NonClairvoyantView non_view(int n) {
    NonClairvoyantView v;
    for (int i = 0; i < n; ++i) v.jobs.push_back(i);
    return v;
}

SemiClairvoyantView semi_view(std::vector<double> parallelisms) {
    SemiClairvoyantView v;
    for (std::size_t i = 0; i < parallelisms.size(); ++i)
        v.jobs.push_back({static_cast<int>(i), parallelisms[i]});
    return v;
}

double plan_count(const AssignmentPlan& plan) {
    double total = 0.0;
    for (const auto& [job, a] : plan) total += allocated_count(a);
    return total;
}

double plan_power(const AssignmentPlan& plan, double alpha) {
    double total = 0.0;
    for (const auto& [job, a] : plan) total += power(a, alpha);
    return total;
}

}  // namespace

TEST_CASE("nequi single processor") {
    const auto plan = nequi(non_view(1), PowerParams(2.0, 1));
    REQUIRE(plan.size() == 1);
    const auto& d = std::get<Discrete>(plan[0].assignment);
    REQUIRE(d.speeds.size() == 1);
    CHECK(d.speeds[0] == doctest::Approx(1.0).epsilon(1e-12));  // H_1 = 1
}

TEST_CASE("nequi ladder speeds at P=2") {
    const auto plan = nequi(non_view(1), PowerParams(2.0, 2));
    const auto& d = std::get<Discrete>(plan[0].assignment);
    REQUIRE(d.speeds.size() == 2);
    CHECK(d.speeds[0] == doctest::Approx(0.8165).epsilon(1e-4));
    CHECK(d.speeds[1] == doctest::Approx(0.5774).epsilon(1e-4));
}

TEST_CASE("nequi splits P=4 between two jobs") {
    const auto plan = nequi(non_view(2), PowerParams(2.0, 4));
    REQUIRE(plan.size() == 2);
    for (const auto& [job, a] : plan) {
        const auto& d = std::get<Discrete>(a);
        REQUIRE(d.speeds.size() == 2);
        CHECK(d.speeds[0] == doctest::Approx(0.6928).epsilon(1e-4));
        CHECK(d.speeds[1] == doctest::Approx(0.4899).epsilon(1e-4));
    }
    CHECK(plan_count(plan) == doctest::Approx(4.0));
}

TEST_CASE("nequi overload serves the P lowest ids") {
    const PowerParams params(2.0, 2);
    const auto plan = nequi(non_view(5), params);
    REQUIRE(plan.size() == 5);
    const double top = std::pow(1.0 / harmonic_number(2), 0.5);
    for (int i = 0; i < 2; ++i) {
        const auto& d = std::get<Discrete>(plan[i].assignment);
        REQUIRE(d.speeds.size() == 1);
        CHECK(d.speeds[0] == doctest::Approx(top).epsilon(1e-12));
    }
    for (int i = 2; i < 5; ++i)
        CHECK(allocated_count(plan[i].assignment) == 0.0);
    CHECK(plan_count(plan) <= params.P + 1e-9);
}

TEST_CASE("nequi per-job power at most 1/(alpha-1), equality at full ladder") {
    for (double alpha : {1.5, 2.0, 3.0}) {
        const double cap = 1.0 / (alpha - 1.0);
        const auto full = nequi(non_view(1), PowerParams(alpha, 8));
        CHECK(power(full[0].assignment, alpha) == doctest::Approx(cap).epsilon(1e-12));
        const auto half = nequi(non_view(2), PowerParams(alpha, 8));
        CHECK(power(half[0].assignment, alpha) < cap);
    }
}

TEST_CASE("nequi rate bracketed by the harmonic-ladder envelope") {
    const int P = 64;
    for (double alpha : {1.5, 2.0, 3.0}) {
        const PowerParams params(alpha, P);
        const auto plan = nequi(non_view(1), params);
        const double base =
            std::pow(1.0 / ((alpha - 1.0) * harmonic_number(P)), 1.0 / alpha);
        for (int h = 1; h <= P; ++h) {
            const double rate = execution_rate(plan[0].assignment, h);
            const double shape = std::pow(h, 1.0 - 1.0 / alpha);
            CHECK(rate >= base * shape / std::pow(2.0, 1.0 / alpha) - 1e-12);
            CHECK(rate <= base * shape / (1.0 - 1.0 / alpha) + 1e-12);
        }
    }
}

TEST_CASE("uceq closed forms") {
    const PowerParams params(2.0, 4);
    const auto plan = uceq(semi_view({4.0}), params);
    const auto& f = std::get<Fluid>(plan[0].assignment);
    CHECK(f.count == doctest::Approx(4.0));
    CHECK(f.speed == doctest::Approx(0.5));
    CHECK(execution_rate(plan[0].assignment, 4.0) == doctest::Approx(2.0));
    CHECK(power(plan[0].assignment, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("uceq caps at the fair share for infinite parallelism") {
    const auto plan = uceq(semi_view({kInfiniteParallelism, 1.0}), PowerParams(2.0, 8));
    const auto& f = std::get<Fluid>(plan[0].assignment);
    CHECK(f.count == doctest::Approx(4.0));
    CHECK(f.speed == doctest::Approx(0.5));
}

TEST_CASE("uceq sequential job runs at unit speed") {
    for (int P : {1, 2, 7}) {
        const auto plan = uceq(semi_view({1.0}), PowerParams(2.0, P));
        const auto& f = std::get<Fluid>(plan[0].assignment);
        CHECK(f.count == doctest::Approx(1.0));
        CHECK(f.speed == doctest::Approx(1.0));
    }
}

TEST_CASE("uceq never wastes and pays n/(alpha-1) total") {
    Rng rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const double alpha = std::vector<double>{1.5, 2.0, 3.0}[trial % 3];
        const int P = rng.uniform_int(1, 16);
        const int n = rng.uniform_int(1, 12);
        std::vector<double> hs;
        for (int i = 0; i < n; ++i)
            hs.push_back(rng.coin() ? kInfiniteParallelism
                                    : double(rng.uniform_int(1, 2 * P)));
        const auto plan = uceq(semi_view(hs), PowerParams(alpha, P));
        for (std::size_t i = 0; i < plan.size(); ++i) {
            const auto& f = std::get<Fluid>(plan[i].assignment);
            CHECK(f.count <= hs[i]);
            // rate therefore equals count * speed
            CHECK(execution_rate(plan[i].assignment, hs[i]) ==
                  doctest::Approx(f.count * f.speed));
        }
        const double expected = n / (alpha - 1.0);
        CHECK(plan_power(plan, alpha) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(plan_count(plan) <= P + 1e-9);
    }
}

TEST_CASE("pfirst shares equally when everything is sequential") {
    const auto plan = pfirst(semi_view({1.0, 1.0, 1.0}), PowerParams(2.0, 3));
    for (const auto& [job, a] : plan) {
        const auto& f = std::get<Fluid>(a);
        CHECK(f.count == doctest::Approx(1.0));
        CHECK(f.speed == doctest::Approx(0.57735).epsilon(1e-4));
    }
}

TEST_CASE("pfirst gives all processors to the lowest-id parallel job") {
    std::vector<double> hs = {1.0, kInfiniteParallelism, 1.0, 1.0,
                              kInfiniteParallelism, 1.0};
    const auto plan = pfirst(semi_view(hs), PowerParams(2.0, 4));
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const auto& f = std::get<Fluid>(plan[i].assignment);
        if (i == 1) {
            CHECK(f.count == doctest::Approx(4.0));
            CHECK(f.speed == doctest::Approx(0.5));
        } else {
            CHECK(f.count == 0.0);
        }
    }
}

TEST_CASE("pfirst overload shares fluid fractions") {
    const auto plan =
        pfirst(semi_view(std::vector<double>(8, 1.0)), PowerParams(2.0, 4));
    for (const auto& [job, a] : plan) {
        const auto& f = std::get<Fluid>(a);
        CHECK(f.count == doctest::Approx(0.5));
        CHECK(f.speed == doctest::Approx(0.5));
    }
}

TEST_CASE("pfirst total power is exactly 1/(alpha-1) in both branches") {
    for (double alpha : {1.5, 2.0, 3.0}) {
        const PowerParams params(alpha, 4);
        const double expected = 1.0 / (alpha - 1.0);
        const auto parallel =
            pfirst(semi_view({1.0, kInfiniteParallelism}), params);
        CHECK(plan_power(parallel, alpha) ==
              doctest::Approx(expected).epsilon(1e-12));
        const auto sequential =
            pfirst(semi_view(std::vector<double>(6, 1.0)), params);
        CHECK(plan_power(sequential, alpha) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("pfirst rejects intermediate parallelism") {
    CHECK_THROWS_AS(pfirst(semi_view({1.0, 3.0}), PowerParams(2.0, 4)),
                    ModelViolation);
}

TEST_CASE("policies are deterministic functions of the view") {
    const PowerParams params(2.5, 6);
    const auto v = semi_view({2.0, kInfiniteParallelism, 1.0});
    const auto a = uceq(v, params);
    const auto b = uceq(v, params);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& fa = std::get<Fluid>(a[i].assignment);
        const auto& fb = std::get<Fluid>(b[i].assignment);
        CHECK(fa.count == fb.count);  // bit-identical
        CHECK(fa.speed == fb.speed);
    }
    const auto n1 = nequi(non_view(3), params);
    const auto n2 = nequi(non_view(3), params);
    for (std::size_t i = 0; i < n1.size(); ++i)
        CHECK(std::get<Discrete>(n1[i].assignment).speeds ==
              std::get<Discrete>(n2[i].assignment).speeds);
}

TEST_CASE("policy factory") {
    CHECK(make_policy("nequi").level == Clairvoyance::non);
    CHECK(make_policy("uceq").level == Clairvoyance::semi);
    CHECK(make_policy("pfirst").needs_batched_parseq);
    CHECK_THROWS_AS(make_policy("equi"), std::invalid_argument);
    CHECK(policy_names().size() == 3);
}
