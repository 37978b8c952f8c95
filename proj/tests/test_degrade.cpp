#include <doctest.h>

#include <cmath>

#include "coldwave/degrade.hpp"
#include "coldwave/errors.hpp"
#include "coldwave/rng.hpp"
#include "test_util.hpp"

using namespace coldwave;
using testing::random_signal;

namespace {
Signal scalar_sig(double v) { return Signal({v}, 8000); }
}  // namespace

TEST_CASE("degrade endpoints reproduce the operands exactly") {
    const Schedule sched = make_cosine_schedule(50, 0.008);
    const Signal x0 = random_signal(1, 500);
    const Signal xT = random_signal(2, 500);
    CHECK(degrade(x0, xT, sched, 0).samples == x0.samples);
    CHECK(degrade(x0, xT, sched, 50).samples == xT.samples);
}

TEST_CASE("degrade scalar hand value at alpha = 0.5") {
    const Schedule sched = Schedule::from_alphas({1.0, 0.5, 0.0});
    const Signal out = degrade(scalar_sig(1.0), scalar_sig(0.0), sched, 1);
    CHECK(out.samples[0] == doctest::Approx(0.7071068).epsilon(1e-6));
}

TEST_CASE("degrade validates shapes and severity") {
    const Schedule sched = make_cosine_schedule(10, 0.008);
    CHECK_THROWS_AS(degrade(random_signal(1, 5), random_signal(2, 6), sched, 3), DataError);
    CHECK_THROWS_AS(degrade(random_signal(1, 5), random_signal(2, 5), sched, 11), ConfigError);
    CHECK_THROWS_AS(degrade(random_signal(1, 5), random_signal(2, 5), sched, -1), ConfigError);
}

TEST_CASE("implied_noisy inverts the forward degradation") {
    const Schedule sched = make_cosine_schedule(50, 0.008);
    const Signal x0 = random_signal(3, 400);
    const Signal xT = random_signal(4, 400);
    for (int t = 1; t <= 50; ++t) {
        const Signal x_t = degrade(x0, xT, sched, t);
        const Signal back = implied_noisy(x_t, x0, sched, t);
        CHECK(testing::max_rel_err(back.samples, xT.samples, 1.0) < 1e-9);
    }
}

TEST_CASE("implied_noisy at t = T returns x_t exactly") {
    const Schedule sched = make_cosine_schedule(20, 0.008);
    const Signal x_t = random_signal(5, 64);
    const Signal x0_hat = random_signal(6, 64);
    CHECK(implied_noisy(x_t, x0_hat, sched, 20).samples == x_t.samples);
}

TEST_CASE("implied_noisy scalar hand value") {
    const Schedule sched = Schedule::from_alphas({1.0, 0.5, 0.0});
    const Signal out = implied_noisy(scalar_sig(0.7071068), scalar_sig(1.0), sched, 1);
    CHECK(std::fabs(out.samples[0]) < 1e-6);
}

TEST_CASE("implied_noisy rejects the degenerate severity t = 0") {
    const Schedule sched = make_cosine_schedule(10, 0.008);
    CHECK_THROWS_AS(implied_noisy(random_signal(1, 8), random_signal(2, 8), sched, 0), ConfigError);
}

TEST_CASE("anchor identity: re-anchored degradation at s = t returns x_t") {
    const Schedule sched = make_cosine_schedule(50, 0.008);
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const int t = static_cast<int>(rng.uniform_int(1, 50));
        const Signal x0_hat = random_signal(1000 + static_cast<std::uint64_t>(trial), 120);
        const Signal x_t = random_signal(2000 + static_cast<std::uint64_t>(trial), 120);
        const Signal out = degrade_reanchored(x0_hat, x_t, sched, t, t);
        CHECK(testing::max_rel_err(out.samples, x_t.samples, 1.0) < 1e-9);
    }
}

TEST_CASE("re-anchored degradation at s = 0 returns the restoration estimate") {
    const Schedule sched = make_cosine_schedule(50, 0.008);
    const Signal x0_hat = random_signal(7, 90);
    const Signal x_t = random_signal(8, 90);
    CHECK(degrade_reanchored(x0_hat, x_t, sched, 25, 0).samples == x0_hat.samples);
}

TEST_CASE("re-anchored degradation scalar hand value") {
    // alphas: t = 2 has alpha 0.5, target s = 1 has alpha 0.8.
    const Schedule sched = Schedule::from_alphas({1.0, 0.8, 0.5, 0.0});
    const Signal out = degrade_reanchored(scalar_sig(0.9), scalar_sig(0.7071068), sched, 2, 1);
    // 0.9*sqrt(0.8) + (sqrt(0.2)/sqrt(0.5)) * (0.7071068 - sqrt(0.5)*0.9)
    CHECK(out.samples[0] == doctest::Approx(0.8497058433).epsilon(1e-6));
}

TEST_CASE("re-anchored degradation factors through the implied noisy sample") {
    const Schedule sched = make_cosine_schedule(50, 0.008);
    Rng rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        const int t = static_cast<int>(rng.uniform_int(1, 50));
        const int s = static_cast<int>(rng.uniform_int(0, 50));
        const Signal x0_hat = random_signal(3000 + static_cast<std::uint64_t>(trial), 75);
        const Signal x_t = random_signal(4000 + static_cast<std::uint64_t>(trial), 75);
        const Signal direct = degrade_reanchored(x0_hat, x_t, sched, t, s);
        const Signal composed = degrade(x0_hat, implied_noisy(x_t, x0_hat, sched, t), sched, s);
        CHECK(testing::max_rel_err(direct.samples, composed.samples, 1.0) < 1e-12);
    }
}

TEST_CASE("degradation is linear in its signal operands") {
    const Schedule sched = make_cosine_schedule(30, 0.008);
    const Signal x0 = random_signal(9, 60);
    const Signal xT = random_signal(10, 60);
    const double a = -2.75;
    Signal ax0 = x0, axT = xT;
    for (auto& v : ax0.samples) v *= a;
    for (auto& v : axT.samples) v *= a;
    for (int t : {1, 15, 29}) {
        Signal scaled = degrade(x0, xT, sched, t);
        for (auto& v : scaled.samples) v *= a;
        const Signal direct = degrade(ax0, axT, sched, t);
        CHECK(testing::max_rel_err(direct.samples, scaled.samples, 1.0) < 1e-12);
    }
}
