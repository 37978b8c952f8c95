#include <doctest.h>

#include "coldwave/errors.hpp"
#include "coldwave/schedule.hpp"

using namespace coldwave;

// Extended-precision evaluation of the cosine formula at T=50, s=0.008,
// t=25, frozen before the implementation was written.
static constexpr double kAlpha25 = 0.49384359044063771;

TEST_CASE("cosine schedule endpoints are exact and the middle matches the oracle") {
    const Schedule sched = make_cosine_schedule(50, 0.008);
    CHECK(sched.steps() == 50);
    CHECK(sched.alphas().size() == 51);
    CHECK(sched.alpha(0) == 1.0);
    CHECK(sched.alpha(50) == 0.0);
    CHECK(std::fabs(sched.alpha(25) - kAlpha25) < 1e-6);
}

TEST_CASE("cosine schedule is strictly decreasing within [0, 1] across the sweep") {
    for (int T : {1, 2, 5, 50, 200}) {
        for (double s : {0.001, 0.008, 0.05}) {
            const Schedule sched = make_cosine_schedule(T, s);
            CHECK(sched.alpha(0) == 1.0);
            CHECK(sched.alpha(T) == 0.0);
            CHECK(static_cast<int>(sched.alphas().size()) == T + 1);
            for (int t = 0; t < T; ++t) {
                CHECK(sched.alpha(t) > sched.alpha(t + 1));
                CHECK(sched.alpha(t) <= 1.0);
                CHECK(sched.alpha(t + 1) >= 0.0);
            }
        }
    }
}

TEST_CASE("cosine schedule rejects invalid parameters") {
    CHECK_THROWS_AS(make_cosine_schedule(0, 0.008), ConfigError);
    CHECK_THROWS_AS(make_cosine_schedule(-3, 0.008), ConfigError);
    CHECK_THROWS_AS(make_cosine_schedule(50, 0.0), ConfigError);
    CHECK_THROWS_AS(make_cosine_schedule(50, -0.1), ConfigError);
}

TEST_CASE("alpha lookup validates the severity index") {
    const Schedule sched = make_cosine_schedule(50, 0.008);
    CHECK_THROWS_AS(sched.alpha(51), ConfigError);
    CHECK_THROWS_AS(sched.alpha(-1), ConfigError);
}

TEST_CASE("explicit weight tables are validated") {
    CHECK_NOTHROW(Schedule::from_alphas({1.0, 0.5, 0.0}));
    CHECK_THROWS_AS(Schedule::from_alphas({0.9, 0.5, 0.0}), ConfigError);  // alpha_0 != 1
    CHECK_THROWS_AS(Schedule::from_alphas({1.0, 0.5, 0.1}), ConfigError);  // alpha_T != 0
    CHECK_THROWS_AS(Schedule::from_alphas({1.0, 0.5, 0.5, 0.0}), ConfigError);  // not strict
    CHECK_THROWS_AS(Schedule::from_alphas({1.0}), ConfigError);           // T = 0
}

TEST_CASE("linear schedule hits the documented demo weights") {
    const Schedule sched = make_linear_schedule(2);
    CHECK(sched.alpha(0) == 1.0);
    CHECK(sched.alpha(1) == 0.5);
    CHECK(sched.alpha(2) == 0.0);
}

TEST_CASE("schedule CSV dump has the documented header and one row per level") {
    const Schedule sched = make_cosine_schedule(4, 0.008);
    const std::string csv = sched.to_csv();
    CHECK(csv.rfind("t,alpha\n0,1\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);  // header + 5 rows
    CHECK(csv.find("\n4,0\n") != std::string::npos);
}
