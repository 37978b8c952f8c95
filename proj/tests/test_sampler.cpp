#include <doctest.h>

#include <cmath>

#include "coldwave/degrade.hpp"
#include "coldwave/errors.hpp"
#include "coldwave/sampler.hpp"
#include "test_util.hpp"

using namespace coldwave;
using testing::random_signal;

namespace {

struct ConstantRestorer : Restorer {
    double value;
    explicit ConstantRestorer(double v) : value(v) {}
    Signal restore(const Signal& x_t, int) const override {
        return make_signal(x_t.size(), x_t.sample_rate, value);
    }
};

struct BiasedRestorer : Restorer {
    Signal restore(const Signal& x_t, int t) const override {
        Signal out = x_t;
        for (std::size_t i = 0; i < out.size(); ++i)
            out.samples[i] = 0.4 * out.samples[i] + 0.27 + 0.01 * t;
        return out;
    }
};

struct NanRestorer : Restorer {
    Signal restore(const Signal& x_t, int t) const override {
        Signal out = x_t;
        if (t <= 3) out.samples[0] = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
};

Signal noisy_from(const Signal& clean, std::uint64_t seed, double amp = 0.4) {
    Signal out = clean;
    const Signal n = random_signal(seed, clean.size(), clean.sample_rate, amp);
    for (std::size_t i = 0; i < out.size(); ++i) out.samples[i] += n.samples[i];
    return out;
}

}  // namespace

TEST_CASE("direct reconstruction is a single restorer application") {
    const Signal clean = random_signal(1, 80);
    const Signal y = noisy_from(clean, 2);
    OracleRestorer oracle(clean);
    IdentityRestorer identity;
    CHECK(direct_reconstruction(oracle, y, 50).samples == clean.samples);
    CHECK(direct_reconstruction(identity, y, 50).samples == y.samples);
}

TEST_CASE("improved/reanchored scalar walk-through on the {1, 0.5, 0} schedule") {
    const Schedule sched = Schedule::from_alphas({1.0, 0.5, 0.0});
    const Signal x0({1.0}, 8000);
    const Signal x2({0.0}, 8000);
    OracleRestorer oracle(x0);
    SamplerConfig cfg;
    cfg.record_trajectory = true;
    const auto result = run_sampler(oracle, x2, sched, cfg);

    REQUIRE(result.trajectory.has_value());
    REQUIRE(result.trajectory->steps.size() == 3);
    CHECK(result.trajectory->steps[0].t == 2);
    CHECK(result.trajectory->steps[1].t == 1);
    CHECK(result.trajectory->steps[1].x.samples[0] == doctest::Approx(0.7071068).epsilon(1e-6));
    CHECK(result.trajectory->steps[2].t == 0);
    CHECK(result.output.samples[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("naive sampler scalar walk-through with a constant restorer") {
    const Schedule sched = Schedule::from_alphas({1.0, 0.5, 0.0});
    const Signal x2({0.0}, 8000);
    ConstantRestorer constant(0.9);
    SamplerConfig cfg;
    cfg.method = SamplerMethod::naive;
    cfg.variant = DegradationVariant::fixed_xT;
    cfg.record_trajectory = true;
    const auto result = run_sampler(constant, x2, sched, cfg);
    CHECK(result.trajectory->steps[1].x.samples[0] == doctest::Approx(0.6363961).epsilon(1e-6));
    CHECK(result.output.samples[0] == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("oracle exactness across methods, variants, and step counts") {
    for (int T : {2, 10, 50}) {
        const Schedule sched = make_cosine_schedule(T, 0.008);
        const Signal clean = random_signal(static_cast<std::uint64_t>(10 + T), 300);
        const Signal y = noisy_from(clean, static_cast<std::uint64_t>(20 + T));
        OracleRestorer oracle(clean);

        for (SamplerMethod method : {SamplerMethod::naive, SamplerMethod::improved}) {
            for (DegradationVariant variant :
                 {DegradationVariant::reanchored, DegradationVariant::fixed_xT}) {
                SamplerConfig cfg;
                cfg.method = method;
                cfg.variant = variant;
                cfg.record_trajectory = true;
                const auto result = run_sampler(oracle, y, sched, cfg);
                CHECK(testing::max_rel_err(result.output.samples, clean.samples, 1.0) < 1e-9);

                // Every intermediate sits on the true forward trajectory.
                if (method == SamplerMethod::improved &&
                    variant == DegradationVariant::reanchored) {
                    for (const auto& step : result.trajectory->steps) {
                        const Signal expected = degrade(clean, y, sched, step.t);
                        CHECK(testing::max_rel_err(step.x.samples, expected.samples, 1.0) < 1e-9);
                    }
                }
            }
        }
    }
}

TEST_CASE("improved variants agree when the restorer is exact") {
    const Schedule sched = make_cosine_schedule(50, 0.008);
    const Signal clean = random_signal(31, 256);
    const Signal y = noisy_from(clean, 32);
    OracleRestorer oracle(clean);

    SamplerConfig cfg;
    cfg.record_trajectory = true;
    cfg.variant = DegradationVariant::reanchored;
    const auto re = run_sampler(oracle, y, sched, cfg);
    cfg.variant = DegradationVariant::fixed_xT;
    const auto fx = run_sampler(oracle, y, sched, cfg);

    REQUIRE(re.trajectory->steps.size() == fx.trajectory->steps.size());
    for (std::size_t i = 0; i < re.trajectory->steps.size(); ++i) {
        CHECK(testing::max_rel_err(re.trajectory->steps[i].x.samples,
                                   fx.trajectory->steps[i].x.samples, 1.0) < 1e-9);
    }
}

TEST_CASE("improved/reanchored output is exactly the final restoration estimate") {
    const Schedule sched = make_cosine_schedule(50, 0.008);
    const Signal y = random_signal(40, 150);
    BiasedRestorer biased;

    SamplerConfig cfg;
    cfg.record_trajectory = true;
    const auto result = run_sampler(biased, y, sched, cfg);

    const auto& steps = result.trajectory->steps;
    const Signal& x1 = steps[steps.size() - 2].x;  // entry at t = 1
    REQUIRE(steps[steps.size() - 2].t == 1);
    const Signal expected = biased.restore(x1, 1);
    CHECK(testing::max_abs_err(result.output.samples, expected.samples) < 1e-12);
}

TEST_CASE("T = 1 collapses improved sampling to one restoration") {
    const Schedule sched = make_cosine_schedule(1, 0.008);
    const Signal y = random_signal(44, 70);
    BiasedRestorer biased;
    SamplerConfig cfg;
    const auto result = run_sampler(biased, y, sched, cfg);
    CHECK(result.restorer_calls == 1);
    CHECK(result.output.samples == biased.restore(y, 1).samples);
}

TEST_CASE("sampler performs exactly t_start restorer calls") {
    const Schedule sched = make_cosine_schedule(50, 0.008);
    const Signal y = random_signal(50, 64);
    IdentityRestorer identity;
    SamplerConfig cfg;
    CHECK(run_sampler(identity, y, sched, cfg).restorer_calls == 50);
    cfg.t_start = 7;
    CHECK(run_sampler(identity, y, sched, cfg).restorer_calls == 7);
}

TEST_CASE("sampler validates configuration and flags numeric failures") {
    const Schedule sched = make_cosine_schedule(10, 0.008);
    const Signal y = random_signal(60, 30);
    IdentityRestorer identity;

    SamplerConfig cfg;
    cfg.t_start = 11;
    CHECK_THROWS_AS(run_sampler(identity, y, sched, cfg), ConfigError);
    cfg.t_start = 0;
    CHECK_THROWS_AS(run_sampler(identity, y, sched, cfg), ConfigError);

    SamplerConfig direct_cfg;
    direct_cfg.method = SamplerMethod::direct;
    CHECK_THROWS_AS(run_sampler(identity, y, sched, direct_cfg), ConfigError);

    NanRestorer nan_restorer;
    SamplerConfig nan_cfg;
    CHECK_THROWS_WITH_AS(run_sampler(nan_restorer, y, sched, nan_cfg),
                         doctest::Contains("step"), NumericError);
}

TEST_CASE("method and variant names round-trip through the parsers") {
    CHECK(parse_method("improved") == SamplerMethod::improved);
    CHECK(parse_variant("fixed-xt") == DegradationVariant::fixed_xT);
    CHECK(method_name(SamplerMethod::naive) == "naive");
    CHECK(variant_name(DegradationVariant::reanchored) == "reanchored");
    CHECK_THROWS_AS(parse_method("bogus"), ConfigError);
    CHECK_THROWS_AS(parse_variant("bogus"), ConfigError);
}
