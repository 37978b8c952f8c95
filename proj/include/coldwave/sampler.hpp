#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coldwave/restorer.hpp"
#include "coldwave/schedule.hpp"
#include "coldwave/signal.hpp"

namespace coldwave {

enum class SamplerMethod { direct, naive, improved };
enum class DegradationVariant { reanchored, fixed_xT };

SamplerMethod parse_method(const std::string& name);
DegradationVariant parse_variant(const std::string& name);
std::string method_name(SamplerMethod m);
std::string variant_name(DegradationVariant v);

struct SamplerConfig {
    SamplerMethod method = SamplerMethod::improved;
    DegradationVariant variant = DegradationVariant::reanchored;
    int t_start = -1;  // -1: start from the schedule's T
    bool record_trajectory = false;
};

/// Per-step record (t, x_t, restoration estimate at t); the final entry is
/// (0, x_0, x_0).
struct Trajectory {
    struct Step {
        int t;
        Signal x;
        Signal x0_hat;
    };
    std::vector<Step> steps;
};

struct SampleResult {
    Signal output;
    std::optional<Trajectory> trajectory;
    std::size_t restorer_calls = 0;
};

/// One-shot restoration R(y, severity).
Signal direct_reconstruction(const Restorer& restorer, const Signal& y, int severity);

/// Iterative sampling from x_{t_start} = x_T down to x_0.
///
/// improved/reanchored:  x_{t-1} = sqrt(a_{t-1}) x0_hat
///                         + (sqrt(1-a_{t-1})/sqrt(1-a_t)) (x_t - sqrt(a_t) x0_hat),
///   with the t = 1 step folded analytically (sqrt(1-a_0) = 0, so x_0 = x0_hat).
/// improved/fixed_xT:    x_{t-1} = x_t - D_xT(x0_hat, t) + D_xT(x0_hat, t-1).
/// naive:                x_{t-1} is the re-degradation of x0_hat at t-1
///   (fixed_xT uses D_xT, reanchored uses the degradation anchored at x_t).
///
/// Throws NumericError identifying the step if an intermediate goes
/// non-finite.
SampleResult run_sampler(const Restorer& restorer, const Signal& x_T, const Schedule& schedule,
                         const SamplerConfig& config);

}  // namespace coldwave
