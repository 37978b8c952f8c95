#include "coldwave/sampler.hpp"

#include <cmath>

#include "coldwave/degrade.hpp"
#include "coldwave/errors.hpp"
#include "coldwave/kernels.hpp"

namespace coldwave {

SamplerMethod parse_method(const std::string& name) {
    if (name == "direct") return SamplerMethod::direct;
    if (name == "naive") return SamplerMethod::naive;
    if (name == "improved") return SamplerMethod::improved;
    throw ConfigError("unknown sampler method '" + name + "' (direct|naive|improved)");
}

DegradationVariant parse_variant(const std::string& name) {
    if (name == "reanchored") return DegradationVariant::reanchored;
    if (name == "fixed-xt" || name == "fixed_xt") return DegradationVariant::fixed_xT;
    throw ConfigError("unknown degradation variant '" + name + "' (reanchored|fixed-xt)");
}

std::string method_name(SamplerMethod m) {
    switch (m) {
        case SamplerMethod::direct: return "direct";
        case SamplerMethod::naive: return "naive";
        case SamplerMethod::improved: return "improved";
    }
    return "?";
}

std::string variant_name(DegradationVariant v) {
    return v == DegradationVariant::reanchored ? "reanchored" : "fixed-xt";
}

Signal direct_reconstruction(const Restorer& restorer, const Signal& y, int severity) {
    return restorer.restore(y, severity);
}

SampleResult run_sampler(const Restorer& restorer, const Signal& x_T, const Schedule& schedule,
                         const SamplerConfig& config) {
    const int T = schedule.steps();
    const int t_start = config.t_start < 0 ? T : config.t_start;
    if (t_start < 1 || t_start > T)
        throw ConfigError("sampler: start severity " + std::to_string(t_start) +
                          " out of range [1, " + std::to_string(T) + "]");
    if (config.method == SamplerMethod::direct)
        throw ConfigError("sampler: direct reconstruction has no sampling loop; "
                          "use direct_reconstruction");
    if (!kernels::all_finite(x_T.view()))
        throw NumericError("sampler: non-finite input signal");

    SampleResult result;
    if (config.record_trajectory) result.trajectory.emplace();

    Signal x = x_T;
    for (int t = t_start; t >= 1; --t) {
        Signal x0_hat = restorer.restore(x, t);
        ++result.restorer_calls;
        if (x0_hat.size() != x.size())
            throw DataError("sampler: restorer changed signal length at step " + std::to_string(t));
        if (result.trajectory)
            result.trajectory->steps.push_back({t, x, x0_hat});

        Signal x_prev = make_signal(x.size(), x.sample_rate);
        if (config.method == SamplerMethod::improved) {
            if (config.variant == DegradationVariant::reanchored) {
                if (t == 1) {
                    // sqrt(1 - alpha_0) = 0: the update collapses to x0_hat.
                    x_prev = std::move(x0_hat);
                } else {
                    const double a_t = schedule.alpha(t);
                    const double a_prev = schedule.alpha(t - 1);
                    const double ratio = std::sqrt(1.0 - a_prev) / std::sqrt(1.0 - a_t);
                    kernels::lincomb2(std::sqrt(a_prev) - ratio * std::sqrt(a_t), x0_hat.view(),
                                      ratio, x.view(), x_prev.view());
                }
            } else {
                // x_{t-1} = x_t - D_xT(x0_hat, t) + D_xT(x0_hat, t-1)
                const double a_t = schedule.alpha(t);
                const double a_prev = schedule.alpha(t - 1);
                const double ca = std::sqrt(a_prev) - std::sqrt(a_t);
                const double cb = std::sqrt(1.0 - a_prev) - std::sqrt(1.0 - a_t);
                kernels::lincomb3(x.view(), ca, x0_hat.view(), cb, x_T.view(), x_prev.view());
            }
        } else {  // naive
            if (config.variant == DegradationVariant::fixed_xT) {
                x_prev = degrade(x0_hat, x_T, schedule, t - 1);
            } else {
                x_prev = degrade_reanchored(x0_hat, x, schedule, t, t - 1);
            }
        }

        if (!kernels::all_finite(x_prev.view()))
            throw NumericError("sampler: non-finite intermediate at step t = " + std::to_string(t));
        x = std::move(x_prev);
    }

    if (result.trajectory) result.trajectory->steps.push_back({0, x, x});
    result.output = std::move(x);
    return result;
}

}  // namespace coldwave
