#include "coldwave/degrade.hpp"

#include <cmath>
#include <string>

#include "coldwave/errors.hpp"
#include "coldwave/kernels.hpp"

namespace coldwave {

namespace {

// Smaller sqrt(1 - alpha_t) denominators are degenerate severities. Only
// t = 0 can hit this, and the callers' preconditions already exclude it.
constexpr double kDenomEpsilon = 1e-12;

void check_severity(const Schedule& schedule, int t, const char* op) {
    if (t < 0 || t > schedule.steps())
        throw ConfigError(std::string(op) + ": severity " + std::to_string(t) +
                          " out of range [0, " + std::to_string(schedule.steps()) + "]");
}

void check_same_length(const Signal& a, const Signal& b, const char* op) {
    if (a.size() != b.size())
        throw DataError(std::string(op) + ": signal lengths differ (" +
                        std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
}

double noise_weight_denominator(const Schedule& schedule, int t, const char* op) {
    if (t < 1)
        throw ConfigError(std::string(op) + ": severity t = 0 is degenerate (alpha_0 = 1)");
    const double w = std::sqrt(1.0 - schedule.alpha(t));
    if (w < kDenomEpsilon)
        throw ConfigError(std::string(op) + ": sqrt(1 - alpha_" + std::to_string(t) +
                          ") below guard epsilon; degenerate severity");
    return w;
}

}  // namespace

Signal degrade(const Signal& x0, const Signal& xT, const Schedule& schedule, int t) {
    check_same_length(x0, xT, "degrade");
    check_severity(schedule, t, "degrade");
    const double a = schedule.alpha(t);
    Signal out = make_signal(x0.size(), x0.sample_rate);
    kernels::lincomb2(std::sqrt(a), x0.view(), std::sqrt(1.0 - a), xT.view(), out.view());
    return out;
}

Signal implied_noisy(const Signal& x_t, const Signal& x0_hat, const Schedule& schedule, int t) {
    check_same_length(x_t, x0_hat, "implied_noisy");
    check_severity(schedule, t, "implied_noisy");
    const double denom = noise_weight_denominator(schedule, t, "implied_noisy");
    const double a = schedule.alpha(t);
    Signal out = make_signal(x_t.size(), x_t.sample_rate);
    kernels::lincomb2(1.0 / denom, x_t.view(), -std::sqrt(a) / denom, x0_hat.view(), out.view());
    return out;
}

Signal degrade_reanchored(const Signal& x0_hat, const Signal& x_t, const Schedule& schedule,
                          int t, int s_target) {
    check_same_length(x0_hat, x_t, "degrade_reanchored");
    check_severity(schedule, t, "degrade_reanchored");
    check_severity(schedule, s_target, "degrade_reanchored");
    const double denom = noise_weight_denominator(schedule, t, "degrade_reanchored");
    const double a_t = schedule.alpha(t);
    const double a_s = schedule.alpha(s_target);
    const double ratio = std::sqrt(1.0 - a_s) / denom;
    // sqrt(a_s) x0_hat + ratio (x_t - sqrt(a_t) x0_hat), grouped per element.
    Signal out = make_signal(x_t.size(), x_t.sample_rate);
    kernels::lincomb2(std::sqrt(a_s) - ratio * std::sqrt(a_t), x0_hat.view(),
                      ratio, x_t.view(), out.view());
    return out;
}

}  // namespace coldwave
