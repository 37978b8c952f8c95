#pragma once

#include <string>
#include <vector>

namespace coldwave {

/// Interpolation-weight table alpha_0..alpha_T mapping degradation severity
/// to the clean-signal weight. alpha_0 = 1, alpha_T = 0, strictly decreasing.
class Schedule {
public:
    /// Builds a schedule from explicit weights; validates all invariants.
    /// Used by the linear demo schedule and by tests; `s` is recorded only
    /// for provenance.
    static Schedule from_alphas(std::vector<double> alphas, double s = 0.0);

    int steps() const { return static_cast<int>(alphas_.size()) - 1; }
    double offset() const { return s_; }

    /// Stored alpha_t; throws ConfigError when t is outside [0, T].
    double alpha(int t) const;

    const std::vector<double>& alphas() const { return alphas_; }

    /// CSV dump with header "t,alpha", one row per severity level.
    std::string to_csv() const;

private:
    Schedule(std::vector<double> alphas, double s) : alphas_(std::move(alphas)), s_(s) {}
    std::vector<double> alphas_;
    double s_ = 0.0;
};

/// Cosine schedule alpha_t = f(t)/f(0), f(t) = cos(((t/T + s)/(1 + s)) * pi/2)^2.
/// The terminal value is clamped to exactly 0 (the formula is analytically 0
/// at t = T; rounding leaves a sub-epsilon residual). Throws ConfigError for
/// T < 1 or s <= 0.
Schedule make_cosine_schedule(int steps, double s = 0.008);

/// Equally spaced weights 1 - t/T; the demo schedule ({1, 0.5, 0} at T = 2).
Schedule make_linear_schedule(int steps);

}  // namespace coldwave
