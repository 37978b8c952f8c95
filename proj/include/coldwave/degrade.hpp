#pragma once

#include "coldwave/schedule.hpp"
#include "coldwave/signal.hpp"

namespace coldwave {

// Deterministic interpolation degradation and its companions. All three are
// elementwise on whole utterances and pure in their inputs.

/// x_t = sqrt(alpha_t) * x0 + sqrt(1 - alpha_t) * xT.
Signal degrade(const Signal& x0, const Signal& xT, const Schedule& schedule, int t);

/// The noisy endpoint implied by (x_t, x0_hat) at severity t:
///   (x_t - sqrt(alpha_t) * x0_hat) / sqrt(1 - alpha_t).
/// Requires t >= 1; t = 0 is a degenerate severity (division by zero).
Signal implied_noisy(const Signal& x_t, const Signal& x0_hat, const Schedule& schedule, int t);

/// Degradation re-anchored so that the path from x0_hat passes through x_t
/// at severity t, evaluated at severity s_target:
///   sqrt(alpha_s) * x0_hat
///     + (sqrt(1 - alpha_s) / sqrt(1 - alpha_t)) * (x_t - sqrt(alpha_t) * x0_hat).
/// At s_target = t this returns x_t (anchor identity).
Signal degrade_reanchored(const Signal& x0_hat, const Signal& x_t, const Schedule& schedule,
                          int t, int s_target);

}  // namespace coldwave
