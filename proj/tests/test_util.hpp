#pragma once

#include <vector>

#include "coldwave/rng.hpp"
#include "coldwave/signal.hpp"

namespace coldwave::testing {

inline Signal random_signal(std::uint64_t seed, std::size_t n, int rate = 8000,
                            double amplitude = 1.0) {
    Rng rng(seed);
    Signal s = make_signal(n, rate);
    for (double& v : s.samples) v = rng.uniform(-amplitude, amplitude);
    return s;
}

inline double max_rel_err(const std::vector<double>& a, const std::vector<double>& b,
                          double floor = 1e-12) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double denom = std::max({std::fabs(a[i]), std::fabs(b[i]), floor});
        worst = std::max(worst, std::fabs(a[i] - b[i]) / denom);
    }
    return worst;
}

inline double max_abs_err(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::fabs(a[i] - b[i]));
    return worst;
}

}  // namespace coldwave::testing
