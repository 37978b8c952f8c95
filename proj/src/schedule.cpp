#include "coldwave/schedule.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "coldwave/errors.hpp"

namespace coldwave {

namespace {

void validate_alphas(const std::vector<double>& alphas) {
    if (alphas.size() < 2) throw ConfigError("schedule: need at least T = 1 (two weights)");
    if (alphas.front() != 1.0) throw ConfigError("schedule: alpha_0 must be exactly 1");
    if (alphas.back() != 0.0) throw ConfigError("schedule: alpha_T must be exactly 0");
    for (std::size_t t = 0; t + 1 < alphas.size(); ++t) {
        if (!(alphas[t] > alphas[t + 1]))
            throw ConfigError("schedule: weights must be strictly decreasing");
    }
    for (double a : alphas) {
        if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("schedule: weights must lie in [0, 1]");
    }
}

}  // namespace

Schedule Schedule::from_alphas(std::vector<double> alphas, double s) {
    validate_alphas(alphas);
    return Schedule(std::move(alphas), s);
}

double Schedule::alpha(int t) const {
    if (t < 0 || t > steps())
        throw ConfigError("schedule: severity index " + std::to_string(t) +
                          " out of range [0, " + std::to_string(steps()) + "]");
    return alphas_[static_cast<std::size_t>(t)];
}

std::string Schedule::to_csv() const {
    std::string out = "t,alpha\n";
    char line[64];
    for (int t = 0; t <= steps(); ++t) {
        std::snprintf(line, sizeof(line), "%d,%.17g\n", t, alphas_[static_cast<std::size_t>(t)]);
        out += line;
    }
    return out;
}

Schedule make_cosine_schedule(int steps, double s) {
    if (steps < 1) throw ConfigError("cosine schedule: step count must be >= 1");
    if (!(s > 0.0)) throw ConfigError("cosine schedule: offset s must be > 0");

    const double T = static_cast<double>(steps);
    auto f = [&](double t) {
        const double c = std::cos((t / T + s) / (1.0 + s) * std::numbers::pi / 2.0);
        return c * c;
    };
    const double f0 = f(0.0);

    std::vector<double> alphas(static_cast<std::size_t>(steps) + 1);
    alphas[0] = 1.0;
    for (int t = 1; t < steps; ++t) alphas[static_cast<std::size_t>(t)] = f(t) / f0;
    // f(T) is exactly 0 analytically; clamp the rounding residual so that
    // sqrt(1 - alpha_T) = 1 holds exactly downstream.
    alphas[static_cast<std::size_t>(steps)] = 0.0;

    return Schedule::from_alphas(std::move(alphas), s);
}

Schedule make_linear_schedule(int steps) {
    if (steps < 1) throw ConfigError("linear schedule: step count must be >= 1");
    std::vector<double> alphas(static_cast<std::size_t>(steps) + 1);
    for (int t = 0; t <= steps; ++t)
        alphas[static_cast<std::size_t>(t)] = 1.0 - static_cast<double>(t) / static_cast<double>(steps);
    alphas[0] = 1.0;
    alphas[static_cast<std::size_t>(steps)] = 0.0;
    return Schedule::from_alphas(std::move(alphas));
}

}  // namespace coldwave
