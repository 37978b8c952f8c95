#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace coldwave {

/// A finite mono waveform: amplitude samples (nominal range [-1, 1]) at a
/// fixed sample rate. All degradation and sampling math operates on whole
/// signals of this type.
struct Signal {
    std::vector<double> samples;
    int sample_rate = 0;

    Signal() = default;
    Signal(std::vector<double> s, int rate) : samples(std::move(s)), sample_rate(rate) {}

    std::size_t size() const { return samples.size(); }
    double* data() { return samples.data(); }
    const double* data() const { return samples.data(); }
    std::span<const double> view() const { return samples; }
    std::span<double> view() { return samples; }
};

inline Signal make_signal(std::size_t n, int rate, double fill = 0.0) {
    return Signal(std::vector<double>(n, fill), rate);
}

inline double rms(std::span<const double> x) {
    if (x.empty()) return 0.0;
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return std::sqrt(acc / static_cast<double>(x.size()));
}

inline double peak(std::span<const double> x) {
    double p = 0.0;
    for (double v : x) p = std::max(p, std::fabs(v));
    return p;
}

/// Paired clean/noisy utterance; the carrier for (x0, y = x0 + n).
struct UtterancePair {
    Signal clean;
    Signal noisy;
    std::string id;
    double snr_db = 0.0;
};

}  // namespace coldwave
