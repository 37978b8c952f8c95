#include "coldwave/synth.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "coldwave/errors.hpp"
#include "coldwave/kernels.hpp"
#include "coldwave/rng.hpp"

namespace coldwave {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t checked_length(double duration_s, int sample_rate) {
    if (!(duration_s > 0.0)) throw ConfigError("synth: duration must be > 0");
    if (sample_rate <= 0) throw ConfigError("synth: sample rate must be > 0");
    return static_cast<std::size_t>(std::llround(duration_s * sample_rate));
}

void normalize_rms(Signal& s) {
    const double r = rms(s.view());
    if (r <= 0.0) throw NumericError("synth: cannot normalize a silent signal");
    const double g = 1.0 / r;
    for (double& v : s.samples) v *= g;
}

// Iterative radix-2 Cooley-Tukey; n must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = (inverse ? kTwoPi : -kTwoPi) / static_cast<double>(len);
        const std::complex<double> wl(std::cos(angle), std::sin(angle));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        const double inv_n = 1.0 / static_cast<double>(n);
        for (auto& v : a) v *= inv_n;
    }
}

Signal white_noise(Rng& rng, std::size_t n, int sample_rate) {
    Signal s = make_signal(n, sample_rate);
    for (double& v : s.samples) v = rng.uniform(-1.0, 1.0);
    return s;
}

// White noise shaped in the frequency domain so power falls as 1/f
// (-3 dB/octave). DC is removed; the shaping runs on the next power of two
// and the result is truncated back.
Signal pink_noise(Rng& rng, std::size_t n, int sample_rate) {
    std::size_t n2 = 1;
    while (n2 < n) n2 <<= 1;
    std::vector<std::complex<double>> spec(n2);
    for (std::size_t i = 0; i < n2; ++i) spec[i] = rng.uniform(-1.0, 1.0);
    fft_inplace(spec, false);
    spec[0] = 0.0;
    for (std::size_t k = 1; k <= n2 / 2; ++k) {
        const double gain = 1.0 / std::sqrt(static_cast<double>(k));
        spec[k] *= gain;
        if (k != n2 / 2) spec[n2 - k] *= gain;
    }
    fft_inplace(spec, true);
    Signal s = make_signal(n, sample_rate);
    for (std::size_t i = 0; i < n; ++i) s.samples[i] = spec[i].real();
    return s;
}

Signal babble_noise(Rng& rng, std::size_t n, int sample_rate) {
    const int tones = static_cast<int>(rng.uniform_int(40, 80));
    struct Tone {
        double freq, amp, phase, am_rate, am_depth, am_phase;
    };
    std::vector<Tone> bank(static_cast<std::size_t>(tones));
    const double f_hi = 0.45 * sample_rate;
    for (auto& tone : bank) {
        tone.freq = rng.uniform(60.0, f_hi);
        tone.amp = rng.uniform(0.1, 1.0);
        tone.phase = rng.uniform(0.0, kTwoPi);
        tone.am_rate = rng.uniform(0.2, 2.0);
        tone.am_depth = rng.uniform(0.3, 0.8);
        tone.am_phase = rng.uniform(0.0, kTwoPi);
    }
    Signal s = make_signal(n, sample_rate);
    const std::ptrdiff_t nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for if (n >= 4096)
    for (std::ptrdiff_t i = 0; i < nn; ++i) {
        const double t = static_cast<double>(i) / sample_rate;
        double acc = 0.0;
        for (const auto& tone : bank) {
            const double am = 1.0 + tone.am_depth * std::sin(kTwoPi * tone.am_rate * t + tone.am_phase);
            acc += tone.amp * am * std::sin(kTwoPi * tone.freq * t + tone.phase);
        }
        s.samples[i] = acc;
    }
    return s;
}

}  // namespace

Signal synth_clean(std::uint64_t seed, double duration_s, int sample_rate) {
    const std::size_t n = checked_length(duration_s, sample_rate);
    Rng rng(seed);

    const int harmonics = static_cast<int>(rng.uniform_int(3, 8));
    const double f0_base = rng.uniform(80.0, 300.0);
    const double drift_depth = rng.uniform(0.02, 0.10);
    const double drift_rate = rng.uniform(0.1, 0.5);  // Hz
    const double drift_phase = rng.uniform(0.0, kTwoPi);

    std::vector<double> amp(static_cast<std::size_t>(harmonics));
    std::vector<double> phase(static_cast<std::size_t>(harmonics));
    for (int h = 0; h < harmonics; ++h) {
        amp[static_cast<std::size_t>(h)] = rng.uniform(0.3, 1.0) / static_cast<double>(h + 1);
        phase[static_cast<std::size_t>(h)] = rng.uniform(0.0, kTwoPi);
    }

    // Voiced/silent segment plan with short raised-cosine edges.
    std::vector<double> env(n, 0.0);
    const std::size_t edge = static_cast<std::size_t>(sample_rate / 100);  // 10 ms
    std::size_t pos = 0;
    bool voiced = true;  // guarantee at least one voiced segment
    while (pos < n) {
        const double seg_s = voiced ? rng.uniform(0.10, 0.35) : rng.uniform(0.03, 0.15);
        std::size_t seg = std::max<std::size_t>(1, static_cast<std::size_t>(seg_s * sample_rate));
        seg = std::min(seg, n - pos);
        if (voiced) {
            const double level = rng.uniform(0.5, 1.0);
            for (std::size_t i = 0; i < seg; ++i) {
                double w = 1.0;
                if (i < edge) w = 0.5 - 0.5 * std::cos(std::numbers::pi * i / edge);
                const std::size_t from_end = seg - 1 - i;
                if (from_end < edge)
                    w = std::min(w, 0.5 - 0.5 * std::cos(std::numbers::pi * from_end / edge));
                env[pos + i] = level * w;
            }
        }
        pos += seg;
        voiced = !voiced;
    }

    Signal s = make_signal(n, sample_rate);
    std::vector<double> acc_phase = phase;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / sample_rate;
        const double f0 = f0_base * (1.0 + drift_depth * std::sin(kTwoPi * drift_rate * t + drift_phase));
        double v = 0.0;
        for (int h = 0; h < harmonics; ++h) {
            auto hi = static_cast<std::size_t>(h);
            v += amp[hi] * std::sin(acc_phase[hi]);
            acc_phase[hi] += kTwoPi * (h + 1) * f0 / sample_rate;
        }
        s.samples[i] = env[i] * v;
    }

    const double p = peak(s.view());
    if (p <= 0.0) throw NumericError("synth_clean: generated a silent signal");
    const double g = 0.5 / p;
    for (double& v : s.samples) v *= g;
    return s;
}

NoiseKind parse_noise_kind(const std::string& name) {
    if (name == "white") return NoiseKind::white;
    if (name == "pink") return NoiseKind::pink;
    if (name == "tonal-babble" || name == "tonal_babble") return NoiseKind::tonal_babble;
    throw ConfigError("unknown noise kind '" + name + "' (white|pink|tonal-babble)");
}

std::string noise_kind_name(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::white: return "white";
        case NoiseKind::pink: return "pink";
        case NoiseKind::tonal_babble: return "tonal-babble";
    }
    return "?";
}

Signal synth_noise(NoiseKind kind, std::uint64_t seed, double duration_s, int sample_rate) {
    const std::size_t n = checked_length(duration_s, sample_rate);
    Rng rng(seed);
    Signal s;
    switch (kind) {
        case NoiseKind::white: s = white_noise(rng, n, sample_rate); break;
        case NoiseKind::pink: s = pink_noise(rng, n, sample_rate); break;
        case NoiseKind::tonal_babble: s = babble_noise(rng, n, sample_rate); break;
    }
    normalize_rms(s);
    return s;
}

UtterancePair mix_at_snr(const Signal& clean, const Signal& noise, double snr_db) {
    if (clean.size() != noise.size())
        throw DataError("mix_at_snr: signal lengths differ (" + std::to_string(clean.size()) +
                        " vs " + std::to_string(noise.size()) + ")");
    if (clean.sample_rate != noise.sample_rate)
        throw DataError("mix_at_snr: sample rates differ");
    if (rms(clean.view()) <= 1e-9) throw DataError("mix_at_snr: silent clean signal");
    if (rms(noise.view()) <= 1e-9) throw DataError("mix_at_snr: silent noise signal");

    const double clean_power = kernels::sum_sq(clean.view());
    const double noise_power = kernels::sum_sq(noise.view());
    const double gain = std::sqrt(clean_power / (noise_power * std::pow(10.0, snr_db / 10.0)));

    UtterancePair pair;
    pair.clean = clean;
    pair.noisy = make_signal(clean.size(), clean.sample_rate);
    kernels::lincomb2(1.0, clean.view(), gain, noise.view(), pair.noisy.view());
    pair.snr_db = snr_db;
    return pair;
}

}  // namespace coldwave
