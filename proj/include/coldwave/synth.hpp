#pragma once

#include <cstdint>
#include <string>

#include "coldwave/signal.hpp"

namespace coldwave {

/// Speech-like clean signal: 3-8 harmonically related sinusoids on a slowly
/// drifting fundamental (80-300 Hz), amplitude-modulated by a smooth random
/// envelope with silent gaps. Peak-normalized to 0.5. Deterministic per seed.
Signal synth_clean(std::uint64_t seed, double duration_s, int sample_rate);

enum class NoiseKind { white, pink, tonal_babble };

NoiseKind parse_noise_kind(const std::string& name);
std::string noise_kind_name(NoiseKind kind);

/// Unit-RMS noise. white: i.i.d. uniform. pink: white spectrally shaped to a
/// -3 dB/octave slope. tonal_babble: dense random sinusoid mixture with
/// per-tone slow amplitude modulation.
Signal synth_noise(NoiseKind kind, std::uint64_t seed, double duration_s, int sample_rate);

/// noisy = clean + g * noise with g solving
/// 10 log10(|clean|^2 / |g noise|^2) = snr_db. Throws DataError when either
/// input is silent.
UtterancePair mix_at_snr(const Signal& clean, const Signal& noise, double snr_db);

}  // namespace coldwave
