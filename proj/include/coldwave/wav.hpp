#pragma once

#include <string>

#include "coldwave/signal.hpp"

namespace coldwave {

enum class WavEncoding { pcm16, float32 };

/// Reads a mono RIFF/WAVE file (PCM16 or IEEE float32). PCM16 samples are
/// scaled by 1/32768. Unknown chunks are skipped. Throws DataError naming
/// the offending field for malformed or unsupported files.
Signal read_wav(const std::string& path);

/// Writes a mono WAV file. PCM16 output clamps to [-1, 1] before
/// quantization; float32 round-trips float-representable samples exactly.
void write_wav(const std::string& path, const Signal& signal,
               WavEncoding encoding = WavEncoding::float32);

}  // namespace coldwave
