#include "coldwave/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "coldwave/errors.hpp"
#include "coldwave/kernels.hpp"

namespace coldwave {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatIeeeFloat = 3;

std::uint32_t le32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t le16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put32(std::vector<unsigned char>& out, std::uint32_t v) {
    out.push_back(static_cast<unsigned char>(v));
    out.push_back(static_cast<unsigned char>(v >> 8));
    out.push_back(static_cast<unsigned char>(v >> 16));
    out.push_back(static_cast<unsigned char>(v >> 24));
}

void put16(std::vector<unsigned char>& out, std::uint16_t v) {
    out.push_back(static_cast<unsigned char>(v));
    out.push_back(static_cast<unsigned char>(v >> 8));
}

void put_tag(std::vector<unsigned char>& out, const char* tag) {
    out.insert(out.end(), tag, tag + 4);
}

}  // namespace

Signal read_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("wav: cannot open: " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());

    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0)
        throw DataError("wav: missing RIFF header in " + path);
    if (std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw DataError("wav: RIFF form type is not WAVE in " + path);

    bool have_fmt = false;
    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t sample_rate = 0;
    const unsigned char* data = nullptr;
    std::uint32_t data_size = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const char* tag = reinterpret_cast<const char*>(bytes.data() + pos);
        const std::uint32_t size = le32(bytes.data() + pos + 4);
        pos += 8;
        if (pos + size > bytes.size())
            throw DataError("wav: chunk '" + std::string(tag, 4) + "' overruns file in " + path);
        if (std::memcmp(tag, "fmt ", 4) == 0) {
            if (size < 16) throw DataError("wav: fmt chunk too small in " + path);
            const unsigned char* f = bytes.data() + pos;
            format = le16(f);
            channels = le16(f + 2);
            sample_rate = le32(f + 4);
            bits = le16(f + 14);
            have_fmt = true;
        } else if (std::memcmp(tag, "data", 4) == 0) {
            data = bytes.data() + pos;
            data_size = size;
        }
        pos += size + (size & 1);  // chunks are word-aligned
    }

    if (!have_fmt) throw DataError("wav: missing fmt chunk in " + path);
    if (!data) throw DataError("wav: missing data chunk in " + path);
    if (channels != 1)
        throw DataError("wav: unsupported channel count " + std::to_string(channels) +
                        " (mono only) in " + path);
    if (sample_rate == 0) throw DataError("wav: sample_rate field is zero in " + path);

    Signal out;
    out.sample_rate = static_cast<int>(sample_rate);
    if (format == kFormatPcm) {
        if (bits != 16)
            throw DataError("wav: unsupported bits_per_sample " + std::to_string(bits) +
                            " for PCM (16 only) in " + path);
        const std::size_t n = data_size / 2;
        out.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::int16_t v =
                static_cast<std::int16_t>(le16(data + 2 * i));
            out.samples[i] = static_cast<double>(v) / 32768.0;
        }
    } else if (format == kFormatIeeeFloat) {
        if (bits != 32)
            throw DataError("wav: unsupported bits_per_sample " + std::to_string(bits) +
                            " for IEEE float (32 only) in " + path);
        const std::size_t n = data_size / 4;
        out.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint32_t u = le32(data + 4 * i);
            float f;
            std::memcpy(&f, &u, 4);
            out.samples[i] = static_cast<double>(f);
        }
    } else {
        throw DataError("wav: unsupported audio_format " + std::to_string(format) +
                        " (PCM or IEEE float) in " + path);
    }
    return out;
}

void write_wav(const std::string& path, const Signal& signal, WavEncoding encoding) {
    if (signal.sample_rate <= 0) throw DataError("wav: signal sample rate must be positive");
    if (!kernels::all_finite(signal.view()))
        throw NumericError("wav: refusing to write non-finite samples to " + path);

    const std::uint32_t n = static_cast<std::uint32_t>(signal.size());
    const std::uint16_t bytes_per = encoding == WavEncoding::pcm16 ? 2 : 4;
    const std::uint16_t format = encoding == WavEncoding::pcm16 ? kFormatPcm : kFormatIeeeFloat;
    const std::uint32_t data_size = n * bytes_per;
    const bool fact = encoding == WavEncoding::float32;  // required for non-PCM
    const std::uint32_t riff_size = 4 + (8 + 16) + (fact ? 12 : 0) + 8 + data_size;

    std::vector<unsigned char> out;
    out.reserve(riff_size + 8);
    put_tag(out, "RIFF");
    put32(out, riff_size);
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put32(out, 16);
    put16(out, format);
    put16(out, 1);  // mono
    put32(out, static_cast<std::uint32_t>(signal.sample_rate));
    put32(out, static_cast<std::uint32_t>(signal.sample_rate) * bytes_per);
    put16(out, bytes_per);
    put16(out, static_cast<std::uint16_t>(bytes_per * 8));
    if (fact) {
        put_tag(out, "fact");
        put32(out, 4);
        put32(out, n);
    }
    put_tag(out, "data");
    put32(out, data_size);

    if (encoding == WavEncoding::pcm16) {
        for (double v : signal.samples) {
            const double clamped = std::clamp(v, -1.0, 1.0);
            const long q = std::lround(clamped * 32768.0);
            put16(out, static_cast<std::uint16_t>(std::clamp(q, -32768L, 32767L)));
        }
    } else {
        for (double v : signal.samples) {
            const float f = static_cast<float>(v);
            std::uint32_t u;
            std::memcpy(&u, &f, 4);
            put32(out, u);
        }
    }

    std::ofstream file(path, std::ios::binary);
    if (!file) throw DataError("wav: cannot open for writing: " + path);
    file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!file) throw DataError("wav: write failed: " + path);
}

}  // namespace coldwave
