#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "coldwave/restorer.hpp"
#include "coldwave/signal.hpp"

namespace coldwave {

/// Sinusoidal severity embedding: interleaved pairs
///   (sin(t * w_i), cos(t * w_i)),  w_i = 10000^(-2i/dim),  i = 0..dim/2-1.
/// dim must be even and >= 2.
std::vector<double> step_embedding(int t, int dim);

struct DenoiserConfig {
    int frame = 256;   // samples per non-overlapping frame (F)
    int hidden = 512;  // hidden width (H)
    int layers = 3;    // hidden layer count (L), first maps F -> H
    int embed = 128;   // embedding dimension (E), even
};

struct LoadedDenoiser;

/// Frame-wise fully connected denoiser with tanh activations throughout and
/// a severity embedding injected additively after the first affine map.
///
/// Signals are split into non-overlapping frames of `frame` samples (last
/// frame zero-padded); each frame passes through the same network; outputs
/// are concatenated and the padding truncated, so restore() is defined for
/// arbitrary-length input.
///
/// Parameters live in one flat vector, in this order (row-major matrices):
///   emb_w (H x E), emb_b (H),
///   w_1 (H x F), b_1 (H),
///   w_l (H x H), b_l (H)          for l = 2..L,
///   out_w (F x H), out_b (F).
class DenoiserNet : public Restorer {
public:
    /// Glorot-uniform weights (+-sqrt(6/(fan_in+fan_out))), zero biases,
    /// filled from the given seed in parameter order.
    DenoiserNet(const DenoiserConfig& config, std::uint64_t init_seed);

    const DenoiserConfig& config() const { return cfg_; }
    std::size_t param_count() const { return params_.size(); }
    std::span<double> params() { return params_; }
    std::span<const double> params() const { return params_; }

    /// Restorer contract; read-only and safe to call concurrently.
    Signal restore(const Signal& x_t, int t) const override;

    /// Forward pass that keeps per-frame activations for backward().
    struct Forward {
        Signal output;
        int t = 0;
        std::size_t length = 0;  // unpadded sample count
        std::size_t frames = 0;
        std::vector<double> input;       // frames x F, zero-padded
        std::vector<double> embedding;   // E
        std::vector<std::vector<double>> hidden;  // L matrices, frames x H
        std::vector<double> out_act;     // frames x F, post-tanh
    };
    Forward forward(const Signal& x_t, int t) const;

    /// Exact reverse-mode gradients of grad_out . output with respect to all
    /// parameters (flat, same layout as params()). grad_out has the signal's
    /// unpadded length. When grad_input is non-null it receives
    /// d(grad_out . output)/d(x_t). Throws NumericError on non-finite
    /// activations or gradients.
    std::vector<double> backward(const Forward& fwd, std::span<const double> grad_out,
                                 std::vector<double>* grad_input = nullptr) const;

    /// forward() + backward() in one call.
    std::vector<double> forward_backward(const Signal& x_t, int t,
                                         std::span<const double> grad_out,
                                         std::vector<double>* grad_input = nullptr) const;

    /// theta <- theta - lr * grad. Rejects non-finite gradients and lr <= 0
    /// without touching the parameters.
    void sgd_update(std::span<const double> grad, double learning_rate);

    // Checkpoint container; also records the schedule (T, s) and sample rate
    // the model was trained with. Layout documented in the README.
    void save(std::ostream& out, int schedule_steps, double schedule_s, int sample_rate) const;
    static LoadedDenoiser load(std::istream& in);

    void save_file(const std::string& path, int schedule_steps, double schedule_s,
                   int sample_rate) const;
    static LoadedDenoiser load_file(const std::string& path);

private:
    struct Layout {
        std::size_t offset_w, offset_b;
        std::size_t rows, cols;
    };
    Layout emb_layout() const;
    Layout hidden_layout(int layer) const;  // layer in [0, L)
    Layout out_layout() const;
    std::span<const double> mat(const Layout& l) const {
        return std::span<const double>(params_).subspan(l.offset_w, l.rows * l.cols);
    }
    std::span<const double> bias(const Layout& l) const {
        return std::span<const double>(params_).subspan(l.offset_b, l.rows);
    }

    DenoiserConfig cfg_;
    std::vector<double> params_;
};

struct LoadedDenoiser {
    DenoiserNet net;
    int schedule_steps;
    double schedule_s;
    int sample_rate;
};

}  // namespace coldwave
