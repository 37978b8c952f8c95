#include "coldwave/denoiser.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "coldwave/errors.hpp"
#include "coldwave/kernels.hpp"
#include "coldwave/rng.hpp"

namespace coldwave {

namespace {

constexpr char kMagic[8] = {'C', 'W', 'D', 'N', '0', '0', '0', '1'};

void tanh_inplace(std::span<double> x) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for if (n >= 4096)
    for (std::ptrdiff_t i = 0; i < n; ++i) x[i] = std::tanh(x[i]);
}

// out[o] = sum_f m[f * cols + o]; serial over frames per column.
void colsum(std::span<const double> m, std::size_t frames, std::size_t cols,
            std::span<double> out) {
    for (std::size_t o = 0; o < cols; ++o) out[o] = 0.0;
    for (std::size_t f = 0; f < frames; ++f) {
        const double* row = m.data() + f * cols;
        for (std::size_t o = 0; o < cols; ++o) out[o] += row[o];
    }
}

void write_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

void write_u64(std::ostream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

void write_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    write_u64(out, bits);
}

std::uint32_t read_u32(std::istream& in, const char* field) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw DataError(std::string("checkpoint: truncated while reading ") + field);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint64_t read_u64(std::istream& in, const char* field) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw DataError(std::string("checkpoint: truncated while reading ") + field);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

double read_f64(std::istream& in, const char* field) {
    std::uint64_t bits = read_u64(in, field);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace

std::vector<double> step_embedding(int t, int dim) {
    if (dim < 2 || dim % 2 != 0)
        throw ConfigError("step_embedding: dimension must be even and >= 2, got " +
                          std::to_string(dim));
    if (t < 0) throw ConfigError("step_embedding: severity must be >= 0");
    std::vector<double> out(static_cast<std::size_t>(dim));
    const double td = static_cast<double>(t);
    for (int i = 0; i < dim / 2; ++i) {
        const double omega = std::pow(10000.0, -2.0 * static_cast<double>(i) / dim);
        out[static_cast<std::size_t>(2 * i)] = std::sin(td * omega);
        out[static_cast<std::size_t>(2 * i + 1)] = std::cos(td * omega);
    }
    return out;
}

DenoiserNet::Layout DenoiserNet::emb_layout() const {
    const auto h = static_cast<std::size_t>(cfg_.hidden);
    const auto e = static_cast<std::size_t>(cfg_.embed);
    return {0, h * e, h, e};
}

DenoiserNet::Layout DenoiserNet::hidden_layout(int layer) const {
    const auto h = static_cast<std::size_t>(cfg_.hidden);
    const auto f = static_cast<std::size_t>(cfg_.frame);
    const auto e = static_cast<std::size_t>(cfg_.embed);
    std::size_t off = h * e + h;  // past embedding projection
    std::size_t in = f;
    for (int l = 0; l < layer; ++l) {
        off += h * in + h;
        in = h;
    }
    return {off, off + h * in, h, in};
}

DenoiserNet::Layout DenoiserNet::out_layout() const {
    const auto h = static_cast<std::size_t>(cfg_.hidden);
    const auto f = static_cast<std::size_t>(cfg_.frame);
    const Layout last = hidden_layout(cfg_.layers - 1);
    const std::size_t off = last.offset_b + last.rows;
    return {off, off + f * h, f, h};
}

DenoiserNet::DenoiserNet(const DenoiserConfig& config, std::uint64_t init_seed) : cfg_(config) {
    if (cfg_.frame < 1) throw ConfigError("denoiser: frame length must be >= 1");
    if (cfg_.hidden < 1) throw ConfigError("denoiser: hidden width must be >= 1");
    if (cfg_.layers < 1) throw ConfigError("denoiser: layer count must be >= 1");
    if (cfg_.embed < 2 || cfg_.embed % 2 != 0)
        throw ConfigError("denoiser: embedding dimension must be even and >= 2");

    const Layout out = out_layout();
    params_.assign(out.offset_b + out.rows, 0.0);

    Rng rng(init_seed);
    auto glorot_fill = [&](const Layout& l) {
        const double bound = std::sqrt(6.0 / static_cast<double>(l.rows + l.cols));
        double* w = params_.data() + l.offset_w;
        for (std::size_t i = 0; i < l.rows * l.cols; ++i) w[i] = rng.uniform(-bound, bound);
        // biases stay zero
    };
    glorot_fill(emb_layout());
    for (int l = 0; l < cfg_.layers; ++l) glorot_fill(hidden_layout(l));
    glorot_fill(out_layout());
}

DenoiserNet::Forward DenoiserNet::forward(const Signal& x_t, int t) const {
    Forward fwd;
    fwd.t = t;
    fwd.length = x_t.size();
    if (!kernels::all_finite(x_t.view()))
        throw NumericError("denoiser: non-finite input signal");
    if (fwd.length == 0) {
        fwd.output = Signal({}, x_t.sample_rate);
        return fwd;
    }

    const auto F = static_cast<std::size_t>(cfg_.frame);
    const auto H = static_cast<std::size_t>(cfg_.hidden);
    fwd.frames = (fwd.length + F - 1) / F;

    fwd.input.assign(fwd.frames * F, 0.0);
    std::memcpy(fwd.input.data(), x_t.data(), fwd.length * sizeof(double));

    fwd.embedding = step_embedding(t, cfg_.embed);
    // Embedding projection, shared by every frame of the call.
    const Layout emb = emb_layout();
    std::vector<double> proj(H);
    kernels::gemm_nt(fwd.embedding, mat(emb), proj, 1, static_cast<std::size_t>(cfg_.embed), H);
    for (std::size_t o = 0; o < H; ++o) proj[o] += bias(emb)[o];

    fwd.hidden.resize(static_cast<std::size_t>(cfg_.layers));
    std::span<const double> prev = fwd.input;
    std::size_t prev_cols = F;
    for (int l = 0; l < cfg_.layers; ++l) {
        const Layout lay = hidden_layout(l);
        auto& act = fwd.hidden[static_cast<std::size_t>(l)];
        act.assign(fwd.frames * H, 0.0);
        kernels::gemm_nt(prev, mat(lay), act, fwd.frames, prev_cols, H);
        const std::span<const double> b = bias(lay);
        for (std::size_t f = 0; f < fwd.frames; ++f) {
            double* row = act.data() + f * H;
            if (l == 0) {
                for (std::size_t o = 0; o < H; ++o) row[o] += b[o] + proj[o];
            } else {
                for (std::size_t o = 0; o < H; ++o) row[o] += b[o];
            }
        }
        tanh_inplace(act);
        prev = act;
        prev_cols = H;
    }

    const Layout out = out_layout();
    fwd.out_act.assign(fwd.frames * F, 0.0);
    kernels::gemm_nt(prev, mat(out), fwd.out_act, fwd.frames, H, F);
    const std::span<const double> ob = bias(out);
    for (std::size_t f = 0; f < fwd.frames; ++f) {
        double* row = fwd.out_act.data() + f * F;
        for (std::size_t j = 0; j < F; ++j) row[j] += ob[j];
    }
    tanh_inplace(fwd.out_act);

    fwd.output = Signal(std::vector<double>(fwd.out_act.begin(),
                                            fwd.out_act.begin() + static_cast<std::ptrdiff_t>(fwd.length)),
                        x_t.sample_rate);
    if (!kernels::all_finite(fwd.output.view()))
        throw NumericError("denoiser: non-finite activations in forward pass");
    return fwd;
}

Signal DenoiserNet::restore(const Signal& x_t, int t) const { return forward(x_t, t).output; }

std::vector<double> DenoiserNet::backward(const Forward& fwd, std::span<const double> grad_out,
                                          std::vector<double>* grad_input) const {
    if (grad_out.size() != fwd.length)
        throw DataError("denoiser backward: grad_out length " + std::to_string(grad_out.size()) +
                        " does not match output length " + std::to_string(fwd.length));
    std::vector<double> grads(params_.size(), 0.0);
    if (fwd.length == 0) {
        if (grad_input) grad_input->clear();
        return grads;
    }

    const auto F = static_cast<std::size_t>(cfg_.frame);
    const auto H = static_cast<std::size_t>(cfg_.hidden);
    const std::size_t n = fwd.frames;

    // d/d(pre-activation) at the output layer; padded tail gets zero grads.
    std::vector<double> delta(n * F, 0.0);
    for (std::size_t i = 0; i < fwd.length; ++i) {
        const double y = fwd.out_act[i];
        delta[i] = grad_out[i] * (1.0 - y * y);
    }

    auto gmat = [&](const Layout& l) {
        return std::span<double>(grads).subspan(l.offset_w, l.rows * l.cols);
    };
    auto gbias = [&](const Layout& l) { return std::span<double>(grads).subspan(l.offset_b, l.rows); };

    const Layout out = out_layout();
    const auto& last_hidden = fwd.hidden.back();
    kernels::gemm_tn(delta, last_hidden, gmat(out), n, F, H);
    colsum(delta, n, F, gbias(out));

    // Pull the gradient back through the hidden stack.
    std::vector<double> grad_h(n * H);
    kernels::gemm_nn(delta, mat(out), grad_h, n, F, H);

    for (int l = cfg_.layers - 1; l >= 1; --l) {
        const auto& act = fwd.hidden[static_cast<std::size_t>(l)];
        std::vector<double> d(n * H);
        for (std::size_t i = 0; i < n * H; ++i) {
            const double y = act[i];
            d[i] = grad_h[i] * (1.0 - y * y);
        }
        const Layout lay = hidden_layout(l);
        kernels::gemm_tn(d, fwd.hidden[static_cast<std::size_t>(l - 1)], gmat(lay), n, H, H);
        colsum(d, n, H, gbias(lay));
        kernels::gemm_nn(d, mat(lay), grad_h, n, H, H);
    }

    // First layer: weights see the input frames, and the bias-column sums
    // also drive the embedding projection (injected additively).
    const auto& act0 = fwd.hidden.front();
    std::vector<double> d0(n * H);
    for (std::size_t i = 0; i < n * H; ++i) {
        const double y = act0[i];
        d0[i] = grad_h[i] * (1.0 - y * y);
    }
    const Layout lay0 = hidden_layout(0);
    kernels::gemm_tn(d0, fwd.input, gmat(lay0), n, H, F);
    colsum(d0, n, H, gbias(lay0));

    const Layout emb = emb_layout();
    const std::span<const double> pre_sum = gbias(lay0);
    kernels::gemm_tn(pre_sum, fwd.embedding, gmat(emb), 1, H, static_cast<std::size_t>(cfg_.embed));
    std::span<double> emb_b = gbias(emb);
    for (std::size_t o = 0; o < H; ++o) emb_b[o] = pre_sum[o];

    if (grad_input) {
        std::vector<double> gx(n * F);
        kernels::gemm_nn(d0, mat(lay0), gx, n, H, F);
        grad_input->assign(gx.begin(), gx.begin() + static_cast<std::ptrdiff_t>(fwd.length));
    }

    if (!kernels::all_finite(grads))
        throw NumericError("denoiser backward: non-finite gradients");
    return grads;
}

std::vector<double> DenoiserNet::forward_backward(const Signal& x_t, int t,
                                                  std::span<const double> grad_out,
                                                  std::vector<double>* grad_input) const {
    return backward(forward(x_t, t), grad_out, grad_input);
}

void DenoiserNet::sgd_update(std::span<const double> grad, double learning_rate) {
    if (learning_rate < 0.0) throw ConfigError("sgd_update: learning rate must be >= 0");
    if (grad.size() != params_.size())
        throw ConfigError("sgd_update: gradient size " + std::to_string(grad.size()) +
                          " does not match parameter count " + std::to_string(params_.size()));
    if (!kernels::all_finite(grad))
        throw NumericError("sgd_update: non-finite gradient, update rejected");
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(params_.size());
#pragma omp parallel for if (n >= 4096)
    for (std::ptrdiff_t i = 0; i < n; ++i) params_[i] -= learning_rate * grad[i];
}

void DenoiserNet::save(std::ostream& out, int schedule_steps, double schedule_s,
                       int sample_rate) const {
    out.write(kMagic, 8);
    write_u32(out, static_cast<std::uint32_t>(cfg_.frame));
    write_u32(out, static_cast<std::uint32_t>(cfg_.hidden));
    write_u32(out, static_cast<std::uint32_t>(cfg_.layers));
    write_u32(out, static_cast<std::uint32_t>(cfg_.embed));
    write_u32(out, static_cast<std::uint32_t>(schedule_steps));
    write_f64(out, schedule_s);
    write_u32(out, static_cast<std::uint32_t>(sample_rate));
    write_u64(out, params_.size());
    for (double p : params_) write_f64(out, p);
    if (!out) throw DataError("checkpoint: write failed");
}

LoadedDenoiser DenoiserNet::load(std::istream& in) {
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0)
        throw DataError("checkpoint: bad magic field (not a denoiser checkpoint)");
    DenoiserConfig cfg;
    cfg.frame = static_cast<int>(read_u32(in, "frame"));
    cfg.hidden = static_cast<int>(read_u32(in, "hidden"));
    cfg.layers = static_cast<int>(read_u32(in, "layers"));
    cfg.embed = static_cast<int>(read_u32(in, "embed"));
    const int schedule_steps = static_cast<int>(read_u32(in, "schedule_steps"));
    const double schedule_s = read_f64(in, "schedule_s");
    const int sample_rate = static_cast<int>(read_u32(in, "sample_rate"));
    const std::uint64_t count = read_u64(in, "param_count");

    DenoiserNet net(cfg, 0);
    if (count != net.params_.size())
        throw DataError("checkpoint: param_count field " + std::to_string(count) +
                        " does not match architecture (" + std::to_string(net.params_.size()) + ")");
    for (auto& p : net.params_) p = read_f64(in, "params");
    return LoadedDenoiser{std::move(net), schedule_steps, schedule_s, sample_rate};
}

void DenoiserNet::save_file(const std::string& path, int schedule_steps, double schedule_s,
                            int sample_rate) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("checkpoint: cannot open for writing: " + path);
    save(out, schedule_steps, schedule_s, sample_rate);
}

LoadedDenoiser DenoiserNet::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("checkpoint: cannot open: " + path);
    return load(in);
}

}  // namespace coldwave
