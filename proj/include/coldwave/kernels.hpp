#pragma once

#include <cstddef>
#include <span>

// Data-parallel inner loops used by the degradation operators, the denoiser
// network, and the metrics. The production versions are OpenMP-parallel; the
// kernels::ref namespace keeps a serial implementation of every kernel with
// identical arithmetic (same per-element expressions, same blocked reduction
// order), so parallel and serial results are bit-identical. Tests compare the
// two; tools/bench_kernels times them against each other.
//
// Reductions accumulate fixed-size blocks and combine the block sums in index
// order, which makes the result independent of thread count.

namespace coldwave::kernels {

inline constexpr std::size_t kReduceBlock = 4096;

// out = a*x + b*y, elementwise.
void lincomb2(double a, std::span<const double> x,
              double b, std::span<const double> y, std::span<double> out);

// out = x + a*y + b*z, elementwise.
void lincomb3(std::span<const double> x,
              double a, std::span<const double> y,
              double b, std::span<const double> z, std::span<double> out);

double sum_abs_diff(std::span<const double> a, std::span<const double> b);
double sum_sq(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);

bool all_finite(std::span<const double> x);

// Row-major dense matrix products for the frame-stacked denoiser math.
// Accumulation over the shared dimension is always a serial in-order loop.
//
//   gemm_nt: C(n x m) += A(n x k) * B(m x k)^T      [forward: frames x W^T]
//   gemm_nn: C(n x m) += A(n x k) * B(k x m)        [input grads: D x W]
//   gemm_tn: C(k x m) += A(n x k)^T * B(n x m)      [weight grads: D^T x X]
//
// When accumulate is false, C is overwritten.
void gemm_nt(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t n, std::size_t k, std::size_t m, bool accumulate = false);
void gemm_nn(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t n, std::size_t k, std::size_t m, bool accumulate = false);
void gemm_tn(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t n, std::size_t k, std::size_t m, bool accumulate = false);

namespace ref {
void lincomb2(double a, std::span<const double> x,
              double b, std::span<const double> y, std::span<double> out);
void lincomb3(std::span<const double> x,
              double a, std::span<const double> y,
              double b, std::span<const double> z, std::span<double> out);
double sum_abs_diff(std::span<const double> a, std::span<const double> b);
double sum_sq(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
bool all_finite(std::span<const double> x);
void gemm_nt(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t n, std::size_t k, std::size_t m, bool accumulate = false);
void gemm_nn(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t n, std::size_t k, std::size_t m, bool accumulate = false);
void gemm_tn(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t n, std::size_t k, std::size_t m, bool accumulate = false);
}  // namespace ref

}  // namespace coldwave::kernels
