#include "coldwave/kernels.hpp"

#include <cassert>
#include <cmath>
#include <vector>

namespace coldwave::kernels {

namespace {

constexpr std::size_t kElemParThreshold = 4096;

// Fixed four-accumulator dot product. The summation order is part of the
// kernel contract: ref and parallel paths share it, so results match bitwise.
inline double dot_fixed(const double* a, const double* b, std::size_t k) {
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
    std::size_t l = 0;
    for (; l + 4 <= k; l += 4) {
        acc0 += a[l] * b[l];
        acc1 += a[l + 1] * b[l + 1];
        acc2 += a[l + 2] * b[l + 2];
        acc3 += a[l + 3] * b[l + 3];
    }
    double tail = 0.0;
    for (; l < k; ++l) tail += a[l] * b[l];
    return ((acc0 + acc1) + (acc2 + acc3)) + tail;
}

void lincomb2_impl(double a, std::span<const double> x,
                   double b, std::span<const double> y, std::span<double> out, bool par) {
    assert(x.size() == y.size() && x.size() == out.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for if (par && n >= static_cast<std::ptrdiff_t>(kElemParThreshold))
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[i] = a * x[i] + b * y[i];
    }
}

void lincomb3_impl(std::span<const double> x,
                   double a, std::span<const double> y,
                   double b, std::span<const double> z, std::span<double> out, bool par) {
    assert(x.size() == y.size() && x.size() == z.size() && x.size() == out.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for if (par && n >= static_cast<std::ptrdiff_t>(kElemParThreshold))
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[i] = x[i] + a * y[i] + b * z[i];
    }
}

// Blocked reduction skeleton: block partials in parallel, in-order combine.
template <typename BlockFn>
double blocked_reduce(std::size_t n, bool par, BlockFn block) {
    const std::size_t nblocks = (n + kReduceBlock - 1) / kReduceBlock;
    if (nblocks <= 1) return n == 0 ? 0.0 : block(0, n);
    std::vector<double> partial(nblocks);
    const std::ptrdiff_t nb = static_cast<std::ptrdiff_t>(nblocks);
#pragma omp parallel for if (par && nblocks > 1)
    for (std::ptrdiff_t ib = 0; ib < nb; ++ib) {
        const std::size_t lo = static_cast<std::size_t>(ib) * kReduceBlock;
        const std::size_t hi = std::min(lo + kReduceBlock, n);
        partial[ib] = block(lo, hi);
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

double sum_abs_diff_impl(std::span<const double> a, std::span<const double> b, bool par) {
    assert(a.size() == b.size());
    return blocked_reduce(a.size(), par, [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += std::fabs(a[i] - b[i]);
        return s;
    });
}

double sum_sq_impl(std::span<const double> x, bool par) {
    return blocked_reduce(x.size(), par, [&](std::size_t lo, std::size_t hi) {
        return dot_fixed(x.data() + lo, x.data() + lo, hi - lo);
    });
}

double dot_impl(std::span<const double> a, std::span<const double> b, bool par) {
    assert(a.size() == b.size());
    return blocked_reduce(a.size(), par, [&](std::size_t lo, std::size_t hi) {
        return dot_fixed(a.data() + lo, b.data() + lo, hi - lo);
    });
}

bool all_finite_impl(std::span<const double> x, bool par) {
    const std::size_t n = x.size();
    const std::size_t nblocks = (n + kReduceBlock - 1) / kReduceBlock;
    bool ok = true;
    const std::ptrdiff_t nb = static_cast<std::ptrdiff_t>(nblocks);
#pragma omp parallel for reduction(&& : ok) if (par && nblocks > 1)
    for (std::ptrdiff_t ib = 0; ib < nb; ++ib) {
        const std::size_t lo = static_cast<std::size_t>(ib) * kReduceBlock;
        const std::size_t hi = std::min(lo + kReduceBlock, n);
        bool block_ok = true;
        for (std::size_t i = lo; i < hi; ++i) block_ok = block_ok && std::isfinite(x[i]);
        ok = ok && block_ok;
    }
    return ok;
}

// C(n x m) = A(n x k) * B(m x k)^T. Parallel over columns of C; A stays hot
// in cache while each thread streams its share of B rows.
void gemm_nt_impl(std::span<const double> a, std::span<const double> b, std::span<double> c,
                  std::size_t n, std::size_t k, std::size_t m, bool accumulate, bool par) {
    assert(a.size() == n * k && b.size() == m * k && c.size() == n * m);
    const std::ptrdiff_t mm = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for if (par && m > 1)
    for (std::ptrdiff_t j = 0; j < mm; ++j) {
        const double* brow = b.data() + static_cast<std::size_t>(j) * k;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = dot_fixed(a.data() + i * k, brow, k);
            double& out = c[i * m + static_cast<std::size_t>(j)];
            out = accumulate ? out + v : v;
        }
    }
}

// C(n x m) = A(n x k) * B(k x m). Threads own row ranges of C; the shared
// dimension l runs serially in order for every output element.
void gemm_nn_impl(std::span<const double> a, std::span<const double> b, std::span<double> c,
                  std::size_t n, std::size_t k, std::size_t m, bool accumulate, bool par) {
    assert(a.size() == n * k && b.size() == k * m && c.size() == n * m);
    const std::ptrdiff_t nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for if (par && n > 1)
    for (std::ptrdiff_t i = 0; i < nn; ++i) {
        double* crow = c.data() + static_cast<std::size_t>(i) * m;
        if (!accumulate) {
            for (std::size_t j = 0; j < m; ++j) crow[j] = 0.0;
        }
        const double* arow = a.data() + static_cast<std::size_t>(i) * k;
        for (std::size_t l = 0; l < k; ++l) {
            const double ail = arow[l];
            const double* brow = b.data() + l * m;
            for (std::size_t j = 0; j < m; ++j) crow[j] += ail * brow[j];
        }
    }
}

// C(k x m) = A(n x k)^T * B(n x m). Parallel over rows of C (columns of A);
// the n-accumulation is serial in order.
void gemm_tn_impl(std::span<const double> a, std::span<const double> b, std::span<double> c,
                  std::size_t n, std::size_t k, std::size_t m, bool accumulate, bool par) {
    assert(a.size() == n * k && b.size() == n * m && c.size() == k * m);
    const std::ptrdiff_t kk = static_cast<std::ptrdiff_t>(k);
#pragma omp parallel for if (par && k > 1)
    for (std::ptrdiff_t o = 0; o < kk; ++o) {
        double* crow = c.data() + static_cast<std::size_t>(o) * m;
        if (!accumulate) {
            for (std::size_t j = 0; j < m; ++j) crow[j] = 0.0;
        }
        for (std::size_t f = 0; f < n; ++f) {
            const double afo = a[f * k + static_cast<std::size_t>(o)];
            const double* brow = b.data() + f * m;
            for (std::size_t j = 0; j < m; ++j) crow[j] += afo * brow[j];
        }
    }
}

}  // namespace

void lincomb2(double a, std::span<const double> x,
              double b, std::span<const double> y, std::span<double> out) {
    lincomb2_impl(a, x, b, y, out, true);
}
void lincomb3(std::span<const double> x, double a, std::span<const double> y,
              double b, std::span<const double> z, std::span<double> out) {
    lincomb3_impl(x, a, y, b, z, out, true);
}
double sum_abs_diff(std::span<const double> a, std::span<const double> b) {
    return sum_abs_diff_impl(a, b, true);
}
double sum_sq(std::span<const double> x) { return sum_sq_impl(x, true); }
double dot(std::span<const double> a, std::span<const double> b) { return dot_impl(a, b, true); }
bool all_finite(std::span<const double> x) { return all_finite_impl(x, true); }
void gemm_nt(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t n, std::size_t k, std::size_t m, bool accumulate) {
    gemm_nt_impl(a, b, c, n, k, m, accumulate, true);
}
void gemm_nn(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t n, std::size_t k, std::size_t m, bool accumulate) {
    gemm_nn_impl(a, b, c, n, k, m, accumulate, true);
}
void gemm_tn(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t n, std::size_t k, std::size_t m, bool accumulate) {
    gemm_tn_impl(a, b, c, n, k, m, accumulate, true);
}

namespace ref {
void lincomb2(double a, std::span<const double> x,
              double b, std::span<const double> y, std::span<double> out) {
    lincomb2_impl(a, x, b, y, out, false);
}
void lincomb3(std::span<const double> x, double a, std::span<const double> y,
              double b, std::span<const double> z, std::span<double> out) {
    lincomb3_impl(x, a, y, b, z, out, false);
}
double sum_abs_diff(std::span<const double> a, std::span<const double> b) {
    return sum_abs_diff_impl(a, b, false);
}
double sum_sq(std::span<const double> x) { return sum_sq_impl(x, false); }
double dot(std::span<const double> a, std::span<const double> b) { return dot_impl(a, b, false); }
bool all_finite(std::span<const double> x) { return all_finite_impl(x, false); }
void gemm_nt(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t n, std::size_t k, std::size_t m, bool accumulate) {
    gemm_nt_impl(a, b, c, n, k, m, accumulate, false);
}
void gemm_nn(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t n, std::size_t k, std::size_t m, bool accumulate) {
    gemm_nn_impl(a, b, c, n, k, m, accumulate, false);
}
void gemm_tn(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t n, std::size_t k, std::size_t m, bool accumulate) {
    gemm_tn_impl(a, b, c, n, k, m, accumulate, false);
}
}  // namespace ref

}  // namespace coldwave::kernels
