#include "tblandscape/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tbl::kernels {

namespace {

inline double stencil_row(const Lattice& lat, std::span<const double> diag,
                          std::span<const double> x, std::size_t n) {
    const int d = lat.dim();
    double acc = (2.0 * d + diag[n]) * x[n];
    for (int i = 0; i < d; ++i) {
        const std::size_t lo = lat.step(n, i, -1);
        const std::size_t hi = lat.step(n, i, +1);
        if (lo != kNoSite) acc -= x[lo];
        if (hi != kNoSite) acc -= x[hi];
    }
    return acc;
}

void check_stencil_sizes(const Lattice& lat, std::span<const double> diag,
                         std::span<const double> x, std::span<double> y) {
    require_size(diag.size(), lat.size(), "potential");
    require_size(x.size(), lat.size(), "input vector");
    require_size(y.size(), lat.size(), "output vector");
}

}  // namespace

void stencil_apply_serial(const Lattice& lat, std::span<const double> diag,
                          std::span<const double> x, std::span<double> y) {
    check_stencil_sizes(lat, diag, x, y);
    for (std::size_t n = 0; n < lat.size(); ++n) y[n] = stencil_row(lat, diag, x, n);
}

void stencil_apply(const Lattice& lat, std::span<const double> diag, std::span<const double> x,
                   std::span<double> y) {
    check_stencil_sizes(lat, diag, x, y);
    const auto count = static_cast<std::ptrdiff_t>(lat.size());
#pragma omp parallel for schedule(static) if (count > 4096)
    for (std::ptrdiff_t n = 0; n < count; ++n) {
        y[static_cast<std::size_t>(n)] = stencil_row(lat, diag, x, static_cast<std::size_t>(n));
    }
}

double dot_serial(std::span<const double> a, std::span<const double> b) {
    require_size(b.size(), a.size(), "dot operand");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
    require_size(b.size(), a.size(), "dot operand");
    const std::size_t n = a.size();
    const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
    if (blocks <= 1) return dot_serial(a, b);
    std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t blk = 0; blk < static_cast<std::ptrdiff_t>(blocks); ++blk) {
        const std::size_t lo = static_cast<std::size_t>(blk) * kReductionBlock;
        const std::size_t hi = std::min(n, lo + kReductionBlock);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
        partial[static_cast<std::size_t>(blk)] = s;
    }
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
}

void axpy_serial(double alpha, std::span<const double> x, std::span<double> y) {
    require_size(y.size(), x.size(), "axpy operand");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    require_size(y.size(), x.size(), "axpy operand");
    const auto count = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) if (count > 4096)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        y[static_cast<std::size_t>(i)] += alpha * x[static_cast<std::size_t>(i)];
    }
}

void xpby(std::span<const double> r, double beta, std::span<double> p) {
    require_size(p.size(), r.size(), "xpby operand");
    const auto count = static_cast<std::ptrdiff_t>(r.size());
#pragma omp parallel for schedule(static) if (count > 4096)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto k = static_cast<std::size_t>(i);
        p[k] = r[k] + beta * p[k];
    }
}

double norm_inf(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace tbl::kernels
