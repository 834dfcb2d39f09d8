#pragma once

// Data-parallel inner loops. Every kernel has a serial reference version
// (`*_serial`) kept for testing and benchmarking against the OpenMP version.

#include <cstddef>
#include <span>

#include "tblandscape/lattice.hpp"

namespace tbl::kernels {

/// Reduction block length. Parallel reductions sum fixed blocks and combine the
/// partial sums in ascending block order, so results do not depend on the thread count.
inline constexpr std::size_t kReductionBlock = 4096;

/// y = -Lap x + diag .* x, with zero extension outside a Dirichlet cube.
void stencil_apply_serial(const Lattice& lat, std::span<const double> diag,
                          std::span<const double> x, std::span<double> y);
void stencil_apply(const Lattice& lat, std::span<const double> diag, std::span<const double> x,
                   std::span<double> y);

double dot_serial(std::span<const double> a, std::span<const double> b);
double dot(std::span<const double> a, std::span<const double> b);

/// y += alpha * x
void axpy_serial(double alpha, std::span<const double> x, std::span<double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// p = r + beta * p
void xpby(std::span<const double> r, double beta, std::span<double> p);

double norm_inf(std::span<const double> a);

/// Number of worker threads the parallel kernels will use.
int max_threads();

}  // namespace tbl::kernels
