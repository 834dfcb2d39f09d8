#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tblandscape/operators.hpp"

namespace tbl {

/// Solution u of H u = 1 together with the effective potential W = 1/u.
struct LandscapeField {
    std::vector<double> u;
    std::vector<double> w_eff;
    /// max_n |(H u)_n - 1|
    double residual_inf = 0.0;
    /// 1/V_max on a torus, 1/(V_max + d) on a Dirichlet cube.
    double lower_bound = 0.0;
    bool is_dual = false;
    std::size_t iterations = 0;

    double min_u() const;
};

struct CgOptions {
    double tol = 1e-10;
    /// 0 selects 50 * sqrt(N).
    std::size_t max_iterations = 0;
    bool parallel = true;
};

struct CgReport {
    std::size_t iterations = 0;
    double residual_inf = 0.0;
    bool converged = false;
};

/// Conjugate gradients for H x = b with a max-norm stopping rule on the true
/// residual. `x` holds the starting point on entry.
CgReport conjugate_gradient(const Hamiltonian& h, std::span<const double> b, std::span<double> x,
                            const CgOptions& options = {});

/// Solves H u = 1. Throws SolverDiverged if the iteration cap is reached.
LandscapeField solve_landscape(const Hamiltonian& h, double tol = 1e-10,
                               std::optional<std::span<const double>> initial_guess = std::nullopt);

/// Landscape of the dual operator -Lap + (V_max - V).
LandscapeField dual_landscape(const Hamiltonian& h, double tol = 1e-10);

/// Theoretical positivity bound for the landscape of `h`.
double landscape_lower_bound(const Hamiltonian& h);

}  // namespace tbl
