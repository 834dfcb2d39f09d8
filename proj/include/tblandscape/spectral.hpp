#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tblandscape/operators.hpp"

namespace tbl {

struct Eigenpair {
    double mu = 0.0;
    /// Unit Euclidean norm; the entry of largest magnitude is positive.
    std::vector<double> phi;
    /// ||H phi - mu phi||_2
    double residual = 0.0;
    /// 1-based position in the ascending spectrum.
    std::size_t ordinal = 0;
};

/// Which eigenpairs to compute.
class Selection {
public:
    enum class Kind { Lowest, Highest, Ordinals };

    static Selection lowest(std::size_t k) { return Selection(Kind::Lowest, k, {}); }
    static Selection highest(std::size_t k) { return Selection(Kind::Highest, k, {}); }
    static Selection range(std::size_t first, std::size_t last);
    static Selection ordinals(std::vector<std::size_t> ords);

    Kind kind() const noexcept { return kind_; }
    std::size_t count() const noexcept { return count_; }
    const std::vector<std::size_t>& list() const noexcept { return ordinals_; }

    /// Concrete ascending ordinals for a spectrum of size n.
    std::vector<std::size_t> resolve(std::size_t n) const;

private:
    Selection(Kind kind, std::size_t count, std::vector<std::size_t> ords)
        : kind_(kind), count_(count), ordinals_(std::move(ords)) {}

    Kind kind_;
    std::size_t count_;
    std::vector<std::size_t> ordinals_;
};

struct EigenOptions {
    double tol = 1e-8;
    /// Lattices up to this many sites use the dense symmetric eigensolver.
    std::size_t dense_limit = 2000;
    /// Deepest ordinal (from either end) the iterative path will reach.
    std::size_t iterative_depth = 400;
    /// Inverse-iteration sweeps applied to each returned vector. They resolve
    /// exponentially small tail entries far below the solver's rounding floor.
    int refine_steps = 6;
};

/// Eigenpairs sorted ascending by eigenvalue.
std::vector<Eigenpair> eigenpairs(const Hamiltonian& h, const Selection& sel, const EigenOptions& options = {});

/// Inverse iteration at the pair's own eigenvalue with an unpivoted LDL^T
/// factorization, whose componentwise-small rounding errors keep tiny entries
/// accurate in relative terms. The refined vector replaces the input only if it
/// stays aligned with it; returns whether it did.
bool refine_eigenpair(const Hamiltonian& h, Eigenpair& pair, int steps = 6);

/// Full ascending spectrum from the dense eigensolver.
std::vector<double> full_spectrum(const Hamiltonian& h);

/// Number of eigenvalues of the sparse symmetric matrix `a` strictly below `shift`,
/// by Sylvester's law of inertia applied to an LDL^T factorization of a - shift I.
std::size_t count_eigenvalues_below(const Eigen::SparseMatrix<double>& a, double shift);

/// phi_n -> (-1)^{s(n)} phi_n with s(n) the coordinate sum.
std::vector<double> dual_transform(const Lattice& lat, std::span<const double> phi);

/// Eigenpair of the dual operator paired with `pair`: (4d + V_max - mu, dual_transform(phi)).
Eigenpair dual_pair(const Hamiltonian& h, const Eigenpair& pair);

struct DualityReport {
    /// ||H~ phi~ - (4d + V_max - mu) phi~||_2 per input pair.
    std::vector<double> residuals;
    double max_residual = 0.0;
    double tol = 0.0;
    bool passed = true;
};

DualityReport check_duality(const Hamiltonian& h, std::span<const Eigenpair> pairs, double tol);

struct MirrorReport {
    /// max_k |sort(eig H~)_k - (4d + V_max - sort(eig H)_{N+1-k})|
    double max_deviation = 0.0;
    /// Smallest and largest eigenvalue of H.
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
};

/// Dense full-spectrum comparison of H and its dual (N <= dense limit).
MirrorReport spectrum_mirror(const Hamiltonian& h);

}  // namespace tbl
