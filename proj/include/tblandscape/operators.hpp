#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <span>
#include <vector>

#include "tblandscape/lattice.hpp"

namespace tbl {

/// Per-site potential v_n with its recorded strength V_max (0 <= v_n <= V_max).
class Potential {
public:
    Potential(Lattice lattice, std::vector<double> values, double v_max);

    const Lattice& lattice() const noexcept { return lattice_; }
    std::span<const double> values() const noexcept { return values_; }
    double v_max() const noexcept { return v_max_; }
    double operator[](std::size_t n) const { return values_[n]; }

    /// The potential V_max - v with the same V_max.
    Potential complement() const;

    friend bool operator==(const Potential&, const Potential&) = default;

private:
    Lattice lattice_;
    std::vector<double> values_;
    double v_max_;
};

enum class Form { Standard, Dual };

/// Tight-binding Hamiltonian H = -Lap + V on a lattice; in the Dual form the
/// on-site term is V_max - v_n.
class Hamiltonian {
public:
    explicit Hamiltonian(Potential potential, Form form = Form::Standard);

    const Lattice& lattice() const noexcept { return potential_.lattice(); }
    const Potential& potential() const noexcept { return potential_; }
    Form form() const noexcept { return form_; }
    bool is_dual() const noexcept { return form_ == Form::Dual; }
    std::size_t size() const noexcept { return lattice().size(); }
    double v_max() const noexcept { return potential_.v_max(); }

    /// On-site values actually applied (v_n, or V_max - v_n in the Dual form).
    std::span<const double> onsite() const noexcept { return onsite_; }

    /// 4d + V_max, the upper end of the spectral enclosure [0, 4d + V_max].
    double spectral_bound() const noexcept { return 4.0 * lattice().dim() + v_max(); }

    void apply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> apply(std::span<const double> x) const;
    /// Serial reference application.
    void apply_serial(std::span<const double> x, std::span<double> y) const;

    Eigen::SparseMatrix<double> sparse() const;
    Eigen::MatrixXd dense() const;

private:
    Potential potential_;
    Form form_;
    std::vector<double> onsite_;
};

/// The dual operator -Lap + (V_max - V). Periodic lattices require even K.
Hamiltonian dual_operator(const Hamiltonian& h);

/// Throws OddPeriodicDual when the parity transform leaves the periodic space.
void require_dual_admissible(const Lattice& lat);

/// Forward differences grad_i f_n = f_{n+e_i} - f_n, stored site-major (n * d + i).
/// Torus wrap under periodic boundaries; zero extension beyond a Dirichlet cube.
class GradientField {
public:
    GradientField(std::size_t sites, int dim) : dim_(dim), data_(sites * static_cast<std::size_t>(dim)) {}

    int dim() const noexcept { return dim_; }
    std::size_t sites() const noexcept { return data_.size() / static_cast<std::size_t>(dim_); }
    double& operator()(std::size_t n, int i) { return data_[n * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i)]; }
    double operator()(std::size_t n, int i) const { return data_[n * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i)]; }
    /// (grad g . grad f)(n)
    double dot_at(const GradientField& other, std::size_t n) const;

private:
    int dim_;
    std::vector<double> data_;
};

GradientField gradient(const Lattice& lat, std::span<const double> f);

/// -Lap^AP + v on a 1-d ring of K sites: like the periodic Laplacian but with +1
/// in the two corner entries. Demonstrates a failing maximum principle.
std::vector<double> antiperiodic_apply_1d(std::span<const double> v, std::span<const double> phi);

}  // namespace tbl
