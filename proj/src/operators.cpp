#include "tblandscape/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tblandscape/kernels.hpp"

namespace tbl {

Potential::Potential(Lattice lattice, std::vector<double> values, double v_max)
    : lattice_(std::move(lattice)), values_(std::move(values)), v_max_(v_max) {
    require_size(values_.size(), lattice_.size(), "potential");
    if (!(v_max_ > 0.0) || !std::isfinite(v_max_)) {
        throw Error(ErrorCode::InvalidPotential, "V_max must be positive and finite");
    }
    bool nonzero = false;
    for (std::size_t n = 0; n < values_.size(); ++n) {
        const double v = values_[n];
        if (!(v >= 0.0 && v <= v_max_)) {
            throw Error(ErrorCode::InvalidPotential,
                        "v[" + std::to_string(n) + "] = " + std::to_string(v) + " outside [0, V_max]");
        }
        nonzero = nonzero || v > 0.0;
    }
    if (lattice_.periodic() && !nonzero) {
        throw Error(ErrorCode::InvalidPotential,
                    "periodic operator with identically zero potential is singular");
    }
}

Potential Potential::complement() const {
    std::vector<double> c(values_.size());
    std::transform(values_.begin(), values_.end(), c.begin(), [&](double v) { return v_max_ - v; });
    return Potential(lattice_, std::move(c), v_max_);
}

Hamiltonian::Hamiltonian(Potential potential, Form form)
    : potential_(std::move(potential)), form_(form) {
    const auto v = potential_.values();
    onsite_.assign(v.begin(), v.end());
    if (form_ == Form::Dual) {
        require_dual_admissible(lattice());
        // Validates the complemented potential, e.g. rejects an all-zero dual on a torus.
        const Potential dual = potential_.complement();
        onsite_.assign(dual.values().begin(), dual.values().end());
    }
}

void Hamiltonian::apply(std::span<const double> x, std::span<double> y) const {
    kernels::stencil_apply(lattice(), onsite_, x, y);
}

std::vector<double> Hamiltonian::apply(std::span<const double> x) const {
    std::vector<double> y(size());
    apply(x, y);
    return y;
}

void Hamiltonian::apply_serial(std::span<const double> x, std::span<double> y) const {
    kernels::stencil_apply_serial(lattice(), onsite_, x, y);
}

Eigen::SparseMatrix<double> Hamiltonian::sparse() const {
    const Lattice& lat = lattice();
    const int d = lat.dim();
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(size() * (2 * static_cast<std::size_t>(d) + 1));
    for (std::size_t n = 0; n < size(); ++n) {
        const auto row = static_cast<Eigen::Index>(n);
        entries.emplace_back(row, row, 2.0 * d + onsite_[n]);
        for (std::size_t m : lat.neighbors(n)) {
            entries.emplace_back(row, static_cast<Eigen::Index>(m), -1.0);
        }
    }
    const auto dim = static_cast<Eigen::Index>(size());
    Eigen::SparseMatrix<double> a(dim, dim);
    a.setFromTriplets(entries.begin(), entries.end());
    return a;
}

Eigen::MatrixXd Hamiltonian::dense() const { return Eigen::MatrixXd(sparse()); }

void require_dual_admissible(const Lattice& lat) {
    if (lat.periodic() && lat.side() % 2 != 0) {
        throw Error(ErrorCode::OddPeriodicDual,
                    "side " + std::to_string(lat.side()) +
                        " is odd; the parity transform leaves the periodic space");
    }
}

Hamiltonian dual_operator(const Hamiltonian& h) {
    if (h.is_dual()) throw Error(ErrorCode::AlreadyDual, "operator is already in dual form");
    return Hamiltonian(h.potential(), Form::Dual);
}

double GradientField::dot_at(const GradientField& other, std::size_t n) const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += (*this)(n, i) * other(n, i);
    return s;
}

GradientField gradient(const Lattice& lat, std::span<const double> f) {
    require_size(f.size(), lat.size(), "gradient input");
    GradientField g(lat.size(), lat.dim());
    for (std::size_t n = 0; n < lat.size(); ++n) {
        for (int i = 0; i < lat.dim(); ++i) {
            const std::size_t m = lat.step(n, i, +1);
            const double ahead = m == kNoSite ? 0.0 : f[m];
            g(n, i) = ahead - f[n];
        }
    }
    return g;
}

std::vector<double> antiperiodic_apply_1d(std::span<const double> v, std::span<const double> phi) {
    const std::size_t k = phi.size();
    require_size(v.size(), k, "anti-periodic potential");
    if (k < 3) throw Error(ErrorCode::InvalidGeometry, "anti-periodic ring needs at least 3 sites");
    std::vector<double> out(k);
    for (std::size_t n = 0; n < k; ++n) {
        // Crossing the seam flips the sign of the hopping term.
        const double left = n == 0 ? -phi[k - 1] : phi[n - 1];
        const double right = n + 1 == k ? -phi[0] : phi[n + 1];
        out[n] = (2.0 + v[n]) * phi[n] - left - right;
    }
    return out;
}

}  // namespace tbl
