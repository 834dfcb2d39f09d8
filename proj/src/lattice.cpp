#include "tblandscape/lattice.hpp"

#include <string>

namespace tbl {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::NotApplicable: return "NotApplicable";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::OddPeriodicDual: return "OddPeriodicDual";
        case ErrorCode::AlreadyDual: return "AlreadyDual";
        case ErrorCode::InvalidPotential: return "InvalidPotential";
        case ErrorCode::InvalidGeometry: return "InvalidGeometry";
        case ErrorCode::SolverDiverged: return "SolverDiverged";
        case ErrorCode::EigenSolverFailed: return "EigenSolverFailed";
        case ErrorCode::EmptyWells: return "EmptyWells";
        case ErrorCode::TooLargeForOracle: return "TooLargeForOracle";
        case ErrorCode::HypothesisNotMet: return "HypothesisNotMet";
        case ErrorCode::InvalidAlpha: return "InvalidAlpha";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

std::string_view to_string(Boundary bc) {
    return bc == Boundary::Periodic ? "periodic" : "dirichlet";
}

Boundary parse_boundary(std::string_view text) {
    if (text == "periodic") return Boundary::Periodic;
    if (text == "dirichlet") return Boundary::Dirichlet;
    throw Error(ErrorCode::InvalidConfig, "unknown boundary condition '" + std::string(text) + "'");
}

Lattice::Lattice(int dim, int side, Boundary bc) : dim_(dim), side_(side), bc_(bc), size_(1) {
    if (dim < 1) throw Error(ErrorCode::InvalidGeometry, "dimension must be >= 1");
    if (side < 3) throw Error(ErrorCode::InvalidGeometry, "side length must be >= 3");
    strides_.reserve(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        strides_.push_back(size_);
        size_ *= static_cast<std::size_t>(side);
    }
}

std::vector<int> Lattice::coords(std::size_t n) const {
    check_site(n);
    std::vector<int> c(static_cast<std::size_t>(dim_));
    for (int i = 0; i < dim_; ++i) c[static_cast<std::size_t>(i)] = coord(n, i);
    return c;
}

std::size_t Lattice::linear(std::span<const int> c) const {
    require_size(c.size(), static_cast<std::size_t>(dim_), "coordinates");
    std::size_t n = 0;
    for (int i = 0; i < dim_; ++i) {
        const int ci = c[static_cast<std::size_t>(i)];
        if (ci < 1 || ci > side_) {
            throw Error(ErrorCode::IndexOutOfRange,
                        "coordinate " + std::to_string(ci) + " outside {1.." + std::to_string(side_) + "}");
        }
        n += static_cast<std::size_t>(ci - 1) * strides_[static_cast<std::size_t>(i)];
    }
    return n;
}

std::vector<std::size_t> Lattice::neighbors(std::size_t n) const {
    check_site(n);
    std::vector<std::size_t> out;
    out.reserve(2 * static_cast<std::size_t>(dim_));
    for (int i = 0; i < dim_; ++i) {
        for (int dir : {-1, 1}) {
            const std::size_t m = step(n, i, dir);
            if (m != kNoSite) out.push_back(m);
        }
    }
    return out;
}

int Lattice::boundary_deficiency(std::size_t n) const {
    if (periodic()) throw Error(ErrorCode::NotApplicable, "boundary deficiency needs a Dirichlet cube");
    check_site(n);
    int k = 0;
    for (int i = 0; i < dim_; ++i) {
        const int c = coord(n, i);
        k += (c == 1) + (c == side_);
    }
    return k;
}

std::vector<std::size_t> Lattice::inner_boundary() const {
    if (periodic()) throw Error(ErrorCode::NotApplicable, "inner boundary needs a Dirichlet cube");
    std::vector<std::size_t> out;
    for (std::size_t n = 0; n < size_; ++n) {
        for (int i = 0; i < dim_; ++i) {
            const int c = coord(n, i);
            if (c == 1 || c == side_) {
                out.push_back(n);
                break;
            }
        }
    }
    return out;
}

}  // namespace tbl
