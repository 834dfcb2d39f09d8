#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "tblandscape/error.hpp"

namespace tbl {

enum class Boundary { Periodic, Dirichlet };

std::string_view to_string(Boundary bc);
Boundary parse_boundary(std::string_view text);

/// Sentinel returned by Lattice::step when the neighbor lies outside a Dirichlet cube.
inline constexpr std::size_t kNoSite = static_cast<std::size_t>(-1);

/// d-dimensional cubic lattice of side K, either the torus Z^d / K Z^d or the
/// cube [1, K]^d with zero extension outside.
///
/// Coordinates are 1-based (each in {1, ..., K}); linear indices are 0-based,
/// row-major with coordinate 1 varying fastest.
class Lattice {
public:
    Lattice(int dim, int side, Boundary bc);

    int dim() const noexcept { return dim_; }
    int side() const noexcept { return side_; }
    Boundary boundary() const noexcept { return bc_; }
    bool periodic() const noexcept { return bc_ == Boundary::Periodic; }
    std::size_t size() const noexcept { return size_; }
    std::size_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }

    /// 1-based coordinate of site `n` along `axis` (0-based axis number).
    int coord(std::size_t n, int axis) const noexcept {
        return static_cast<int>((n / strides_[static_cast<std::size_t>(axis)]) %
                                static_cast<std::size_t>(side_)) + 1;
    }
    std::vector<int> coords(std::size_t n) const;
    std::size_t linear(std::span<const int> coords) const;

    /// Neighbor of `n` one step along `axis` in direction `dir` (-1 or +1).
    /// Wraps on the torus; returns kNoSite outside a Dirichlet cube.
    std::size_t step(std::size_t n, int axis, int dir) const noexcept {
        const std::size_t s = strides_[static_cast<std::size_t>(axis)];
        const int c = coord(n, axis);
        const auto k = static_cast<std::size_t>(side_);
        if (dir < 0) {
            if (c > 1) return n - s;
            return bc_ == Boundary::Periodic ? n + (k - 1) * s : kNoSite;
        }
        if (c < side_) return n + s;
        return bc_ == Boundary::Periodic ? n - (k - 1) * s : kNoSite;
    }

    /// In-lattice neighbors in the order -e1, +e1, -e2, +e2, ...
    std::vector<std::size_t> neighbors(std::size_t n) const;

    /// Number of out-of-cube neighbors k_n (Dirichlet only).
    int boundary_deficiency(std::size_t n) const;

    /// Sites with some coordinate equal to 1 or K, ascending (Dirichlet only).
    std::vector<std::size_t> inner_boundary() const;

    void check_site(std::size_t n) const {
        if (n >= size_) {
            throw Error(ErrorCode::IndexOutOfRange,
                        "site " + std::to_string(n) + " outside lattice of " + std::to_string(size_));
        }
    }

    friend bool operator==(const Lattice& a, const Lattice& b) {
        return a.dim_ == b.dim_ && a.side_ == b.side_ && a.bc_ == b.bc_;
    }

private:
    int dim_;
    int side_;
    Boundary bc_;
    std::size_t size_;
    std::vector<std::size_t> strides_;
};

}  // namespace tbl
