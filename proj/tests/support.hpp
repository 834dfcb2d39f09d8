#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

#include "tblandscape/lattice.hpp"

namespace testing {

inline std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

// Dense matrix of -Lap + diag(v) assembled straight from coordinates, without
// going through the library's stencil or neighbor lists.
inline Eigen::MatrixXd dense_oracle(const tbl::Lattice& lat, const std::vector<double>& v) {
    const auto n = static_cast<Eigen::Index>(lat.size());
    const int k = lat.side();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        a(i, i) = 2.0 * lat.dim() + v[static_cast<std::size_t>(i)];
        std::vector<int> c = lat.coords(static_cast<std::size_t>(i));
        for (int ax = 0; ax < lat.dim(); ++ax) {
            for (int dir : {-1, 1}) {
                std::vector<int> nb = c;
                nb[static_cast<std::size_t>(ax)] += dir;
                int& x = nb[static_cast<std::size_t>(ax)];
                if (x < 1 || x > k) {
                    if (!lat.periodic()) continue;
                    x = x < 1 ? k : 1;
                }
                a(i, static_cast<Eigen::Index>(lat.linear(nb))) -= 1.0;
            }
        }
    }
    return a;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace testing
