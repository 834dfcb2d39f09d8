#include <doctest.h>

#include <random>
#include <vector>

#include "support.hpp"
#include "tblandscape/kernels.hpp"

using namespace tbl;

TEST_CASE("stencil serial and parallel agree bitwise") {
    std::mt19937_64 rng(21);
    for (auto [dim, side] : {std::pair{1, 300}, std::pair{2, 37}, std::pair{3, 11}}) {
        for (auto bc : {Boundary::Periodic, Boundary::Dirichlet}) {
            const Lattice lat(dim, side, bc);
            const auto diag = testing::random_vector(lat.size(), rng, 0.0, 9.0);
            const auto x = testing::random_vector(lat.size(), rng);
            std::vector<double> a(lat.size()), b(lat.size());
            kernels::stencil_apply_serial(lat, diag, x, a);
            kernels::stencil_apply(lat, diag, x, b);
            CHECK(a == b);
        }
    }
}

TEST_CASE("stencil matches the dense oracle") {
    std::mt19937_64 rng(22);
    for (auto bc : {Boundary::Periodic, Boundary::Dirichlet}) {
        const Lattice lat(2, 6, bc);
        const auto v = testing::random_vector(lat.size(), rng, 0.0, 5.0);
        const auto x = testing::random_vector(lat.size(), rng);
        std::vector<double> y(lat.size());
        kernels::stencil_apply(lat, v, x, y);
        const Eigen::VectorXd ref =
            testing::dense_oracle(lat, v) * Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
        for (std::size_t n = 0; n < lat.size(); ++n) CHECK(y[n] == doctest::Approx(ref(static_cast<Eigen::Index>(n))).epsilon(1e-14));
    }
}

TEST_CASE("reductions and updates") {
    std::mt19937_64 rng(23);
    for (std::size_t n : {std::size_t{1}, std::size_t{4095}, std::size_t{4096}, std::size_t{50001}}) {
        const auto a = testing::random_vector(n, rng);
        const auto b = testing::random_vector(n, rng);
        const double s = kernels::dot_serial(a, b);
        const double p = kernels::dot(a, b);
        CHECK(p == doctest::Approx(s).epsilon(1e-13));
        CHECK(kernels::dot(a, b) == p);

        auto y1 = b, y2 = b;
        kernels::axpy_serial(0.75, a, y1);
        kernels::axpy(0.75, a, y2);
        CHECK(y1 == y2);

        auto q = b;
        kernels::xpby(a, 2.0, q);
        for (std::size_t i = 0; i < n; ++i) CHECK(q[i] == a[i] + 2.0 * b[i]);

        double m = 0.0;
        for (double x : a) m = std::max(m, std::abs(x));
        CHECK(kernels::norm_inf(a) == m);
    }
    CHECK(kernels::max_threads() >= 1);
}

TEST_CASE("blocked dot is exact on integers") {
    std::vector<double> a(10000), b(10000);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = static_cast<double>(i % 7);
        b[i] = static_cast<double>(i % 5) - 2.0;
    }
    double ref = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) ref += a[i] * b[i];
    CHECK(kernels::dot(a, b) == ref);
    CHECK(kernels::dot_serial(a, b) == ref);
}
