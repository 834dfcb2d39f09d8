#include <doctest.h>

#include <random>

#include "support.hpp"
#include "tblandscape/kernels.hpp"
#include "tblandscape/operators.hpp"

using namespace tbl;

namespace {
Hamiltonian make(int d, int k, Boundary bc, std::vector<double> v, double vmax) {
    return Hamiltonian(Potential(Lattice(d, k, bc), std::move(v), vmax));
}
}  // namespace

TEST_CASE("potential validation") {
    const Lattice torus(1, 4, Boundary::Periodic);
    CHECK_THROWS_AS(Potential(torus, {0, 0, 0, 0}, 1.0), Error);
    CHECK_THROWS_AS(Potential(torus, {0, 6, 0, 0}, 5.0), Error);
    CHECK_THROWS_AS(Potential(torus, {0, -1, 0, 0}, 5.0), Error);
    CHECK_THROWS_AS(Potential(torus, {1, 1, 1}, 5.0), Error);
    CHECK_NOTHROW(Potential(Lattice(1, 4, Boundary::Dirichlet), {0, 0, 0, 0}, 1.0));
}

TEST_CASE("constant vector maps to the potential on a torus") {
    std::mt19937_64 rng(7);
    const auto v = testing::random_vector(64, rng, 0.0, 5.0);
    const Hamiltonian h = make(2, 8, Boundary::Periodic, v, 5.0);
    const std::vector<double> ones(64, 1.0);
    CHECK(testing::max_abs_diff(h.apply(ones), v) < 1e-14);
}

TEST_CASE("small matrices") {
    const Eigen::MatrixXd p = make(1, 3, Boundary::Periodic, {1, 0, 0}, 1.0).dense();
    Eigen::Matrix3d ep;
    ep << 3, -1, -1, -1, 2, -1, -1, -1, 2;
    CHECK(p == ep);
    const Eigen::MatrixXd q = make(1, 3, Boundary::Dirichlet, {0, 0, 0}, 1.0).dense();
    Eigen::Matrix3d eq;
    eq << 2, -1, 0, -1, 2, -1, 0, -1, 2;
    CHECK(q == eq);
}

TEST_CASE("matrix-free apply agrees with the assembled oracle") {
    std::mt19937_64 rng(11);
    for (auto bc : {Boundary::Periodic, Boundary::Dirichlet}) {
        for (int d : {1, 2, 3}) {
            const Lattice lat(d, d == 3 ? 4 : 7, bc);
            const auto v = testing::random_vector(lat.size(), rng, 0.0, 3.0);
            const Hamiltonian h(Potential(lat, v, 3.0));
            const Eigen::MatrixXd a = testing::dense_oracle(lat, v);
            CHECK((a - h.dense()).norm() == 0.0);
            CHECK((a - Eigen::MatrixXd(h.sparse())).norm() == 0.0);
            const auto x = testing::random_vector(lat.size(), rng);
            const Eigen::VectorXd ref = a * Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
            const auto y = h.apply(x);
            std::vector<double> ys(x.size());
            h.apply_serial(x, ys);
            CHECK(testing::max_abs_diff(y, std::vector<double>(ref.data(), ref.data() + ref.size())) < 1e-13);
            CHECK(y == ys);
        }
    }
}

TEST_CASE("operator is symmetric") {
    std::mt19937_64 rng(3);
    const Lattice lat(2, 9, Boundary::Dirichlet);
    const Hamiltonian h(Potential(lat, testing::random_vector(lat.size(), rng, 0.0, 2.0), 2.0));
    for (int t = 0; t < 10; ++t) {
        const auto x = testing::random_vector(lat.size(), rng);
        const auto y = testing::random_vector(lat.size(), rng);
        const double a = kernels::dot_serial(y, h.apply(x));
        const double b = kernels::dot_serial(x, h.apply(y));
        CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("dual operator") {
    const Hamiltonian h = make(1, 4, Boundary::Periodic, {0, 5, 0, 5}, 5.0);
    const Hamiltonian dual = dual_operator(h);
    CHECK(dual.is_dual());
    CHECK(std::vector<double>(dual.onsite().begin(), dual.onsite().end()) == std::vector<double>{5, 0, 5, 0});
    CHECK_THROWS_AS(dual_operator(dual), Error);

    const Hamiltonian half = make(1, 4, Boundary::Periodic, {2.5, 2.5, 2.5, 2.5}, 5.0);
    CHECK(dual_operator(half).dense() == half.dense());

    try {
        dual_operator(make(1, 5, Boundary::Periodic, {1, 1, 1, 1, 1}, 1.0));
        FAIL("expected OddPeriodicDual");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OddPeriodicDual);
    }
    CHECK_NOTHROW(dual_operator(make(1, 5, Boundary::Dirichlet, {1, 0, 1, 0, 1}, 1.0)));
}

TEST_CASE("complement is an involution") {
    std::mt19937_64 rng(5);
    const Lattice lat(2, 6, Boundary::Periodic);
    const Potential p(lat, testing::random_vector(lat.size(), rng, 0.0, 4.0), 4.0);
    const Potential back = p.complement().complement();
    CHECK(back.v_max() == p.v_max());
    for (std::size_t n = 0; n < lat.size(); ++n) CHECK(std::abs(back[n] - p[n]) <= 1e-15 * p.v_max());
    const Potential ints(lat, std::vector<double>(lat.size(), 1.0), 4.0);
    CHECK(ints.complement().complement() == ints);
}

TEST_CASE("forward gradient") {
    const Lattice ring(1, 4, Boundary::Periodic);
    const auto g = gradient(ring, std::vector<double>{1, 2, 3, 4});
    CHECK(g(0, 0) == 1);
    CHECK(g(1, 0) == 1);
    CHECK(g(2, 0) == 1);
    CHECK(g(3, 0) == -3);
    const auto alt = gradient(ring, std::vector<double>{0, 1, 0, 1});
    for (std::size_t n = 0; n < 4; ++n) CHECK(alt(n, 0) == (n % 2 == 0 ? 1 : -1));
    const auto flat = gradient(Lattice(2, 5, Boundary::Periodic), std::vector<double>(25, 3.0));
    for (std::size_t n = 0; n < 25; ++n) CHECK((flat(n, 0) == 0 && flat(n, 1) == 0));
    const auto cube = gradient(Lattice(1, 3, Boundary::Dirichlet), std::vector<double>{1, 2, 3});
    CHECK(cube(2, 0) == -3);
}

TEST_CASE("anti-periodic ring") {
    const std::vector<double> zero(3, 0.0);
    CHECK(antiperiodic_apply_1d(zero, std::vector<double>{-1, 1, 3}) == std::vector<double>{0, 0, 4});
    CHECK(antiperiodic_apply_1d(zero, std::vector<double>{1, 1, 1}) == std::vector<double>{2, 0, 2});
    CHECK(antiperiodic_apply_1d(zero, zero) == zero);
}
