#include <doctest.h>

#include <algorithm>
#include <random>

#include "support.hpp"
#include "tblandscape/random_media.hpp"
#include "tblandscape/spectral.hpp"

using namespace tbl;

namespace {

double residual(const Hamiltonian& h, const Eigenpair& p) {
    const auto y = h.apply(p.phi);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += (y[i] - p.mu * p.phi[i]) * (y[i] - p.mu * p.phi[i]);
    return std::sqrt(s);
}

std::vector<double> oracle_spectrum(const Lattice& lat, const std::vector<double>& v) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(testing::dense_oracle(lat, v), Eigen::EigenvaluesOnly);
    return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

}  // namespace

TEST_CASE("circulant spectrum") {
    const Lattice lat(1, 4, Boundary::Periodic);
    const Hamiltonian h(Potential(lat, std::vector<double>(4, 1.5), 1.5));
    const auto s = full_spectrum(h);
    const std::vector<double> expected{1.5, 3.5, 3.5, 5.5};
    CHECK(testing::max_abs_diff(s, expected) < 1e-12);
}

TEST_CASE("constant potential ground state") {
    const Lattice lat(1, 40, Boundary::Periodic);
    const Hamiltonian h(Potential(lat, std::vector<double>(40, 3.0), 3.0));
    const auto pairs = eigenpairs(h, Selection::lowest(1));
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].mu == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(pairs[0].ordinal == 1);
    for (double x : pairs[0].phi) CHECK(x == doctest::Approx(1.0 / std::sqrt(40.0)).epsilon(1e-9));
}

TEST_CASE("selections") {
    CHECK(Selection::lowest(3).resolve(10) == std::vector<std::size_t>{1, 2, 3});
    CHECK(Selection::highest(2).resolve(10) == std::vector<std::size_t>{9, 10});
    CHECK(Selection::range(4, 6).resolve(10) == std::vector<std::size_t>{4, 5, 6});
    CHECK(Selection::ordinals({12, 1, 4}).resolve(300) == std::vector<std::size_t>{1, 4, 12});
    CHECK_THROWS_AS(Selection::ordinals({11}).resolve(10), Error);
    CHECK_THROWS_AS(Selection::ordinals({0}).resolve(10), Error);
    CHECK_THROWS_AS(Selection::lowest(11).resolve(10), Error);
}

TEST_CASE("dense path: residuals, orientation, bounds") {
    const Lattice lat(1, 300, Boundary::Dirichlet);
    const Hamiltonian h(generate({Bernoulli{0, 5, 0.7}, 1, std::nullopt}, lat));
    const auto pairs = eigenpairs(h, Selection::ordinals({1, 4, 12, 290}));
    REQUIRE(pairs.size() == 4);
    for (const auto& p : pairs) {
        CHECK(p.residual <= 1e-8);
        CHECK(residual(h, p) <= 1e-8);
        CHECK(p.mu >= -1e-9);
        CHECK(p.mu <= 9.0 + 1e-9);
        const auto big = std::max_element(p.phi.begin(), p.phi.end(),
                                          [](double a, double b) { return std::abs(a) < std::abs(b); });
        CHECK(*big > 0.0);
    }
    CHECK(pairs[0].ordinal == 1);
    CHECK(pairs[3].ordinal == 290);
}

TEST_CASE("iterative path agrees with the dense oracle") {
    std::mt19937_64 rng(2);
    const Lattice lat(2, 48, Boundary::Periodic);
    const auto v = testing::random_vector(lat.size(), rng, 0.0, 5.0);
    const Hamiltonian h(Potential(lat, v, 5.0));
    const auto ref = oracle_spectrum(lat, v);
    EigenOptions opts;
    opts.dense_limit = 100;

    const auto low = eigenpairs(h, Selection::lowest(6), opts);
    REQUIRE(low.size() == 6);
    for (std::size_t i = 0; i < low.size(); ++i) {
        CHECK(low[i].ordinal == i + 1);
        CHECK(std::abs(low[i].mu - ref[i]) <= 1e-9);
        CHECK(residual(h, low[i]) <= 1e-8);
    }
    const auto high = eigenpairs(h, Selection::highest(3), opts);
    REQUIRE(high.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(high[i].ordinal == lat.size() - 2 + i);
        CHECK(std::abs(high[i].mu - ref[lat.size() - 3 + i]) <= 1e-9);
    }
    const auto mid = eigenpairs(h, Selection::ordinals({50}), opts);
    REQUIRE(mid.size() == 1);
    CHECK(std::abs(mid[0].mu - ref[49]) <= 1e-9);

    opts.iterative_depth = 20;
    CHECK_THROWS_AS(eigenpairs(h, Selection::ordinals({50}), opts), Error);
}

TEST_CASE("iterative path on degenerate spectra") {
    const Lattice lat(2, 40, Boundary::Periodic);
    const Hamiltonian h(Potential(lat, std::vector<double>(lat.size(), 1.0), 1.0));
    EigenOptions opts;
    opts.dense_limit = 100;
    const auto pairs = eigenpairs(h, Selection::lowest(5), opts);
    REQUIRE(pairs.size() == 5);
    const double gap = 2.0 - 2.0 * std::cos(2.0 * M_PI / 40.0);
    CHECK(pairs[0].mu == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 1; i < 5; ++i) CHECK(pairs[i].mu == doctest::Approx(1.0 + gap).epsilon(1e-10));
}

TEST_CASE("inertia count") {
    std::mt19937_64 rng(9);
    const Lattice lat(1, 60, Boundary::Dirichlet);
    const auto v = testing::random_vector(lat.size(), rng, 0.0, 2.0);
    const Hamiltonian h(Potential(lat, v, 2.0));
    const auto ref = oracle_spectrum(lat, v);
    const auto a = h.sparse();
    for (std::size_t k : {0u, 1u, 17u, 59u}) {
        const double shift = k == 0 ? ref[0] - 0.1 : 0.5 * (ref[k - 1] + ref[k]);
        CHECK(count_eigenvalues_below(a, shift) == k);
    }
    CHECK(count_eigenvalues_below(a, ref.back() + 1.0) == 60);
}

TEST_CASE("parity transform") {
    const Lattice ring(1, 4, Boundary::Periodic);
    const std::vector<double> ones(4, 1.0);
    CHECK(dual_transform(ring, ones) == std::vector<double>{-1, 1, -1, 1});
    CHECK(dual_transform(ring, dual_transform(ring, ones)) == ones);
    const Lattice sq(2, 4, Boundary::Periodic);
    std::vector<double> e(16, 0.0);
    e[0] = 1.0;
    CHECK(dual_transform(sq, e) == e);
    CHECK_THROWS_AS(dual_transform(Lattice(1, 5, Boundary::Periodic), std::vector<double>(5, 1.0)), Error);
}

TEST_CASE("duality and spectrum mirror") {
    std::mt19937_64 rng(4);
    for (auto [k, bc] : {std::pair{10, Boundary::Periodic}, std::pair{9, Boundary::Dirichlet}}) {
        const Lattice lat(1, k, bc);
        const Hamiltonian h(Potential(lat, testing::random_vector(lat.size(), rng, 0.0, 5.0), 5.0));
        const MirrorReport m = spectrum_mirror(h);
        CHECK(m.max_deviation <= 1e-8);
        CHECK(m.min_eigenvalue >= -1e-9);
        CHECK(m.max_eigenvalue <= h.spectral_bound() + 1e-9);
        const auto pairs = eigenpairs(h, Selection::range(1, lat.size()));
        const DualityReport r = check_duality(h, pairs, 1e-8);
        CHECK(r.passed);
        CHECK(r.max_residual <= 1e-8);
    }
    const Hamiltonian half(Potential(Lattice(1, 8, Boundary::Periodic), std::vector<double>(8, 2.0), 4.0));
    const auto s = full_spectrum(half);
    const double centre = 2.0 + 2.0;
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(s[i] + s[s.size() - 1 - i] - 2 * centre) < 1e-12);
}
