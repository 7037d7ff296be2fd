#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

#include "spinchan/chain.hpp"
#include "spinchan/errors.hpp"
#include "spinchan/rng.hpp"

using namespace spinchan;
using std::numbers::pi;

namespace {

ChainSpec xy_pair(double j = 0.25, double delta = 0.0) {
    return {2, ChainModel::XyzPair, j, delta};
}

ChainSpec heisenberg(int n, double j = 0.25) {
    return {n, ChainModel::HeisenbergOpen, j, 0.0};
}

// Brute-force oracle: dense symmetric eigensolve of the same matrix.
Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense_eigensolve(const SymTridiagonal& h) {
    const int n = h.size();
    Eigen::MatrixXd m(n, n);
    const auto dense = h.dense();
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = dense[static_cast<size_t>(r) * n + c];
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m);
}

}  // namespace

TEST_CASE("spec validation rejects malformed chains") {
    CHECK_THROWS_AS(validate(ChainSpec{1, ChainModel::HeisenbergOpen, 0.25, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(ChainSpec{3, ChainModel::XyzPair, 0.25, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(ChainSpec{4, ChainModel::HeisenbergOpen, 0.0, 0.0}),
                    std::invalid_argument);
    CHECK_NOTHROW(validate(xy_pair()));
    CHECK_NOTHROW(validate(heisenberg(8)));
}

TEST_CASE("xy pair single-excitation matrix") {
    const auto h = build_single_excitation_hamiltonian(xy_pair(0.25, 0.0));
    REQUIRE(h.size() == 2);
    CHECK(h.off_diagonal[0] == 0.5);
    CHECK(h.diagonal[0] == 0.0);

    const auto hd = build_single_excitation_hamiltonian(xy_pair(0.25, 0.3));
    CHECK(hd.diagonal[0] == doctest::Approx(-0.3));
    CHECK(hd.diagonal[1] == doctest::Approx(-0.3));
}

TEST_CASE("xy pair eigenvalues are -2J, +2J for delta = 0") {
    const auto table = diagonalize(xy_pair(0.25, 0.0));
    CHECK(table.eigenvalues()[0] == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(table.eigenvalues()[1] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("eigenvalues match a dense eigensolve oracle") {
    for (const int n : {3, 4, 7}) {
        const auto h = build_single_excitation_hamiltonian(heisenberg(n));
        const auto table = AmplitudeTable::diagonalize(heisenberg(n));
        const auto es = dense_eigensolve(h);
        for (int k = 0; k < n; ++k)
            CHECK(table.eigenvalues()[k] == doctest::Approx(es.eigenvalues()(k)).epsilon(1e-10));
    }
}

TEST_CASE("eigenvalues are sorted ascending") {
    const auto table = diagonalize(heisenberg(16));
    for (size_t k = 1; k < table.eigenvalues().size(); ++k)
        CHECK(table.eigenvalues()[k] >= table.eigenvalues()[k - 1]);
}

TEST_CASE("mode matrix is orthogonal to 1e-12") {
    const auto table = diagonalize(heisenberg(8));
    const int n = table.size();
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            double dot = 0.0;
            for (int site = 1; site <= n; ++site)
                dot += table.mode_component(site, a) * table.mode_component(site, b);
            CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-12);
        }
    }
}

TEST_CASE("amplitude at t = 0 is the identity") {
    for (const auto& spec : {xy_pair(), heisenberg(5)}) {
        const auto table = diagonalize(spec);
        for (int m = 1; m <= table.size(); ++m)
            for (int n = 1; n <= table.size(); ++n)
                CHECK(std::abs(table.amplitude(m, n, 0.0) - (m == n ? 1.0 : 0.0)) < 1e-13);
    }
}

TEST_CASE("xy pair transfer probability follows sin^2(2 J tau)") {
    const auto table = diagonalize(xy_pair(0.25, 0.0));
    for (double tau = 0.0; tau <= 4.0 * pi; tau += 0.01) {
        const double expected = std::sin(tau / 2.0) * std::sin(tau / 2.0);
        CHECK(std::abs(table.transfer_probability(tau) - expected) < 1e-12);
    }
    // free evolution is a swap at tau* = pi/(4J)
    CHECK(table.transfer_probability(pi) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("xy pair amplitudes satisfy |g11|^2 + |g12|^2 = 1") {
    const auto table = diagonalize(xy_pair(0.25, 0.1));
    for (double tau = 0.05; tau < 9.0; tau += 0.173) {
        const double total =
            std::norm(table.amplitude(1, 1, tau)) + std::norm(table.amplitude(1, 2, tau));
        CHECK(std::abs(total - 1.0) < 1e-12);
    }
}

TEST_CASE("rows of gamma are unit norm for every model and time") {
    SplitRng rng(7, 0);
    for (const auto& spec : {xy_pair(0.25, 0.2), heisenberg(3), heisenberg(6), heisenberg(9)}) {
        const auto table = diagonalize(spec);
        for (int rep = 0; rep < 20; ++rep) {
            const double t = rng.uniform(0.0, 60.0);
            for (int m = 1; m <= table.size(); ++m) {
                double total = 0.0;
                for (int n = 1; n <= table.size(); ++n)
                    total += std::norm(table.amplitude(m, n, t));
                CHECK(std::abs(total - 1.0) < 1e-12);
            }
        }
    }
}

TEST_CASE("gamma is symmetric in its site indices") {
    const auto table = diagonalize(heisenberg(7));
    SplitRng rng(11, 0);
    for (int rep = 0; rep < 25; ++rep) {
        const double t = rng.uniform(0.0, 40.0);
        const int m = 1 + static_cast<int>(rng.next_u64() % 7);
        const int n = 1 + static_cast<int>(rng.next_u64() % 7);
        CHECK(std::abs(table.amplitude(m, n, t) - table.amplitude(n, m, t)) < 1e-12);
    }
}

TEST_CASE("propagator composes: gamma_1N(t1+t2) = sum_k gamma_1k(t1) gamma_kN(t2)") {
    const auto table = diagonalize(heisenberg(6));
    SplitRng rng(13, 0);
    for (int rep = 0; rep < 10; ++rep) {
        const double t1 = rng.uniform(0.0, 12.0);
        const double t2 = rng.uniform(0.0, 12.0);
        std::complex<double> chained{0.0, 0.0};
        for (int k = 1; k <= 6; ++k)
            chained += table.amplitude(1, k, t1) * table.amplitude(k, 6, t2);
        CHECK(std::abs(chained - table.amplitude(1, 6, t1 + t2)) < 1e-10);
    }
}

TEST_CASE("constant diagonal shifts leave |gamma|^2 untouched") {
    const auto spec = heisenberg(5);
    auto h = build_single_excitation_hamiltonian(spec);
    const auto table = AmplitudeTable::from_tridiagonal(spec, h);
    for (double& d : h.diagonal) d += 2.75;
    const auto shifted = AmplitudeTable::from_tridiagonal(spec, h);
    for (double t : {0.7, 3.9, 17.3}) {
        for (int m = 1; m <= 5; ++m)
            for (int n = 1; n <= 5; ++n)
                CHECK(std::abs(std::norm(table.amplitude(m, n, t)) -
                               std::norm(shifted.amplitude(m, n, t))) < 1e-12);
    }
}

TEST_CASE("argument validation") {
    const auto table = diagonalize(heisenberg(4));
    CHECK_THROWS_AS(table.amplitude(0, 1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(table.amplitude(1, 5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(table.amplitude(1, 2, std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(AmplitudeTable::from_tridiagonal(heisenberg(4), SymTridiagonal{{0, 0}, {1}}),
                    std::invalid_argument);
}

TEST_CASE("decomposition audit holds out to a few hundred spins") {
    // QL converges on any symmetric tridiagonal, so the corruption error
    // cannot be triggered from public inputs; check the audit stays quiet
    // at the largest sizes the solver is rated for.
    for (const int n : {64, 300}) {
        const auto table = diagonalize(heisenberg(n));
        double total = 0.0;
        for (int k = 1; k <= n; ++k) total += std::norm(table.amplitude(1, k, 37.0));
        CHECK(std::abs(total - 1.0) < 1e-12);
    }
}
