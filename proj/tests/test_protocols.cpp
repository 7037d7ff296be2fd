#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "spinchan/capacity.hpp"
#include "spinchan/errors.hpp"
#include "spinchan/protocols.hpp"
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

// Reference route for the branch amplitudes: the convolution form
//   c_k = gamma_1N(t_k) - sum_{j=1}^{k-1} gamma_NN(t_k - t_j) c_j
// evaluated term by term straight from the amplitude table.
std::vector<double> convolution_reference(const AmplitudeTable& table,
                                          const std::vector<double>& times) {
    const int n = table.size();
    std::vector<std::complex<double>> c;
    std::vector<double> p;
    for (size_t k = 0; k < times.size(); ++k) {
        std::complex<double> ck = table.amplitude(1, n, times[k]);
        for (size_t j = 0; j < k; ++j)
            ck -= table.amplitude(n, n, times[k] - times[j]) * c[j];
        c.push_back(ck);
        p.push_back(std::norm(ck));
    }
    return p;
}

std::vector<double> uniform_times(double tau, long k_max) {
    std::vector<double> t(static_cast<size_t>(k_max));
    for (long k = 1; k <= k_max; ++k) t[k - 1] = static_cast<double>(k) * tau;
    return t;
}

}  // namespace

TEST_CASE("config validation") {
    ProtocolConfig cfg;
    cfg.protocol = Protocol::MultiExcitation;
    cfg.excitations = 3;
    cfg.code_spins = 3;  // needs E <= code_spins - 1
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.code_spins = 4;
    CHECK_NOTHROW(cfg.validate());

    cfg.protocol = Protocol::DualRail;
    cfg.tau = 1.0;
    cfg.epsilon = 1.0;  // must stay below tau
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.epsilon = 0.99;
    CHECK_NOTHROW(cfg.validate());
    cfg.tau = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("plain rate anchors at J = 1/4") {
    const auto table = diagonalize(xy_pair());
    // perfect swap at tau* = pi/(4J): one qubit per tau*
    CHECK(std::abs(plain_rate(table, pi, 0) - 1.0 / pi) < 1e-10);
    // no quantum information through the channel for tau <= pi/(8J)
    for (double tau = 1e-3; tau < pi / 2.0 - 1e-9; tau += 1e-2)
        CHECK(plain_rate(table, tau, 0) == 0.0);
    CHECK(plain_rate(table, pi / 2.0, 0) <= 1e-12);
    CHECK_THROWS_AS(plain_rate(table, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(plain_rate(table, 1.0, -1), std::invalid_argument);
    CHECK_THROWS_AS(plain_rate(diagonalize(heisenberg(4)), 1.0, 0), std::invalid_argument);
}

TEST_CASE("tau* is not the optimal transfer time") {
    const auto table = diagonalize(xy_pair());
    const double at_star = plain_rate(table, pi, 0);
    double best = 0.0;
    double best_tau = 0.0;
    for (double tau = pi / 2.0 + 1e-3; tau < pi; tau += 1e-3) {
        const double r = plain_rate(table, tau, 0);
        if (r > best) {
            best = r;
            best_tau = tau;
        }
    }
    CHECK(best > at_star);
    CHECK(best_tau < pi);
}

TEST_CASE("intermediate swaps shrink the zero-rate window") {
    const auto table = diagonalize(xy_pair());
    // efficiency 0.4 < 1/2 at this tau, but eta_1 = 0.64 > 1/2
    const double tau = 2.0 * std::asin(std::sqrt(0.4));
    CHECK(plain_rate(table, tau, 0) == 0.0);
    CHECK(plain_rate(table, tau, 1) > 0.0);
    // and each qubit costs (n+1) tau, so the swap-free peak is higher
    CHECK(plain_rate(table, pi, 1) == doctest::Approx(1.0 / (2.0 * pi)).epsilon(1e-10));
    // the divisor is overridable for sensitivity studies
    CHECK(plain_rate(table, pi, 1, pi) == doctest::Approx(1.0 / pi).epsilon(1e-10));
}

TEST_CASE("assisted rate dominates the plain rate") {
    const auto table = diagonalize(xy_pair());
    CHECK(std::abs(entanglement_assisted_rate(table, pi) - 1.0 / pi) < 1e-10);
    CHECK(entanglement_assisted_rate(table, 1e-6) < 1e-3);
    // eta = 1/2 exactly: assisted transmission survives, plain does not
    CHECK(plain_rate(table, pi / 2.0, 0) <= 1e-12);
    CHECK(entanglement_assisted_rate(table, pi / 2.0) > 0.1);
    for (double tau = 0.1; tau < 6.4; tau += 0.1)
        CHECK(entanglement_assisted_rate(table, tau) >= plain_rate(table, tau, 0) - 1e-12);
}

TEST_CASE("multi-excitation rate closed forms") {
    const auto table = diagonalize(xy_pair());
    for (int i = 1; i <= 100; ++i) {
        const double tau = 0.06 * i;
        const double p = table.transfer_probability(tau);
        const double q2 = std::norm(table.amplitude(1, 1, tau));  // |gamma_11|^2

        // single excitation in two spins
        CHECK(std::abs(multi_excitation_rate(table, tau, 1, 2).rate - p / (2.0 * tau)) < 1e-12);
        // single excitation in M spins
        for (const int m : {3, 4, 8})
            CHECK(std::abs(multi_excitation_rate(table, tau, 1, m).rate -
                           p * std::log2(static_cast<double>(m)) / (m * tau)) < 1e-12);
        // two excitations in three spins
        const double q4 = q2 * q2;
        const double closed = std::log2(3.0) / (3.0 * tau) * (1.0 - q4) * (1.0 - q4) /
                              (1.0 - q4 + 2.0 * q2 - 2.0 * q4 * q2);
        CHECK(std::abs(multi_excitation_rate(table, tau, 2, 3).rate - closed) < 1e-12);
    }
}

TEST_CASE("multi-excitation edge cases") {
    const auto table = diagonalize(xy_pair());
    // perfect channel: every block takes one round
    CHECK(multi_excitation_rate(table, pi, 3, 4).rate ==
          doctest::Approx(1.0 / (2.0 * pi)).epsilon(1e-12));
    CHECK_THROWS_AS(multi_excitation_rate(table, 1.0, 3, 3), std::invalid_argument);
    CHECK_THROWS_AS(multi_excitation_expected_time(0.0, 1.0, 1, 2), std::invalid_argument);

    // a dead channel is flagged, not thrown
    const auto dead = AmplitudeTable::from_tridiagonal(xy_pair(), {{0.0, 0.0}, {0.0}});
    const auto res = multi_excitation_rate(dead, 1.0, 1, 2);
    CHECK(res.rate == 0.0);
    CHECK_FALSE(res.transfers);
}

TEST_CASE("log2 binomial") {
    CHECK(log2_binomial(2, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(log2_binomial(3, 2) == doctest::Approx(std::log2(3.0)).epsilon(1e-14));
    CHECK(log2_binomial(40, 20) == doctest::Approx(std::log2(137846528820.0)).epsilon(1e-13));
    CHECK_THROWS_AS(log2_binomial(3, 4), std::invalid_argument);
}

TEST_CASE("dual-rail first success has no correction term") {
    const auto table = diagonalize(xy_pair());
    for (double tau : {0.7, 2.0, 5.3}) {
        const auto dist = dual_rail_success_distribution(table, tau, 10);
        CHECK(std::abs(dist.success[0] - std::pow(std::sin(tau / 2.0), 2)) < 1e-13);
    }
}

TEST_CASE("dual-rail branch recursion matches the convolution reference") {
    for (const int n : {2, 4, 8}) {
        const auto table = diagonalize(heisenberg(n));
        for (const double tau : {2.0, 8.5}) {
            const auto times = uniform_times(tau, 200);
            const auto engine = dual_rail_distribution_at_times(table, times);
            const auto reference = convolution_reference(table, times);
            for (size_t k = 0; k < times.size(); ++k)
                CHECK(std::abs(engine.success[k] - reference[k]) < 1e-10);
        }
    }
}

TEST_CASE("dual-rail distribution mass behaves") {
    const auto table = diagonalize(heisenberg(8));
    const auto dist = dual_rail_success_distribution(table, 8.5, 100000);
    CHECK(dist.captured_mass >= 0.999);
    double partial = 0.0;
    for (const double pk : dist.success) {
        CHECK(pk >= 0.0);
        partial += pk;
        CHECK(partial <= 1.0 + 1e-9);
    }
}

TEST_CASE("conditional probabilities reconstruct P(k)") {
    for (const int n : {2, 4, 8}) {
        const auto table = diagonalize(heisenberg(n));
        for (const double tau : {2.0, 8.5}) {
            const auto dist = dual_rail_success_distribution(table, tau, 100);
            const auto pi_k = dist.conditional();
            double survival = 1.0;
            for (size_t k = 0; k < pi_k.size(); ++k) {
                CHECK(std::abs(pi_k[k] * survival - dist.success[k]) < 1e-10);
                survival *= (1.0 - pi_k[k]);
            }
        }
    }
}

TEST_CASE("dual-rail rate anchors") {
    const auto pair = diagonalize(xy_pair());
    // perfect first-shot transfer at tau* = pi
    const auto dist = dual_rail_success_distribution(pair, pi, 10);
    CHECK(dist.success[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(dual_rail_rate(pair, pi, 10, Feedback::Classical) - 1.0 / pi) < 1e-12);

    // halving under quantum feedback is exact
    const auto chain8 = diagonalize(heisenberg(8));
    for (const double tau : {2.0, 8.5, 13.0})
        CHECK(dual_rail_rate(chain8, tau, 100000, Feedback::Quantum) ==
              0.5 * dual_rail_rate(chain8, tau, 100000, Feedback::Classical));
}

TEST_CASE("dual-rail rate curve is non-monotonic with deep dropouts") {
    const auto table = diagonalize(heisenberg(8));
    std::vector<double> rates;
    for (double tau = 1.0; tau <= 20.0 + 1e-9; tau += 0.5)
        rates.push_back(dual_rail_rate(table, tau, 100000, Feedback::Classical));
    double lo = rates[0];
    double hi = rates[0];
    bool fell = false;
    bool rose_after_fall = false;
    for (size_t i = 1; i < rates.size(); ++i) {
        lo = std::min(lo, rates[i]);
        hi = std::max(hi, rates[i]);
        if (rates[i] < rates[i - 1]) fell = true;
        else if (fell && rates[i] > rates[i - 1]) rose_after_fall = true;
    }
    CHECK(fell);
    CHECK(rose_after_fall);
    CHECK(lo < hi / 50.0);  // near-zero dropouts at isolated tau
}

TEST_CASE("truncation below the mass gate raises with diagnostics") {
    const auto table = diagonalize(heisenberg(8));
    try {
        dual_rail_rate(table, 1.0, 3, Feedback::Classical);
        FAIL("expected UnconvergedSeriesError");
    } catch (const UnconvergedSeriesError& e) {
        CHECK(e.captured_mass >= 0.0);
        CHECK(e.captured_mass < 0.999);
    }
}

TEST_CASE("dual-rail rate is gauge invariant under diagonal shifts") {
    const auto spec = heisenberg(6);
    auto h = build_single_excitation_hamiltonian(spec);
    const auto table = AmplitudeTable::from_tridiagonal(spec, h);
    for (double& d : h.diagonal) d -= 1.23;
    const auto shifted = AmplitudeTable::from_tridiagonal(spec, h);
    for (const double tau : {3.0, 7.5})
        CHECK(std::abs(dual_rail_rate(table, tau, 20000, Feedback::Classical) -
                       dual_rail_rate(shifted, tau, 20000, Feedback::Classical)) < 1e-12);
}

TEST_CASE("time schedules must increase") {
    const auto table = diagonalize(heisenberg(4));
    CHECK_THROWS_AS(dual_rail_distribution_at_times(table, {1.0, 1.0, 2.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(dual_rail_distribution_at_times(table, {-1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("zero tilt reproduces the untilted rate bitwise") {
    const auto table = diagonalize(heisenberg(8));
    const double untilted = dual_rail_rate(table, 8.5, 20000, Feedback::Classical);
    for (const int reps : {1, 3}) {
        const auto est = dual_rail_tilted_rate(table, 8.5, 0.0, 20000, reps, 99);
        CHECK(est.mean == untilted);
        CHECK(est.std_error == 0.0);
        CHECK(est.converged == reps);
    }
}

TEST_CASE("small-tau tilted rates are independent of the tilt strength") {
    const auto table = diagonalize(heisenberg(8));
    for (const double tau : {2.0, 3.0}) {
        const auto a = dual_rail_tilted_rate(table, tau, 0.01, 100000, 8, 2026);
        const auto b = dual_rail_tilted_rate(table, tau, 0.02, 100000, 8, 2026);
        const auto c = dual_rail_tilted_rate(table, tau, 0.04, 100000, 8, 2026);
        CHECK(std::abs(a.mean - b.mean) < 2.0 * (a.std_error + b.std_error));
        CHECK(std::abs(a.mean - c.mean) < 2.0 * (a.std_error + c.std_error));
        CHECK(std::abs(b.mean - c.mean) < 2.0 * (b.std_error + c.std_error));
    }
}

TEST_CASE("tilted rates are reproducible and seed sensitive") {
    const auto table = diagonalize(heisenberg(8));
    const auto a = dual_rail_tilted_rate(table, 8.5, 0.03, 5000, 4, 7);
    const auto b = dual_rail_tilted_rate(table, 8.5, 0.03, 5000, 4, 7);
    const auto c = dual_rail_tilted_rate(table, 8.5, 0.03, 5000, 4, 8);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.mean != c.mean);
    CHECK(a.std_error > 0.0);
    CHECK_THROWS_AS(dual_rail_tilted_rate(table, 1.0, 1.0, 100, 2, 1), std::invalid_argument);
}

TEST_CASE("rate curve invariants hold for a plain sweep") {
    const auto table = diagonalize(xy_pair());
    RateCurve curve;
    curve.chain = xy_pair();
    curve.config.protocol = Protocol::Plain;
    for (double tau = 0.1; tau <= 6.3; tau += 0.1) {
        curve.tau_grid.push_back(tau);
        curve.rates.push_back(plain_rate(table, tau, 0));
    }
    REQUIRE(curve.tau_grid.size() == curve.rates.size());
    for (const double r : curve.rates) CHECK(r >= 0.0);
}
