#pragma once

#include <cstdint>
#include <vector>

#include "spinchan/chain.hpp"

namespace spinchan {

enum class Protocol { Plain, MultiExcitation, DualRail };
enum class Feedback { Classical, Quantum };

// Full parameter set for one protocol run or sweep point.
struct ProtocolConfig {
    Protocol protocol = Protocol::Plain;
    double tau = 1.0;       // free-evolution interval between operations
    int extra_swaps = 0;    // plain: additional receiver swap rounds (n)
    int excitations = 1;    // multi-excitation: E
    int code_spins = 2;     // multi-excitation: block size (E <= code_spins - 1)
    long k_max = 100000;    // dual-rail: series truncation
    Feedback feedback = Feedback::Classical;  // dual-rail
    double epsilon = 0.0;   // dual-rail: tilt half-width, must stay < tau
    int realizations = 1;   // dual-rail tilt: schedules averaged when epsilon > 0

    void validate() const;  // throws std::invalid_argument
};

// Sampled rate-vs-tau curve; rates[i] is NaN where the series truncation
// failed to converge (missing value, not an error).
struct RateCurve {
    std::vector<double> tau_grid;
    std::vector<double> rates;
    ProtocolConfig config;
    ChainSpec chain;
};

// --- Plain scheme (two-spin channel) ---------------------------------------

// Asymptotic rate Q(eta_n) / ((n+1) tau) with eta = |gamma_12(tau)|^2 and
// eta_n = 1 - (1-eta)^(n+1).  Each sent qubit occupies the channel for
// (n+1) tau: the double swap plus n extra receiver swap rounds.  The
// per-use time can be overridden (use_time > 0) for sensitivity studies.
double plain_rate(const AmplitudeTable& table, double tau, int extra_swaps = 0,
                  double use_time = 0.0);

// Q_E(|gamma_12(tau)|^2) / tau, the entanglement-assisted reference curve.
double entanglement_assisted_rate(const AmplitudeTable& table, double tau);

// --- Multi-excitation encodings (two-spin channel) --------------------------

struct MultiExcitationRate {
    double rate = 0.0;
    bool transfers = true;  // false when the channel never moves an excitation
};

// log2(binomial(code_spins, excitations)) evaluated in double precision.
double log2_binomial(int n, int k);

// Expected total transfer time T(E) from the retransmission recursion
//   T(0) = 0,
//   T(a) = M tau + sum_{b=0..a} C(a,b) q^b p^(a-b) T(b),   q = 1 - p,
// with the b = a term moved to the left-hand side before solving.
double multi_excitation_expected_time(double crossing_probability, double tau, int excitations,
                                      int code_spins);

// Asymptotic rate log2 C(M, E) / T(E).  A channel with zero crossing
// probability is reported via the flag (the expected time diverges).
MultiExcitationRate multi_excitation_rate(const AmplitudeTable& table, double tau,
                                          int excitations, int code_spins);

// --- Dual-rail conclusive protocol ------------------------------------------

// Success probabilities P(k) = |c_k|^2 of the branch-amplitude recursion
//   c_k = gamma_1N(t_k) - sum_{j<k} gamma_NN(t_k - t_j) c_j,
// evaluated at the given measurement times.
struct DualRailDistribution {
    std::vector<double> success;            // P(k), k = 1..success.size()
    std::vector<double> measurement_times;  // t_k
    double captured_mass = 0.0;             // sum of success

    // Conditional success probabilities pi_k = P(k) / prod_{j<k} (1 - pi_j).
    std::vector<double> conditional() const;

    // Mean arrival time sum_k t_k P(k), renormalized by the captured mass.
    double expected_time() const;
};

// Uniform schedule t_k = k tau.
DualRailDistribution dual_rail_success_distribution(const AmplitudeTable& table, double tau,
                                                    long k_max);

// Arbitrary strictly increasing positive schedule (tilted measurements).
DualRailDistribution dual_rail_distribution_at_times(const AmplitudeTable& table,
                                                     std::vector<double> times);

// 1/T for classical feedback, 1/(2T) when the "received" signal travels
// back through a third identical chain.  Throws UnconvergedSeriesError when
// the truncated series captures less than 0.999 of the probability mass.
double dual_rail_rate(const AmplitudeTable& table, double tau, long k_max, Feedback feedback);

struct TiltedRateEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    int converged = 0;    // realizations entering the mean
    int unconverged = 0;  // realizations rejected by the mass gate
};

// Classical-feedback rate under randomly tilted measurement times
// t_k = sum_{i<=k} (tau + delta_i), delta_i uniform on (-epsilon, epsilon).
// epsilon = 0 runs the exact untilted schedule and reproduces
// dual_rail_rate bit for bit.  Realizations use independent RNG streams
// derived from (seed, index), so results do not depend on evaluation order.
TiltedRateEstimate dual_rail_tilted_rate(const AmplitudeTable& table, double tau, double epsilon,
                                         long k_max, int realizations, std::uint64_t seed);

}  // namespace spinchan
