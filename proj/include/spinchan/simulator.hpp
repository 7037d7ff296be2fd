#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "spinchan/chain.hpp"
#include "spinchan/protocols.hpp"

namespace spinchan {

// One logical qubit alpha |0> + beta |1>; must be normalized to 1e-12.
struct MessageQubit {
    std::complex<double> alpha{1.0, 0.0};
    std::complex<double> beta{0.0, 0.0};
    void validate() const;
};

// Time-stamped record of a seeded stochastic protocol run.  event_times are
// strictly increasing block-completion times, qubits_delivered the matching
// cumulative qubit count (log2-weighted for multi-excitation blocks).
struct McTrace {
    std::vector<double> event_times;
    std::vector<double> qubits_delivered;
    std::uint64_t seed = 0;
    ProtocolConfig config;
    double tail_probability = 0.0;  // truncated mass of the sampling distribution
};

// M(t) / t.
double instantaneous_rate(const McTrace& trace, double t);

// Monte Carlo run of the (E, code_spins) encoding over the two-spin channel.
// Per round of length code_spins * tau each outstanding excitation bounces
// back with probability 1 - |gamma_12(tau)|^2; a block is credited
// log2 C(code_spins, E) qubits when the last excitation crosses.
McTrace simulate_multi_excitation(const AmplitudeTable& table, double tau, int excitations,
                                  int code_spins, double duration, std::uint64_t seed);

// Monte Carlo run of the dual-rail protocol: arrival steps are drawn from
// the truncated P(k) by inverse CDF; quantum feedback adds an independent
// backward draw before the next qubit can be sent.  Throws
// UnconvergedSeriesError before any sampling if the distribution fails the
// mass gate.
McTrace simulate_dual_rail(const AmplitudeTable& table, double tau, long k_max,
                           Feedback feedback, double duration, std::uint64_t seed);

// --- Brute-force oracles -----------------------------------------------------

// Exact Schroedinger evolution of the plain scheme on the full
// Alice x chain x Bob register for a two-spin channel: sequence of SWAP
// unitaries and free evolutions, with n extra receiver swap rounds per
// message.  Returns Bob's reduced density matrix over one qubit per message
// (for extra swaps, after the receiver-side unitary that concentrates each
// message's arrival amplitude into its first slot) together with the chain
// purity recorded after every simultaneous sender/receiver swap.
struct PlainOracleResult {
    Eigen::MatrixXcd bob_density;        // 2^m x 2^m
    std::vector<double> chain_purities;  // one entry per double swap
};
PlainOracleResult full_hilbert_plain_oracle(const ChainSpec& spec,
                                            const std::vector<MessageQubit>& messages,
                                            double tau, int extra_swaps = 0);

// Tensor product of single-qubit amplitude damping channels applied to the
// message list; index bit k-1 of the result addresses message k.
Eigen::MatrixXcd damping_channel_product(const std::vector<MessageQubit>& messages, double eta);

// Max absolute entrywise deviation between two n_qubit density matrices
// after choosing, per qubit, the free phase on |1> that best aligns them.
double phase_aligned_deviation(const Eigen::MatrixXcd& actual, const Eigen::MatrixXcd& expected,
                               int n_qubits);

// Single-excitation state-vector simulation of the dual-rail measurement
// sequence: propagate the N-site amplitude vector to each measurement time,
// record the end-site probability, project that component out (branch
// amplitudes stay unnormalized, so the records are exactly P(k)).
std::vector<double> dual_rail_statevector_oracle(const AmplitudeTable& table,
                                                 const std::vector<double>& measurement_times);

// gamma_mn(t) from the unrestricted 2^N Hamiltonian: dense eigensolve of the
// full spin Hamiltonian, propagator matrix elements between one-excitation
// basis states.  N <= 10.
Eigen::MatrixXcd amplitude_full_space_oracle(const ChainSpec& spec, double t);

}  // namespace spinchan
