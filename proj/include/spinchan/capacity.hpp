#pragma once

namespace spinchan {

// H2(x) = -x log2 x - (1-x) log2(1-x), with 0 log 0 = 0 at the endpoints.
// Throws std::invalid_argument outside [0, 1].
double binary_entropy(double x);

// Excitation transfer probability of one channel use.  Accepts a hair of
// round-off slack (1e-12) outside [0, 1] and clamps it; anything further
// out is rejected.
class ChannelEfficiency {
  public:
    explicit ChannelEfficiency(double eta);
    double value() const { return eta_; }

  private:
    double eta_;
};

// Quantum capacity of the amplitude damping channel, in qubits per use:
//   Q(eta) = max_p { H2(eta p) - H2((1-eta) p) },
// exactly zero for eta <= 1/2.  Maximization is a coarse 1024-point scan
// followed by golden-section refinement; absolute tolerance 1e-10.
double damping_capacity(ChannelEfficiency eta);

// Entanglement-assisted capacity:
//   Q_E(eta) = (1/2) max_p { H2(p) + H2(eta p) - H2((1-eta) p) }.
double entanglement_assisted_capacity(ChannelEfficiency eta);

// Effective efficiency after n extra receiver-side swap rounds:
//   eta_n = 1 - (1 - eta)^(n+1).
ChannelEfficiency eta_after_n_extra_swaps(ChannelEfficiency eta, int n);

}  // namespace spinchan
