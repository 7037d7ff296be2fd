#pragma once

#include <complex>
#include <span>
#include <vector>

namespace spinchan {

// Spin-chain models whose Hamiltonian conserves total magnetization.
// Units: hbar = 1 throughout, so couplings are angular frequencies and
// times are their dimensionless conjugates.
enum class ChainModel {
    XyzPair,         // two spins, J (sigma^x sigma^x + sigma^y sigma^y) + Delta sigma^z sigma^z
    HeisenbergOpen,  // -J sum_j sigma_j . sigma_{j+1}, open boundaries
};

struct ChainSpec {
    int n_spins = 2;
    ChainModel model = ChainModel::XyzPair;
    double j_coupling = 0.25;
    double delta = 0.0;  // XyzPair only
};

// Throws std::invalid_argument on a malformed spec (n_spins < 2,
// XyzPair with n_spins != 2, zero coupling, non-finite parameters).
void validate(const ChainSpec& spec);

// Symmetric tridiagonal matrix; both supported models are tridiagonal in
// the site basis of the single-excitation sector.
struct SymTridiagonal {
    std::vector<double> diagonal;       // N entries
    std::vector<double> off_diagonal;   // N-1 entries, off_diagonal[i] couples sites i+1, i+2

    int size() const { return static_cast<int>(diagonal.size()); }
    std::vector<double> dense() const;  // row-major N x N
};

// Matrix elements <m|H|n> in the basis |n> = "all spins down but the n-th".
// A constant diagonal shift only contributes a global phase to propagation
// and never changes any |gamma_mn|^2.
SymTridiagonal build_single_excitation_hamiltonian(const ChainSpec& spec);

// Spectral decomposition of the single-excitation Hamiltonian.  Immutable
// once built; every query is a pure function, safe to call from any number
// of threads concurrently.
class AmplitudeTable {
  public:
    // Eigensolve via implicit-shift QL on the tridiagonal matrix.
    // Throws NumericalError with iteration diagnostics on non-convergence.
    static AmplitudeTable diagonalize(const ChainSpec& spec);

    // Same, but from a caller-supplied tridiagonal matrix (e.g. a
    // diagonally shifted Hamiltonian).  The spec is kept as metadata.
    static AmplitudeTable from_tridiagonal(const ChainSpec& spec, SymTridiagonal h);

    const ChainSpec& spec() const { return spec_; }
    int size() const { return n_; }

    // Ascending mode frequencies (1/time, hbar = 1).
    const std::vector<double>& eigenvalues() const { return eigenvalues_; }

    // V[site][mode]; columns of V are orthonormal modes in the site basis.
    double mode_component(int site, int mode) const;
    std::span<const double> site_modes(int site) const;  // row of V for one site

    // Transfer amplitude gamma_mn(t) = sum_k V_mk V_nk exp(-i lambda_k t).
    // Sites are 1-based (1..N); throws std::invalid_argument out of range
    // or for non-finite t.
    std::complex<double> amplitude(int from_site, int to_site, double t) const;

    // |gamma_1N(t)|^2, the end-to-end arrival probability.
    double transfer_probability(double t) const;

  private:
    AmplitudeTable() = default;

    ChainSpec spec_;
    int n_ = 0;
    std::vector<double> eigenvalues_;  // ascending
    std::vector<double> modes_;        // row-major, modes_[ (site-1)*N + mode ]
};

inline AmplitudeTable diagonalize(const ChainSpec& spec) {
    return AmplitudeTable::diagonalize(spec);
}

}  // namespace spinchan
