#include "spinchan/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "spinchan/capacity.hpp"
#include "spinchan/errors.hpp"
#include "spinchan/rng.hpp"

namespace spinchan {

void MessageQubit::validate() const {
    const double norm = std::norm(alpha) + std::norm(beta);
    if (std::abs(norm - 1.0) > 1e-12)
        throw std::invalid_argument("simulator: message qubit is not normalized (|a|^2+|b|^2 = " +
                                    std::to_string(norm) + ")");
}

double instantaneous_rate(const McTrace& trace, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("simulator: rate requires t > 0");
    const auto it =
        std::upper_bound(trace.event_times.begin(), trace.event_times.end(), t);
    if (it == trace.event_times.begin()) return 0.0;
    const auto idx = static_cast<size_t>(it - trace.event_times.begin()) - 1;
    return trace.qubits_delivered[idx] / t;
}

McTrace simulate_multi_excitation(const AmplitudeTable& table, double tau, int excitations,
                                  int code_spins, double duration, std::uint64_t seed) {
    if (table.size() != 2)
        throw std::invalid_argument("simulator: multi-excitation runs on the two-spin channel");
    ProtocolConfig cfg;
    cfg.protocol = Protocol::MultiExcitation;
    cfg.tau = tau;
    cfg.excitations = excitations;
    cfg.code_spins = code_spins;
    cfg.validate();
    if (!(duration > 0.0)) throw std::invalid_argument("simulator: duration must be positive");

    McTrace trace;
    trace.seed = seed;
    trace.config = cfg;

    const double p = table.transfer_probability(tau);
    if (p == 0.0) return trace;  // nothing ever crosses; the clock just runs

    const double q = 1.0 - p;
    const double round_time = static_cast<double>(code_spins) * tau;
    const double block_credit = log2_binomial(code_spins, excitations);

    SplitRng rng(seed, 0);
    double t = 0.0;
    double delivered = 0.0;
    while (true) {
        int outstanding = excitations;
        long rounds = 0;
        do {
            ++rounds;
            outstanding = rng.binomial(outstanding, q);
        } while (outstanding > 0);
        const double completed = t + static_cast<double>(rounds) * round_time;
        if (completed > duration) break;
        t = completed;
        delivered += block_credit;
        trace.event_times.push_back(t);
        trace.qubits_delivered.push_back(delivered);
    }
    return trace;
}

McTrace simulate_dual_rail(const AmplitudeTable& table, double tau, long k_max,
                           Feedback feedback, double duration, std::uint64_t seed) {
    if (!(duration > 0.0)) throw std::invalid_argument("simulator: duration must be positive");
    const auto dist = dual_rail_success_distribution(table, tau, k_max);
    if (dist.captured_mass < 0.999)
        throw UnconvergedSeriesError(
            "simulator: dual-rail sampling distribution captured only " +
                std::to_string(dist.captured_mass) + " of the success probability",
            dist.captured_mass);

    std::vector<double> cdf(dist.success.size());
    double acc = 0.0;
    for (size_t k = 0; k < dist.success.size(); ++k) {
        acc += dist.success[k];
        cdf[k] = acc;
    }

    McTrace trace;
    trace.seed = seed;
    trace.config.protocol = Protocol::DualRail;
    trace.config.tau = tau;
    trace.config.k_max = k_max;
    trace.config.feedback = feedback;
    trace.tail_probability = 1.0 - dist.captured_mass;

    SplitRng rng(seed, 0);
    const auto draw_steps = [&]() -> long {
        const double u = rng.next_double() * dist.captured_mass;
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        return static_cast<long>(it - cdf.begin()) + 1;
    };

    double t = 0.0;
    double delivered = 0.0;
    while (true) {
        t += static_cast<double>(draw_steps()) * tau;
        if (t > duration) break;
        delivered += 1.0;
        trace.event_times.push_back(t);
        trace.qubits_delivered.push_back(delivered);
        if (feedback == Feedback::Quantum) {
            t += static_cast<double>(draw_steps()) * tau;  // backward token leg
            if (t > duration) break;
        }
    }
    return trace;
}

// --- Full-Hilbert plain-scheme oracle ---------------------------------------

namespace {

using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using Complex = std::complex<double>;

// Full two-spin Hamiltonian in the basis |00>, |01>, |10>, |11>
// (left bit = chain site 1, |1> = spin up).
Eigen::Matrix4d full_two_spin_hamiltonian(const ChainSpec& spec) {
    Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
    const double j = spec.j_coupling;
    if (spec.model == ChainModel::XyzPair) {
        h(0, 0) = h(3, 3) = spec.delta;
        h(1, 1) = h(2, 2) = -spec.delta;
        h(1, 2) = h(2, 1) = 2.0 * j;
    } else {
        h(0, 0) = h(3, 3) = -j;
        h(1, 1) = h(2, 2) = j;
        h(1, 2) = h(2, 1) = -2.0 * j;
    }
    return h;
}

Eigen::Matrix4cd evolution_gate(const ChainSpec& spec, double tau) {
    const Eigen::Matrix4d h = full_two_spin_hamiltonian(spec);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(h);
    Eigen::Vector4cd phases;
    for (int k = 0; k < 4; ++k) phases(k) = std::polar(1.0, -es.eigenvalues()(k) * tau);
    return es.eigenvectors().cast<Complex>() * phases.asDiagonal() *
           es.eigenvectors().transpose().cast<Complex>();
}

void apply_swap(Vec& state, int bit_a, int bit_b) {
    const std::uint64_t ma = 1ULL << bit_a;
    const std::uint64_t mb = 1ULL << bit_b;
    const std::uint64_t dim = static_cast<std::uint64_t>(state.size());
    for (std::uint64_t idx = 0; idx < dim; ++idx)
        if ((idx & ma) && !(idx & mb)) std::swap(state(idx), state(idx ^ ma ^ mb));
}

// Applies a 4x4 gate to qubits (bit_hi, bit_lo); local basis index is
// (bit_hi << 1) | bit_lo, matching full_two_spin_hamiltonian.
void apply_two_qubit(Vec& state, const Eigen::Matrix4cd& gate, int bit_hi, int bit_lo) {
    const std::uint64_t mh = 1ULL << bit_hi;
    const std::uint64_t ml = 1ULL << bit_lo;
    const std::uint64_t dim = static_cast<std::uint64_t>(state.size());
    for (std::uint64_t idx = 0; idx < dim; ++idx) {
        if (idx & (mh | ml)) continue;
        const std::uint64_t i00 = idx;
        const std::uint64_t i01 = idx | ml;
        const std::uint64_t i10 = idx | mh;
        const std::uint64_t i11 = idx | mh | ml;
        const Eigen::Vector4cd in{state(i00), state(i01), state(i10), state(i11)};
        const Eigen::Vector4cd out = gate * in;
        state(i00) = out(0);
        state(i01) = out(1);
        state(i10) = out(2);
        state(i11) = out(3);
    }
}

double chain_purity(const Vec& state, int bit_c1, int bit_c2) {
    const std::uint64_t mh = 1ULL << bit_c1;
    const std::uint64_t ml = 1ULL << bit_c2;
    const std::uint64_t patterns[4] = {0, ml, mh, mh | ml};
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    const std::uint64_t dim = static_cast<std::uint64_t>(state.size());
    for (std::uint64_t idx = 0; idx < dim; ++idx) {
        if (idx & (mh | ml)) continue;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                rho(a, b) += state(idx | patterns[a]) * std::conj(state(idx | patterns[b]));
    }
    return (rho * rho).trace().real();
}

struct PlainRegister {
    int messages;
    int slots;  // Bob slots per message = extra_swaps + 1
    int total_bits;

    int alice_bit(int j) const { return j - 1; }                 // j = 1 .. messages+1
    int chain1_bit() const { return messages + 1; }
    int chain2_bit() const { return messages + 2; }
    int bob_bit(int j, int slot) const {                          // slot = 1 .. slots
        return messages + 3 + (j - 1) * slots + (slot - 1);
    }
};

// Runs the swap/evolve sequence and leaves the final state in `state`.
PlainRegister run_plain_sequence(const ChainSpec& spec, const std::vector<MessageQubit>& messages,
                                 double tau, int extra_swaps, Vec& state,
                                 std::vector<double>* purities) {
    validate(spec);
    if (spec.n_spins != 2)
        throw std::invalid_argument("simulator: the plain-scheme oracle needs a two-spin chain");
    if (!(tau > 0.0)) throw std::invalid_argument("simulator: tau must be positive");
    if (extra_swaps < 0)
        throw std::invalid_argument("simulator: extra_swaps must be nonnegative");
    if (messages.empty()) throw std::invalid_argument("simulator: no messages");
    for (const auto& m : messages) m.validate();

    const int m = static_cast<int>(messages.size());
    PlainRegister reg;
    reg.messages = m;
    reg.slots = extra_swaps + 1;
    reg.total_bits = (m + 1) + 2 + m * reg.slots;
    if (reg.total_bits > 22)
        throw ResourceError("simulator: plain oracle register needs " +
                            std::to_string(reg.total_bits) +
                            " qubits; the dense simulation is capped at 22");

    const std::uint64_t dim = 1ULL << reg.total_bits;
    state = Vec::Zero(static_cast<Eigen::Index>(dim));
    // Product input: Alice slot j holds message j, everything else |0>.
    for (std::uint64_t a = 0; a < (1ULL << m); ++a) {
        Complex amp{1.0, 0.0};
        for (int j = 0; j < m; ++j)
            amp *= (a & (1ULL << j)) ? messages[j].beta : messages[j].alpha;
        state(a) = amp;
    }

    const Eigen::Matrix4cd u = evolution_gate(spec, tau);
    apply_swap(state, reg.alice_bit(1), reg.chain1_bit());
    for (int j = 1; j <= m; ++j) {
        for (int slot = 1; slot <= reg.slots; ++slot) {
            apply_two_qubit(state, u, reg.chain1_bit(), reg.chain2_bit());
            apply_swap(state, reg.bob_bit(j, slot), reg.chain2_bit());
            if (slot == reg.slots)  // simultaneous double swap closing the block
                apply_swap(state, reg.alice_bit(j + 1), reg.chain1_bit());
        }
        if (purities)
            purities->push_back(chain_purity(state, reg.chain1_bit(), reg.chain2_bit()));
    }
    return reg;
}

// Unitary on the single-excitation subspace of one Bob block sending the
// arrival pattern v/|v| onto the first slot; rows completed by
// Gram-Schmidt.  Identity elsewhere.
Mat concentration_matrix(const Eigen::VectorXcd& v) {
    const int n = static_cast<int>(v.size());
    Mat w = Mat::Identity(n, n);
    const double norm = v.norm();
    if (norm < 1e-15) return w;
    w.row(0) = v.conjugate().transpose() / norm;
    int filled = 1;
    for (int cand = 0; cand < n && filled < n; ++cand) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
        e(cand) = 1.0;
        for (int r = 0; r < filled; ++r) e -= (w.row(r) * e)(0) * w.row(r).adjoint();
        const double len = e.norm();
        if (len > 1e-8) {
            w.row(filled) = e.adjoint() / len;
            ++filled;
        }
    }
    if (filled != n)
        throw NumericalError("simulator: failed to complete the concentration unitary");
    return w;
}

void apply_block_concentration(Vec& state, const PlainRegister& reg, int j, const Mat& w) {
    const int n = reg.slots;
    std::uint64_t block_mask = 0;
    for (int slot = 1; slot <= n; ++slot) block_mask |= 1ULL << reg.bob_bit(j, slot);
    const std::uint64_t dim = static_cast<std::uint64_t>(state.size());
    Eigen::VectorXcd coeffs(n);
    for (std::uint64_t base = 0; base < dim; ++base) {
        if (base & block_mask) continue;
        for (int slot = 1; slot <= n; ++slot)
            coeffs(slot - 1) = state(base | (1ULL << reg.bob_bit(j, slot)));
        const Eigen::VectorXcd mixed = w * coeffs;
        for (int slot = 1; slot <= n; ++slot)
            state(base | (1ULL << reg.bob_bit(j, slot))) = mixed(slot - 1);
    }
}

// Arrival amplitudes per receiver slot, read off a single-message probe run
// with input |1>; this is the decoder Bob can build from channel knowledge
// alone.
Eigen::VectorXcd probe_arrival_amplitudes(const ChainSpec& spec, double tau, int extra_swaps) {
    Vec state;
    const std::vector<MessageQubit> probe{{Complex{0.0, 0.0}, Complex{1.0, 0.0}}};
    const PlainRegister reg = run_plain_sequence(spec, probe, tau, extra_swaps, state, nullptr);
    Eigen::VectorXcd v(reg.slots);
    for (int slot = 1; slot <= reg.slots; ++slot)
        v(slot - 1) = state(1ULL << reg.bob_bit(1, slot));
    return v;
}

}  // namespace

PlainOracleResult full_hilbert_plain_oracle(const ChainSpec& spec,
                                            const std::vector<MessageQubit>& messages,
                                            double tau, int extra_swaps) {
    PlainOracleResult result;
    Vec state;
    const PlainRegister reg =
        run_plain_sequence(spec, messages, tau, extra_swaps, state, &result.chain_purities);

    if (reg.slots > 1) {
        const Mat w = concentration_matrix(probe_arrival_amplitudes(spec, tau, extra_swaps));
        for (int j = 1; j <= reg.messages; ++j) apply_block_concentration(state, reg, j, w);
    }

    // Reduced density matrix over the primary slot of each block.
    const int m = reg.messages;
    std::uint64_t primary_mask = 0;
    std::vector<std::uint64_t> expand(1ULL << m, 0);
    for (int j = 1; j <= m; ++j) primary_mask |= 1ULL << reg.bob_bit(j, 1);
    for (std::uint64_t a = 0; a < (1ULL << m); ++a) {
        std::uint64_t bits = 0;
        for (int j = 0; j < m; ++j)
            if (a & (1ULL << j)) bits |= 1ULL << reg.bob_bit(j + 1, 1);
        expand[a] = bits;
    }
    Mat rho = Mat::Zero(1 << m, 1 << m);
    const std::uint64_t dim = static_cast<std::uint64_t>(state.size());
    for (std::uint64_t rest = 0; rest < dim; ++rest) {
        if (rest & primary_mask) continue;
        for (std::uint64_t a = 0; a < (1ULL << m); ++a) {
            const Complex amp_a = state(rest | expand[a]);
            if (amp_a == Complex{0.0, 0.0}) continue;
            for (std::uint64_t b = 0; b < (1ULL << m); ++b)
                rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
                    amp_a * std::conj(state(rest | expand[b]));
        }
    }
    result.bob_density = std::move(rho);
    return result;
}

Eigen::MatrixXcd damping_channel_product(const std::vector<MessageQubit>& messages, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("simulator: damping efficiency outside [0,1]");
    Mat rho = Mat::Ones(1, 1);
    for (size_t j = 0; j < messages.size(); ++j) {
        messages[j].validate();
        const Complex a = messages[j].alpha;
        const Complex b = messages[j].beta;
        Eigen::Matrix2cd d;
        d(0, 0) = std::norm(a) + (1.0 - eta) * std::norm(b);
        d(0, 1) = std::sqrt(eta) * a * std::conj(b);
        d(1, 0) = std::conj(d(0, 1));
        d(1, 1) = eta * std::norm(b);
        // message j occupies index bit j, so later messages are the slower bits
        Mat next(2 * rho.rows(), 2 * rho.cols());
        next << d(0, 0) * rho, d(0, 1) * rho, d(1, 0) * rho, d(1, 1) * rho;
        rho = std::move(next);
    }
    return rho;
}

double phase_aligned_deviation(const Eigen::MatrixXcd& actual, const Eigen::MatrixXcd& expected,
                               int n_qubits) {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    if (actual.rows() != dim || expected.rows() != dim || actual.cols() != dim ||
        expected.cols() != dim)
        throw std::invalid_argument("simulator: density matrix size does not match qubit count");

    // Per-qubit phase from the single-qubit marginals' coherences.
    std::vector<double> phi(n_qubits, 0.0);
    for (int q = 0; q < n_qubits; ++q) {
        Complex act01{0.0, 0.0};
        Complex exp01{0.0, 0.0};
        const std::uint64_t mq = 1ULL << q;
        for (std::uint64_t idx = 0; idx < static_cast<std::uint64_t>(dim); ++idx) {
            if (idx & mq) continue;
            act01 += actual(idx, idx | mq);
            exp01 += expected(idx, idx | mq);
        }
        if (std::abs(exp01) > 1e-14 && std::abs(act01) > 1e-14)
            phi[q] = std::arg(act01 * std::conj(exp01));
    }

    double dev = 0.0;
    for (Eigen::Index a = 0; a < dim; ++a) {
        for (Eigen::Index b = 0; b < dim; ++b) {
            double angle = 0.0;
            for (int q = 0; q < n_qubits; ++q) {
                if (a & (Eigen::Index{1} << q)) angle += phi[q];
                if (b & (Eigen::Index{1} << q)) angle -= phi[q];
            }
            const Complex corrected = actual(a, b) * std::polar(1.0, angle);
            dev = std::max(dev, std::abs(corrected - expected(a, b)));
        }
    }
    return dev;
}

std::vector<double> dual_rail_statevector_oracle(const AmplitudeTable& table,
                                                 const std::vector<double>& measurement_times) {
    const int n = table.size();
    double prev = 0.0;
    for (const double t : measurement_times) {
        if (!(t > prev)) throw std::invalid_argument("simulator: times must strictly increase");
        prev = t;
    }

    Eigen::MatrixXd v(n, n);
    for (int site = 1; site <= n; ++site)
        for (int k = 0; k < n; ++k) v(site - 1, k) = table.mode_component(site, k);
    const std::vector<double>& lambda = table.eigenvalues();

    Vec psi = Vec::Zero(n);
    psi(0) = 1.0;
    std::vector<double> p;
    p.reserve(measurement_times.size());
    double t_prev = 0.0;
    for (const double t : measurement_times) {
        const double dt = t - t_prev;
        t_prev = t;
        Vec modes = v.transpose().cast<Complex>() * psi;
        for (int k = 0; k < n; ++k) modes(k) *= std::polar(1.0, -lambda[k] * dt);
        psi = v.cast<Complex>() * modes;
        p.push_back(std::norm(psi(n - 1)));
        psi(n - 1) = 0.0;  // branch measured out; renormalization deferred
    }
    return p;
}

Eigen::MatrixXcd amplitude_full_space_oracle(const ChainSpec& spec, double t) {
    validate(spec);
    if (!std::isfinite(t)) throw std::invalid_argument("simulator: time must be finite");
    const int n = spec.n_spins;
    if (n > 10)
        throw ResourceError("simulator: full-space oracle limited to 10 spins, got " +
                            std::to_string(n));
    const std::uint64_t dim = 1ULL << n;

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
    struct Bond {
        int a, b;
        double flip, zz;  // flip-flop matrix element and sigma^z sigma^z coefficient
    };
    std::vector<Bond> bonds;
    if (spec.model == ChainModel::XyzPair) {
        bonds.push_back({0, 1, 2.0 * spec.j_coupling, spec.delta});
    } else {
        for (int b = 0; b + 1 < n; ++b)
            bonds.push_back({b, b + 1, -2.0 * spec.j_coupling, -spec.j_coupling});
    }
    for (std::uint64_t idx = 0; idx < dim; ++idx) {
        for (const Bond& bond : bonds) {
            const bool ba = idx & (1ULL << bond.a);
            const bool bb = idx & (1ULL << bond.b);
            h(idx, idx) += (ba == bb) ? bond.zz : -bond.zz;
            if (ba != bb) {
                const std::uint64_t flipped = idx ^ (1ULL << bond.a) ^ (1ULL << bond.b);
                h(idx, flipped) += bond.flip;
            }
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.info() != Eigen::Success)
        throw NumericalError("simulator: dense eigensolve of the full Hamiltonian failed");

    Eigen::MatrixXcd gamma(n, n);
    for (int m = 1; m <= n; ++m) {
        const std::uint64_t im = 1ULL << (m - 1);
        for (int site = 1; site <= n; ++site) {
            const std::uint64_t is = 1ULL << (site - 1);
            Complex g{0.0, 0.0};
            for (std::uint64_t k = 0; k < dim; ++k)
                g += es.eigenvectors()(im, k) * es.eigenvectors()(is, k) *
                     std::polar(1.0, -es.eigenvalues()(k) * t);
            gamma(m - 1, site - 1) = g;
        }
    }
    return gamma;
}

}  // namespace spinchan
