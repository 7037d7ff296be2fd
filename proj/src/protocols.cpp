#include "spinchan/protocols.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include "spinchan/capacity.hpp"
#include "spinchan/errors.hpp"
#include "spinchan/rng.hpp"

namespace spinchan {

void ProtocolConfig::validate() const {
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw std::invalid_argument("protocols: tau must be positive and finite");
    switch (protocol) {
        case Protocol::Plain:
            if (extra_swaps < 0)
                throw std::invalid_argument("protocols: extra_swaps must be nonnegative");
            break;
        case Protocol::MultiExcitation:
            if (code_spins < 2)
                throw std::invalid_argument("protocols: code_spins must be at least 2");
            if (excitations < 1 || excitations > code_spins - 1)
                throw std::invalid_argument(
                    "protocols: excitations must satisfy 1 <= E <= code_spins - 1 "
                    "(one reference memory per block)");
            break;
        case Protocol::DualRail:
            if (k_max < 1) throw std::invalid_argument("protocols: k_max must be positive");
            if (epsilon < 0.0 || !std::isfinite(epsilon))
                throw std::invalid_argument("protocols: epsilon must be nonnegative");
            if (epsilon >= tau)
                throw std::invalid_argument(
                    "protocols: epsilon must stay below tau so measurement times increase");
            if (realizations < 1)
                throw std::invalid_argument("protocols: realizations must be at least 1");
            break;
    }
}

namespace {

void require_two_spin(const AmplitudeTable& table, const char* who) {
    if (table.size() != 2)
        throw std::invalid_argument(std::string(who) + " is defined for the two-spin channel");
}

void require_positive_tau(double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw std::invalid_argument("protocols: tau must be positive and finite");
}

}  // namespace

double plain_rate(const AmplitudeTable& table, double tau, int extra_swaps, double use_time) {
    require_two_spin(table, "protocols: plain_rate");
    require_positive_tau(tau);
    if (extra_swaps < 0)
        throw std::invalid_argument("protocols: extra_swaps must be nonnegative");
    const ChannelEfficiency eta(table.transfer_probability(tau));
    const ChannelEfficiency boosted = eta_after_n_extra_swaps(eta, extra_swaps);
    const double time_per_use = use_time > 0.0 ? use_time : (extra_swaps + 1) * tau;
    return damping_capacity(boosted) / time_per_use;
}

double entanglement_assisted_rate(const AmplitudeTable& table, double tau) {
    require_two_spin(table, "protocols: entanglement_assisted_rate");
    require_positive_tau(tau);
    return entanglement_assisted_capacity(ChannelEfficiency(table.transfer_probability(tau))) /
           tau;
}

double log2_binomial(int n, int k) {
    if (k < 0 || k > n) throw std::invalid_argument("protocols: binomial index out of range");
    double log2c = 0.0;
    for (int i = 1; i <= k; ++i)
        log2c += std::log2(static_cast<double>(n - k + i)) - std::log2(static_cast<double>(i));
    return log2c;
}

double multi_excitation_expected_time(double crossing_probability, double tau, int excitations,
                                      int code_spins) {
    require_positive_tau(tau);
    ProtocolConfig cfg;
    cfg.protocol = Protocol::MultiExcitation;
    cfg.tau = tau;
    cfg.excitations = excitations;
    cfg.code_spins = code_spins;
    cfg.validate();
    const double p = crossing_probability;
    if (!(p > 0.0 && p <= 1.0))
        throw std::invalid_argument("protocols: crossing probability must lie in (0,1]");
    const double q = 1.0 - p;
    const double round_time = static_cast<double>(code_spins) * tau;

    // Pascal row of C(a, b) maintained incrementally; a stays small.
    std::vector<double> expected(excitations + 1, 0.0);
    std::vector<double> choose{1.0};
    for (int a = 1; a <= excitations; ++a) {
        choose.push_back(1.0);
        for (int b = a - 1; b >= 1; --b) choose[b] += choose[b - 1];
        double acc = round_time;
        for (int b = 1; b < a; ++b)
            acc += choose[b] * std::pow(q, b) * std::pow(p, a - b) * expected[b];
        // 1 - q^a without cancellation for small p
        const double denom = -std::expm1(static_cast<double>(a) * std::log1p(-p));
        expected[a] = acc / denom;
    }
    return expected[excitations];
}

MultiExcitationRate multi_excitation_rate(const AmplitudeTable& table, double tau,
                                          int excitations, int code_spins) {
    require_two_spin(table, "protocols: multi_excitation_rate");
    require_positive_tau(tau);
    const double p = table.transfer_probability(tau);
    if (p == 0.0) return {0.0, false};  // expected transfer time diverges
    const double t = multi_excitation_expected_time(p, tau, excitations, code_spins);
    return {log2_binomial(code_spins, excitations) / t, true};
}

std::vector<double> DualRailDistribution::conditional() const {
    std::vector<double> pi;
    pi.reserve(success.size());
    double survival = 1.0;  // prod_{j<k} (1 - pi_j)
    for (const double pk : success) {
        const double p_cond = survival > 0.0 ? pk / survival : 0.0;
        pi.push_back(p_cond);
        survival *= (1.0 - p_cond);
    }
    return pi;
}

double DualRailDistribution::expected_time() const {
    double t = 0.0;
    for (size_t k = 0; k < success.size(); ++k) t += measurement_times[k] * success[k];
    return t / captured_mass;
}

DualRailDistribution dual_rail_distribution_at_times(const AmplitudeTable& table,
                                                     std::vector<double> times) {
    const int n = table.size();
    double prev = 0.0;
    for (const double t : times) {
        if (!(t > prev) || !std::isfinite(t))
            throw std::invalid_argument(
                "protocols: measurement times must be strictly increasing and positive");
        prev = t;
    }

    const std::vector<double>& lambda = table.eigenvalues();
    const std::span<const double> source = table.site_modes(1);
    const std::span<const double> sink = table.site_modes(n);

    // The recursion c_k = gamma_1N(t_k) - sum_{j<k} gamma_NN(t_k - t_j) c_j
    // telescopes in the eigenmode basis: keeping the residual (not yet
    // measured-out) mode amplitudes u_m makes each step
    //   c_k = sum_m V_Nm e^{-i lambda_m t_k} u_m,
    //   u_m -= V_Nm e^{+i lambda_m t_k} c_k,
    // with u_m initialized to V_1m.  This is O(k N) overall and evaluates
    // every gamma at its exact (possibly irregular) time.
    std::vector<std::complex<double>> residual(source.begin(), source.end());
    std::vector<std::complex<double>> phase(n);

    DualRailDistribution out;
    out.success.reserve(times.size());
    double mass = 0.0;
    for (const double t : times) {
        std::complex<double> c{0.0, 0.0};
        for (int m = 0; m < n; ++m) {
            phase[m] = std::polar(1.0, -lambda[m] * t);
            c += sink[m] * phase[m] * residual[m];
        }
        const double pk = std::norm(c);
        mass += pk;
        out.success.push_back(pk);
        if (mass > 1.0 + 1e-6)
            throw NumericalError(
                "protocols: dual-rail success mass exceeded 1 (" + std::to_string(mass) +
                "); the amplitude table is corrupt or not unitary");
        for (int m = 0; m < n; ++m) residual[m] -= sink[m] * std::conj(phase[m]) * c;
    }
    out.captured_mass = mass;
    out.measurement_times = std::move(times);
    return out;
}

DualRailDistribution dual_rail_success_distribution(const AmplitudeTable& table, double tau,
                                                    long k_max) {
    require_positive_tau(tau);
    if (k_max < 1) throw std::invalid_argument("protocols: k_max must be positive");
    std::vector<double> times(static_cast<size_t>(k_max));
    for (long k = 1; k <= k_max; ++k) times[k - 1] = static_cast<double>(k) * tau;
    return dual_rail_distribution_at_times(table, std::move(times));
}

namespace {

constexpr double kMassGate = 0.999;

double gated_rate(const DualRailDistribution& dist) {
    if (dist.captured_mass < kMassGate)
        throw UnconvergedSeriesError(
            "protocols: truncated dual-rail series captured only " +
                std::to_string(dist.captured_mass) + " of the success probability",
            dist.captured_mass);
    return 1.0 / dist.expected_time();
}

}  // namespace

double dual_rail_rate(const AmplitudeTable& table, double tau, long k_max, Feedback feedback) {
    const double r = gated_rate(dual_rail_success_distribution(table, tau, k_max));
    return feedback == Feedback::Quantum ? 0.5 * r : r;
}

TiltedRateEstimate dual_rail_tilted_rate(const AmplitudeTable& table, double tau, double epsilon,
                                         long k_max, int realizations, std::uint64_t seed) {
    ProtocolConfig cfg;
    cfg.protocol = Protocol::DualRail;
    cfg.tau = tau;
    cfg.epsilon = epsilon;
    cfg.k_max = k_max;
    cfg.realizations = realizations;
    cfg.validate();

    std::vector<double> rates;
    rates.reserve(realizations);
    int unconverged = 0;
    double last_mass = 0.0;
    for (int rep = 0; rep < realizations; ++rep) {
        SplitRng rng(seed, static_cast<std::uint64_t>(rep));
        std::vector<double> times(static_cast<size_t>(k_max));
        double drift = 0.0;
        for (long k = 1; k <= k_max; ++k) {
            if (epsilon > 0.0) drift += rng.uniform(-epsilon, epsilon);
            times[k - 1] = static_cast<double>(k) * tau + drift;
        }
        const auto dist = dual_rail_distribution_at_times(table, std::move(times));
        if (dist.captured_mass < kMassGate) {
            ++unconverged;
            last_mass = dist.captured_mass;
            continue;
        }
        rates.push_back(1.0 / dist.expected_time());
    }
    if (rates.empty())
        throw UnconvergedSeriesError(
            "protocols: every tilted realization failed the series mass gate", last_mass);

    // Mean centered on the first sample so identical realizations (the
    // epsilon = 0 case) reproduce the untilted rate exactly.
    const double r0 = rates.front();
    double shift_sum = 0.0;
    for (const double r : rates) shift_sum += r - r0;
    const double mean = r0 + shift_sum / static_cast<double>(rates.size());

    double var = 0.0;
    for (const double r : rates) var += (r - mean) * (r - mean);
    const double n = static_cast<double>(rates.size());
    const double std_error = rates.size() > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
    return {mean, std_error, static_cast<int>(rates.size()), unconverged};
}

}  // namespace spinchan
