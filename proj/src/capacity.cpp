#include "spinchan/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spinchan {

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("capacity: binary_entropy argument outside [0,1]: " +
                                    std::to_string(x));
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

ChannelEfficiency::ChannelEfficiency(double eta) {
    constexpr double kSlack = 1e-12;
    if (!(eta >= -kSlack && eta <= 1.0 + kSlack))
        throw std::invalid_argument("capacity: efficiency outside [0,1]: " + std::to_string(eta));
    eta_ = std::clamp(eta, 0.0, 1.0);
}

namespace {

// Maximize f over [0, 1]: coarse scan, then golden-section on the bracket
// around the best coarse point.  The objectives here are unimodal, but the
// scan guards against flat stretches; the best value seen anywhere wins.
template <typename F>
double maximize_on_unit_interval(const F& f) {
    constexpr int kCoarse = 1024;
    double best = f(0.0);
    int best_i = 0;
    for (int i = 1; i <= kCoarse; ++i) {
        const double v = f(static_cast<double>(i) / kCoarse);
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    double a = std::max(0.0, (best_i - 1.0) / kCoarse);
    double b = std::min(1.0, (best_i + 1.0) / kCoarse);
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > 1e-11) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
        best = std::max(best, std::max(f1, f2));
    }
    return best;
}

}  // namespace

double damping_capacity(ChannelEfficiency eta) {
    const double e = eta.value();
    if (e <= 0.5) return 0.0;
    const double q = maximize_on_unit_interval(
        [e](double p) { return binary_entropy(e * p) - binary_entropy((1.0 - e) * p); });
    return std::max(q, 0.0);  // clamp round-off near the eta = 1/2 threshold
}

double entanglement_assisted_capacity(ChannelEfficiency eta) {
    const double e = eta.value();
    const double q = maximize_on_unit_interval([e](double p) {
        return 0.5 * (binary_entropy(p) + binary_entropy(e * p) - binary_entropy((1.0 - e) * p));
    });
    return std::max(q, 0.0);
}

ChannelEfficiency eta_after_n_extra_swaps(ChannelEfficiency eta, int n) {
    if (n < 0) throw std::invalid_argument("capacity: extra swap count must be nonnegative");
    if (n == 0) return eta;
    // 1 - (1-eta)^(n+1), evaluated stably for eta near 0 and 1.
    return ChannelEfficiency(-std::expm1((n + 1) * std::log1p(-eta.value())));
}

}  // namespace spinchan
