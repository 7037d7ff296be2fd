#include "spinchan/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "spinchan/errors.hpp"

namespace spinchan {

void validate(const ChainSpec& spec) {
    if (spec.n_spins < 2)
        throw std::invalid_argument("chain: n_spins must be at least 2, got " +
                                    std::to_string(spec.n_spins));
    if (spec.model == ChainModel::XyzPair && spec.n_spins != 2)
        throw std::invalid_argument("chain: the XYZ pair model is defined for exactly 2 spins");
    if (!std::isfinite(spec.j_coupling) || spec.j_coupling == 0.0)
        throw std::invalid_argument("chain: j_coupling must be finite and nonzero");
    if (!std::isfinite(spec.delta))
        throw std::invalid_argument("chain: delta must be finite");
}

std::vector<double> SymTridiagonal::dense() const {
    const int n = size();
    std::vector<double> m(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        m[static_cast<size_t>(i) * n + i] = diagonal[i];
        if (i + 1 < n) {
            m[static_cast<size_t>(i) * n + i + 1] = off_diagonal[i];
            m[static_cast<size_t>(i + 1) * n + i] = off_diagonal[i];
        }
    }
    return m;
}

SymTridiagonal build_single_excitation_hamiltonian(const ChainSpec& spec) {
    validate(spec);
    const int n = spec.n_spins;
    const double j = spec.j_coupling;
    SymTridiagonal h;
    h.diagonal.assign(n, 0.0);
    h.off_diagonal.assign(n - 1, 0.0);

    switch (spec.model) {
        case ChainModel::XyzPair:
            // <1|H|2> = 2J from the flip-flop term; sigma^z sigma^z is -Delta
            // on both one-excitation states (a constant shift).
            h.diagonal[0] = h.diagonal[1] = -spec.delta;
            h.off_diagonal[0] = 2.0 * j;
            break;
        case ChainModel::HeisenbergOpen:
            // -J sum_{b=1}^{N-1} sigma_b . sigma_{b+1}:  hopping -2J plus a
            // zz diagonal that counts bonds not touching the excited site.
            for (int site = 0; site < n; ++site) {
                const int degree = (site == 0 || site == n - 1) ? 1 : 2;
                h.diagonal[site] = -j * static_cast<double>((n - 1) - 2 * degree);
            }
            for (int b = 0; b + 1 < n; ++b) h.off_diagonal[b] = -2.0 * j;
            break;
    }
    return h;
}

namespace {

// Implicit-shift QL iteration for a symmetric tridiagonal matrix, with plane
// rotations accumulated into z (row-major n x n, initialized to identity).
// On return d holds the eigenvalues and column k of z the k-th eigenvector.
void ql_implicit_shift(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z,
                       int n) {
    constexpr int kMaxSweeps = 50;
    if (n < 2) return;
    e.push_back(0.0);  // sentinel so e[m] is defined for m = n-1
    for (int l = 0; l < n; ++l) {
        int sweeps = 0;
        while (true) {
            int m = l;
            for (; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m == l) break;
            if (++sweeps > kMaxSweeps)
                throw NumericalError("chain: tridiagonal QL did not converge for eigenvalue " +
                                     std::to_string(l) + " after " + std::to_string(kMaxSweeps) +
                                     " sweeps (n = " + std::to_string(n) + ")");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0;
            double c = 1.0;
            double p = 0.0;
            int i = m - 1;
            for (; i >= l; --i) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {  // rotation annihilated early; restart the sweep
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for (int k = 0; k < n; ++k) {
                    f = z[static_cast<size_t>(k) * n + i + 1];
                    z[static_cast<size_t>(k) * n + i + 1] =
                        s * z[static_cast<size_t>(k) * n + i] + c * f;
                    z[static_cast<size_t>(k) * n + i] =
                        c * z[static_cast<size_t>(k) * n + i] - s * f;
                }
            }
            if (r == 0.0 && i >= l) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    e.pop_back();
}

void sort_modes_ascending(std::vector<double>& d, std::vector<double>& z, int n) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });
    std::vector<double> d2(n);
    std::vector<double> z2(z.size());
    for (int k = 0; k < n; ++k) {
        d2[k] = d[order[k]];
        for (int row = 0; row < n; ++row)
            z2[static_cast<size_t>(row) * n + k] = z[static_cast<size_t>(row) * n + order[k]];
    }
    d.swap(d2);
    z.swap(z2);
}

}  // namespace

AmplitudeTable AmplitudeTable::diagonalize(const ChainSpec& spec) {
    return from_tridiagonal(spec, build_single_excitation_hamiltonian(spec));
}

AmplitudeTable AmplitudeTable::from_tridiagonal(const ChainSpec& spec, SymTridiagonal h) {
    validate(spec);
    const int n = h.size();
    if (n != spec.n_spins || static_cast<int>(h.off_diagonal.size()) != n - 1)
        throw std::invalid_argument("chain: tridiagonal size does not match the spec");

    std::vector<double> d = h.diagonal;
    std::vector<double> e = h.off_diagonal;
    std::vector<double> z(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) z[static_cast<size_t>(i) * n + i] = 1.0;

    ql_implicit_shift(d, e, z, n);
    sort_modes_ascending(d, z, n);

    // Invariant audit: V^T V = 1 and V diag(lambda) V^T = H, both to 1e-12.
    double max_ortho = 0.0;
    double max_recon = 0.0;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            double dot = 0.0;
            double rec = 0.0;
            for (int k = 0; k < n; ++k) {
                dot += z[static_cast<size_t>(k) * n + a] * z[static_cast<size_t>(k) * n + b];
                rec += z[static_cast<size_t>(a) * n + k] * d[k] * z[static_cast<size_t>(b) * n + k];
            }
            max_ortho = std::max(max_ortho, std::abs(dot - (a == b ? 1.0 : 0.0)));
            double href = 0.0;
            if (a == b) href = h.diagonal[a];
            else if (std::abs(a - b) == 1) href = h.off_diagonal[std::min(a, b)];
            max_recon = std::max(max_recon, std::abs(rec - href));
        }
    }
    const double scale = std::max(1.0, std::abs(spec.j_coupling) + std::abs(spec.delta));
    if (max_ortho > 1e-12 || max_recon > 1e-12 * scale)
        throw NumericalError("chain: eigendecomposition failed invariant audit (orthogonality " +
                             std::to_string(max_ortho) + ", reconstruction " +
                             std::to_string(max_recon) + ")");

    AmplitudeTable table;
    table.spec_ = spec;
    table.n_ = n;
    table.eigenvalues_ = std::move(d);
    table.modes_ = std::move(z);
    return table;
}

double AmplitudeTable::mode_component(int site, int mode) const {
    if (site < 1 || site > n_ || mode < 0 || mode >= n_)
        throw std::invalid_argument("chain: mode_component index out of range");
    return modes_[static_cast<size_t>(site - 1) * n_ + mode];
}

std::span<const double> AmplitudeTable::site_modes(int site) const {
    if (site < 1 || site > n_)
        throw std::invalid_argument("chain: site index out of range");
    return {modes_.data() + static_cast<size_t>(site - 1) * n_, static_cast<size_t>(n_)};
}

std::complex<double> AmplitudeTable::amplitude(int from_site, int to_site, double t) const {
    if (from_site < 1 || from_site > n_ || to_site < 1 || to_site > n_)
        throw std::invalid_argument("chain: site index out of range (sites are 1.." +
                                    std::to_string(n_) + ")");
    if (!std::isfinite(t)) throw std::invalid_argument("chain: time must be finite");
    const double* vm = modes_.data() + static_cast<size_t>(from_site - 1) * n_;
    const double* vn = modes_.data() + static_cast<size_t>(to_site - 1) * n_;
    std::complex<double> g{0.0, 0.0};
    for (int k = 0; k < n_; ++k)
        g += vm[k] * vn[k] * std::polar(1.0, -eigenvalues_[k] * t);
    return g;
}

double AmplitudeTable::transfer_probability(double t) const {
    return std::norm(amplitude(1, n_, t));
}

}  // namespace spinchan
