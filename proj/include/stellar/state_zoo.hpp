#ifndef STELLAR_STATE_ZOO_HPP
#define STELLAR_STATE_ZOO_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "stellar/errors.hpp"
#include "stellar/fock_state.hpp"
#include "stellar/gaussian.hpp"

namespace stellar {

// All constructors fix the quadrature convention x = (a + a^dag)/sqrt(2),
// so the vacuum wavefunction is pi^{-1/4} exp(-x^2/2). Cubicity values and
// GKP grid spacings depend on this choice.

/// |n>.
inline FockState make_fock(int n, int cutoff = defaults::cutoff_single_mode) {
    if (n < 0 || n > cutoff) throw parameter_error("make_fock: n outside [0, cutoff]");
    std::vector<cplx> a(static_cast<std::size_t>(cutoff) + 1, cplx(0.0));
    a[static_cast<std::size_t>(n)] = 1.0;
    return FockState(1, cutoff, std::move(a));
}

/// Coherent state |alpha>, log-space Poisson amplitudes.
inline FockState make_coherent(cplx alpha, int cutoff = defaults::cutoff_single_mode) {
    std::vector<cplx> a(static_cast<std::size_t>(cutoff) + 1);
    double captured = 0.0;
    for (int n = 0; n <= cutoff; ++n) {
        if (alpha == cplx(0.0)) {
            a[static_cast<std::size_t>(n)] = n == 0 ? 1.0 : 0.0;
        } else {
            const double mag = std::exp(n * std::log(std::abs(alpha)) -
                                        0.5 * std::lgamma(n + 1.0) - std::norm(alpha) / 2.0);
            a[static_cast<std::size_t>(n)] = mag * std::pow(alpha / std::abs(alpha), n);
        }
        captured += std::norm(a[static_cast<std::size_t>(n)]);
    }
    return FockState(1, cutoff, std::move(a), std::max(0.0, 1.0 - captured));
}

/// Cat state |alpha> + parity * |-alpha>, real alpha > 0; odd cats keep only
/// odd Fock levels.
inline FockState make_cat(double alpha, int parity,
                          int cutoff = defaults::cutoff_single_mode) {
    if (alpha <= 0.0) throw parameter_error("make_cat: alpha must be positive");
    if (parity != 1 && parity != -1) throw parameter_error("make_cat: parity must be +-1");
    std::vector<cplx> a(static_cast<std::size_t>(cutoff) + 1, cplx(0.0));
    const double la = std::log(alpha);
    double captured = 0.0;
    for (int n = parity == 1 ? 0 : 1; n <= cutoff; n += 2) {
        const double mag =
            std::exp(n * la - 0.5 * std::lgamma(n + 1.0) - alpha * alpha / 2.0);
        a[static_cast<std::size_t>(n)] = 2.0 * mag;
        captured += std::norm(a[static_cast<std::size_t>(n)]);
    }
    // untruncated squared norm of (|a> + p|-a>): 2 (1 + p e^{-2 a^2})
    const double full = 2.0 * (1.0 + parity * std::exp(-2.0 * alpha * alpha));
    if (captured < 1e-280)
        throw degenerate_error("make_cat: normalization underflow (odd cat, alpha -> 0)");
    return FockState(1, cutoff, std::move(a), std::clamp(1.0 - captured / full, 0.0, 1.0));
}

/// Finite-energy square-grid GKP logical 0: the photon-number envelope
/// e^{-Delta^2 n} applied to the ideal position comb at x = 2 sqrt(pi) s,
/// c_n = e^{-Delta^2 n} sum_s u_n(2 sqrt(pi) s). Even-n support. The peak
/// window keeps every comb point with relative envelope weight > 1e-12.
/// Tail mass above the cutoff is estimated against a long reference
/// expansion and recorded as norm_leak; it must stay below tail_tol.
inline FockState make_gkp(double delta, int logical = 0, int cutoff = 300,
                          double tail_tol = 1e-2) {
    if (!(delta > 0.0 && delta < 1.0)) throw parameter_error("make_gkp: delta outside (0,1)");
    if (logical != 0) throw parameter_error("make_gkp: only logical 0 is implemented");
    const int smax = static_cast<int>(std::ceil(1.6 / delta)) + 2;
    const int n_ref = cutoff + 900;
    Eigen::VectorXd xs(2 * smax + 1);
    for (int s = -smax; s <= smax; ++s) xs(s + smax) = 2.0 * std::sqrt(M_PI) * s;
    Eigen::MatrixXd U = hermite_functions(n_ref, xs);
    Eigen::VectorXd c = U.rowwise().sum();
    for (int n = 0; n <= n_ref; ++n) c(n) *= std::exp(-delta * delta * n);
    const double total = c.squaredNorm();
    const double head = c.head(cutoff + 1).squaredNorm();
    const double leak = std::clamp(1.0 - head / total, 0.0, 1.0);
    if (leak > tail_tol)
        throw truncation_error("make_gkp: mass above cutoff exceeds tail tolerance", leak);
    std::vector<cplx> a(static_cast<std::size_t>(cutoff) + 1);
    for (int n = 0; n <= cutoff; ++n) a[static_cast<std::size_t>(n)] = c(n);
    return FockState(1, cutoff, std::move(a), leak);
}

namespace detail {

/// Crops a padded-construction vector to the target cutoff, recording the
/// cropped mass as leak.
inline FockState crop_padded(const Eigen::VectorXcd& big, int cutoff, double leak_tol) {
    const double total = big.squaredNorm();
    const double head = big.head(cutoff + 1).squaredNorm();
    const double leak = std::clamp(1.0 - head / total, 0.0, 1.0);
    if (leak > leak_tol)
        throw truncation_error("state construction: mass above cutoff exceeds tolerance",
                               leak);
    std::vector<cplx> a(big.data(), big.data() + cutoff + 1);
    return FockState(1, cutoff, std::move(a), leak);
}

} // namespace detail

/// exp(t a^dag^3 - conj(t) a^3)|0>, built by exponentiating the truncated
/// generator at cutoff+pad and cropping. Support on n = 0 mod 3. These
/// states have slowly decaying photon-number tails (about 1e-3 above n=60
/// at t=0.15), so the default crop tolerance is loose and the actual crop
/// is recorded as norm_leak.
inline FockState make_trisqueezed(cplx t, int cutoff = defaults::cutoff_single_mode,
                                  int pad = 20, double leak_tol = 1e-2) {
    const int dim = cutoff + 1 + pad;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    Eigen::MatrixXcd ad = a.adjoint();
    Eigen::MatrixXcd gen = t * ad * ad * ad - std::conj(t) * a * a * a;
    Eigen::VectorXcd big = gen.exp().col(0);
    return detail::crop_padded(big, cutoff, leak_tol);
}

/// exp(i c x^3) S(r)|0>, x = (a + a^dag)/sqrt(2). Padded construction as for
/// the trisqueezed state.
inline FockState make_cubic_phase(double c, double r,
                                  int cutoff = defaults::cutoff_single_mode, int pad = 20,
                                  double leak_tol = 1e-2) {
    if (std::abs(r) > defaults::r_max)
        throw parameter_error("make_cubic_phase: |r| exceeds r_max");
    const int dim = cutoff + 1 + pad;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    Eigen::MatrixXcd x = (a + a.adjoint()) / std::sqrt(2.0);
    Eigen::MatrixXcd gen = cplx(0.0, c) * x * x * x;
    Eigen::VectorXcd sq = squeezing_matrix(r, 0.0, dim - 1).col(0);
    Eigen::VectorXcd big = gen.exp() * sq;
    return detail::crop_padded(big, cutoff, leak_tol);
}

/// Normalized superposition sum_i amp_i |n_i>.
inline FockState make_superposition(const std::vector<std::pair<cplx, int>>& terms,
                                    int cutoff = defaults::cutoff_single_mode) {
    if (terms.empty()) throw spec_error("make_superposition: empty term list");
    std::vector<cplx> a(static_cast<std::size_t>(cutoff) + 1, cplx(0.0));
    for (const auto& [amp, n] : terms) {
        if (n < 0 || n > cutoff)
            throw parameter_error("make_superposition: index outside [0, cutoff]");
        a[static_cast<std::size_t>(n)] += amp;
    }
    return FockState(1, cutoff, std::move(a));
}

/// Fock-basis coefficient list c_0..c_k over consecutive levels.
inline FockState make_binomial(const std::vector<cplx>& coeffs,
                               int cutoff = defaults::cutoff_single_mode) {
    if (coeffs.empty()) throw spec_error("make_binomial: empty coefficient list");
    std::vector<std::pair<cplx, int>> terms;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        terms.emplace_back(coeffs[i], static_cast<int>(i));
    return make_superposition(terms, cutoff);
}

/// Parameterized state family with its known stellar rank (nullopt = infinite).
struct StateSpec {
    std::string family; // fock | coherent | cat | gkp | trisqueezed | cubic_phase |
                        // binomial | superposition
    int fock_n = 0;
    cplx alpha{0.0, 0.0};
    int parity = -1;
    double delta = 0.1;
    int logical = 0;
    cplx t{0.0, 0.0};
    double cubicity = 0.0;
    double r = 0.0;
    std::vector<std::pair<cplx, int>> terms;
    std::optional<int> cutoff_override;

    std::optional<int> declared_rank() const {
        if (family == "fock") return fock_n;
        if (family == "coherent") return 0;
        if (family == "binomial" || family == "superposition") {
            int top = 0;
            for (const auto& [amp, n] : terms)
                if (amp != cplx(0.0)) top = std::max(top, n);
            return top;
        }
        return std::nullopt; // cat, gkp, trisqueezed, cubic_phase
    }

    int cutoff() const {
        if (cutoff_override) return *cutoff_override;
        if (family == "gkp") return 300;
        if (family == "trisqueezed" || family == "cubic_phase") return 80;
        if (family == "cat") {
            // mean photon number alpha^2 plus a tail margin
            const double aa = alpha.real() * alpha.real();
            return std::max(defaults::cutoff_single_mode,
                            static_cast<int>(std::ceil(aa + 8.0 * std::sqrt(aa) + 20.0)));
        }
        return defaults::cutoff_single_mode;
    }

    FockState build() const {
        const int N = cutoff();
        if (family == "fock") return make_fock(fock_n, N);
        if (family == "coherent") return make_coherent(alpha, N);
        if (family == "cat") return make_cat(alpha.real(), parity, N);
        if (family == "gkp") return make_gkp(delta, logical, N);
        if (family == "trisqueezed") return make_trisqueezed(t, N);
        if (family == "cubic_phase") return make_cubic_phase(cubicity, r, N);
        if (family == "binomial" || family == "superposition")
            return make_superposition(terms, N);
        throw spec_error("StateSpec: unknown family '" + family + "'");
    }
};

} // namespace stellar

#endif
