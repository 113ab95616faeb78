#ifndef STELLAR_WIGNER_HPP
#define STELLAR_WIGNER_HPP

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "stellar/errors.hpp"
#include "stellar/fock_state.hpp"
#include "stellar/profile.hpp"

namespace stellar {

struct WignerOptions {
    double extent = 0.0; // 0 = auto: max(6, 4 sqrt(<n>+1))
    int resolution = 801;
    int threads = 0;
    double quadrature_tol = 1e-4;
};

/// Wigner function sampled on [-L, L]^2 in (x, p), normalized so that
/// the full integral is 1.
struct WignerGrid {
    double extent = 0.0;
    int resolution = 0;
    Eigen::MatrixXd values; // values(i, j) = W(x_i, p_j)

    double step() const { return 2.0 * extent / (resolution - 1); }

    double integral(bool absolute = false) const {
        // Composite Simpson in both axes (resolution is odd).
        const int n = resolution;
        auto w1 = [n](int i) {
            if (i == 0 || i == n - 1) return 1.0;
            return i % 2 == 1 ? 4.0 : 2.0;
        };
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            for (int j = 0; j < n; ++j)
                row += w1(j) * (absolute ? std::abs(values(i, j)) : values(i, j));
            s += w1(i) * row;
        }
        const double h = step();
        return s * h * h / 9.0;
    }
};

namespace detail {

inline double mean_photon_number(const FockState& psi) {
    const IndexTable& t = psi.table();
    double mean = 0.0;
    for (int s = 0; s <= t.max_total(); ++s)
        for (std::size_t flat : t.stratum(s)) mean += s * std::norm(psi.amps()[flat]);
    return mean;
}

/// W(x, p) = e^{-x^2-p^2}/pi * sum over d of 2 Re[(sqrt2 (x-ip))^d
/// sum_n A[d][n] L_n^d(2(x^2+p^2))], with the coefficient table
/// A[d][n] = c_{n+d} conj(c_n) (-1)^n sqrt(n!/(n+d)!) folding the state in.
inline double wigner_point(const std::vector<std::vector<cplx>>& A, double x, double p) {
    const double u = 2.0 * (x * x + p * p);
    const cplx z = std::sqrt(2.0) * cplx(x, -p);
    const int top = static_cast<int>(A.size()) - 1;
    cplx acc(0.0);
    cplx zd(1.0);
    for (int d = 0; d <= top; ++d) {
        const std::vector<cplx>& row = A[static_cast<std::size_t>(d)];
        double Lp = 1.0, L = 1.0 + d - u; // L_0^d, L_1^d
        cplx inner = row[0] * Lp;
        if (row.size() > 1) inner += row[1] * L;
        for (int n = 1; n + 1 < static_cast<int>(row.size()); ++n) {
            const double Ln = ((2.0 * n + 1.0 + d - u) * L - (n + d) * Lp) / (n + 1.0);
            Lp = L;
            L = Ln;
            inner += row[static_cast<std::size_t>(n) + 1] * L;
        }
        acc += (d == 0 ? 0.5 : 1.0) * zd * inner; // d=0 halved: added twice below
        zd *= z;
    }
    return 2.0 * acc.real() * std::exp(-0.5 * u) / M_PI;
}

inline std::vector<std::vector<cplx>> wigner_coeffs(const FockState& psi) {
    const std::vector<cplx>& c = psi.amps();
    int top = 0;
    for (std::size_t n = 0; n < c.size(); ++n)
        if (std::abs(c[n]) > 1e-14) top = static_cast<int>(n);
    std::vector<std::vector<cplx>> A(static_cast<std::size_t>(top) + 1);
    for (int d = 0; d <= top; ++d) {
        A[static_cast<std::size_t>(d)].resize(static_cast<std::size_t>(top - d) + 1);
        double ratio = 1.0; // sqrt(n!/(n+d)!)
        for (int j = 1; j <= d; ++j) ratio /= std::sqrt(static_cast<double>(j));
        for (int n = 0; n <= top - d; ++n) {
            A[static_cast<std::size_t>(d)][static_cast<std::size_t>(n)] =
                c[static_cast<std::size_t>(n + d)] * std::conj(c[static_cast<std::size_t>(n)]) *
                ((n % 2 == 0) ? 1.0 : -1.0) * ratio;
            ratio *= std::sqrt((n + 1.0) / (n + 1.0 + d));
        }
    }
    return A;
}

} // namespace detail

inline WignerGrid wigner(const FockState& psi, const WignerOptions& opts = {}) {
    if (psi.modes() != 1)
        throw dimension_error("wigner: single-mode states only; use product additivity for WLN");
    if (opts.resolution < 3 || opts.resolution % 2 == 0)
        throw parameter_error("wigner: resolution must be odd and >= 3");
    const auto A = detail::wigner_coeffs(psi);
    double L = opts.extent > 0.0
                   ? opts.extent
                   : std::max(6.0, 4.0 * std::sqrt(detail::mean_photon_number(psi) + 1.0));
    const int threads = detail::resolve_threads(opts.threads);
    for (int attempt = 0;; ++attempt) {
        WignerGrid g;
        g.extent = L;
        g.resolution = opts.resolution;
        g.values.resize(opts.resolution, opts.resolution);
        const double h = g.step();
        detail::parallel_for(opts.resolution, threads, [&](int i) {
            const double x = -L + h * i;
            for (int j = 0; j < opts.resolution; ++j)
                g.values(i, j) = detail::wigner_point(A, x, -L + h * j);
        });
        double edge = 0.0;
        for (int i = 0; i < opts.resolution; ++i)
            edge = std::max({edge, std::abs(g.values(i, 0)), std::abs(g.values(0, i)),
                             std::abs(g.values(i, opts.resolution - 1)),
                             std::abs(g.values(opts.resolution - 1, i))});
        if (edge < 1e-10 || opts.extent > 0.0 || attempt >= 3) {
            if (std::abs(g.integral() - 1.0) > opts.quadrature_tol)
                throw precision_error("wigner: grid integral deviates from 1 beyond tolerance");
            return g;
        }
        L *= 1.5; // tails still visible at the boundary; widen and retry
    }
}

/// Wigner logarithmic negativity, ln of the integral of |W| (natural log,
/// matched against known single-photon-pair references). Convergence is
/// checked by doubling the grid resolution.
inline double wln(const FockState& psi, const WignerOptions& opts = {}) {
    WignerGrid coarse = wigner(psi, opts);
    WignerOptions fine_opts = opts;
    fine_opts.extent = coarse.extent;
    fine_opts.resolution = 2 * coarse.resolution - 1;
    WignerGrid fine = wigner(psi, fine_opts);
    const double v1 = std::log(coarse.integral(true));
    const double v2 = std::log(fine.integral(true));
    if (std::abs(v2 - v1) > 1e-3)
        throw precision_error("wln: quadrature did not converge under resolution doubling");
    return std::max(0.0, v2);
}

/// WLN of a product of single-mode states: sum of the factors' WLNs.
inline double wln_product(const std::vector<FockState>& factors, const WignerOptions& opts = {}) {
    if (factors.empty()) throw dimension_error("wln_product: empty factor list");
    double s = 0.0;
    for (const FockState& f : factors) s += wln(f, opts);
    return s;
}

} // namespace stellar

#endif
