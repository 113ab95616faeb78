#ifndef STELLAR_TEST_ORACLES_HPP
#define STELLAR_TEST_ORACLES_HPP

// Independent small-scale references used only by the test suite. These are
// deliberately written against dense truncated generators and brute-force
// series, not the library's production recurrences.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "stellar/fock_state.hpp"

namespace oracles {

using stellar::cplx;

inline Eigen::MatrixXcd annihilation(int dim) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

/// exp(alpha a^dag - conj(alpha) a) on a padded space, cropped to cutoff+1.
inline Eigen::MatrixXcd displacement_expm(cplx alpha, int cutoff, int pad = 60) {
    const int dim = cutoff + 1 + pad;
    Eigen::MatrixXcd a = annihilation(dim);
    Eigen::MatrixXcd gen = alpha * a.adjoint() - std::conj(alpha) * a;
    return gen.exp().topLeftCorner(cutoff + 1, cutoff + 1);
}

/// exp((xi a^dag^2 - conj(xi) a^2)/2), xi = r e^{i phase}, padded and cropped.
inline Eigen::MatrixXcd squeezing_expm(double r, double phase, int cutoff, int pad = 120) {
    const int dim = cutoff + 1 + pad;
    Eigen::MatrixXcd a = annihilation(dim);
    cplx xi = std::polar(r, phase);
    Eigen::MatrixXcd ad2 = a.adjoint() * a.adjoint();
    Eigen::MatrixXcd gen = 0.5 * (xi * ad2 - std::conj(xi) * a * a);
    return gen.exp().topLeftCorner(cutoff + 1, cutoff + 1);
}

/// Two-mode exp(theta (a1^dag a2 - a1 a2^dag)) as a dense matrix over the
/// row-major (n1, n2) basis with per-mode dimension cutoff+1.
inline Eigen::MatrixXcd beamsplitter_expm(double theta, int cutoff) {
    const int d = cutoff + 1;
    Eigen::MatrixXcd a1 = Eigen::MatrixXcd::Zero(d * d, d * d);
    Eigen::MatrixXcd a2 = Eigen::MatrixXcd::Zero(d * d, d * d);
    Eigen::MatrixXcd single = annihilation(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            for (int k = 0; k < d; ++k) {
                if (single(i, k) != cplx(0.0))
                    a1(i * d + j, k * d + j) = single(i, k);
                if (single(j, k) != cplx(0.0))
                    a2(i * d + j, i * d + k) = single(j, k);
            }
        }
    Eigen::MatrixXcd gen = theta * (a1.adjoint() * a2 - a1 * a2.adjoint());
    return gen.exp();
}

/// Coherent-state Fock amplitudes alpha^n e^{-|alpha|^2/2} / sqrt(n!),
/// computed in log space.
inline std::vector<cplx> coherent_amps(cplx alpha, int cutoff) {
    std::vector<cplx> out(static_cast<std::size_t>(cutoff) + 1);
    const double la = std::abs(alpha) > 0 ? std::log(std::abs(alpha)) : 0.0;
    const double aa = std::norm(alpha);
    for (int n = 0; n <= cutoff; ++n) {
        if (alpha == cplx(0.0)) {
            out[static_cast<std::size_t>(n)] = n == 0 ? 1.0 : 0.0;
            continue;
        }
        const double mag = std::exp(n * la - 0.5 * std::lgamma(n + 1.0) - aa / 2.0);
        out[static_cast<std::size_t>(n)] = mag * std::pow(alpha / std::abs(alpha), n);
    }
    return out;
}

/// Fock amplitudes of S(r) D(beta) |0> (real beta, real r) from the
/// position-space wavefunction: displacing gives a unit-width Gaussian at
/// sqrt(2) beta, squeezing rescales x by e^{-r}, so
/// psi(x) = (pi s^2)^{-1/4} exp(-(x - sqrt(2) beta s)^2 / (2 s^2)), s = e^r.
/// Evaluated by quadrature against Hermite functions.
inline std::vector<double> squeezed_coherent_amps(double r, double beta, int cutoff) {
    const double s = std::exp(r);
    const double mu = std::sqrt(2.0) * beta * s;
    const double L = std::sqrt(2.0 * cutoff + 1.0) * std::max(s, 1.0) + std::abs(mu) + 8.0;
    const int nx = 20001;
    std::vector<double> out(static_cast<std::size_t>(cutoff) + 1, 0.0);
    const double dx = 2.0 * L / (nx - 1);
    std::vector<double> u(static_cast<std::size_t>(cutoff) + 1);
    for (int i = 0; i < nx; ++i) {
        const double x = -L + i * dx;
        const double psi = std::pow(M_PI * s * s, -0.25) *
                           std::exp(-std::pow(x - mu, 2) / (2 * s * s));
        u[0] = std::pow(M_PI, -0.25) * std::exp(-x * x / 2);
        if (cutoff >= 1) u[1] = std::sqrt(2.0) * x * u[0];
        for (int k = 1; k < cutoff; ++k)
            u[static_cast<std::size_t>(k) + 1] =
                std::sqrt(2.0 / (k + 1)) * x * u[static_cast<std::size_t>(k)] -
                std::sqrt(double(k) / (k + 1)) * u[static_cast<std::size_t>(k) - 1];
        for (int n = 0; n <= cutoff; ++n) out[static_cast<std::size_t>(n)] += u[static_cast<std::size_t>(n)] * psi * dx;
    }
    return out;
}

} // namespace oracles

#endif
