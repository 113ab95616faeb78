#ifndef STELLAR_GAUSSIAN_HPP
#define STELLAR_GAUSSIAN_HPP

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stellar/errors.hpp"
#include "stellar/fock_state.hpp"

namespace stellar {

namespace defaults {
inline constexpr double r_max = 3.0;
inline constexpr double leak_tol = 1e-6;
} // namespace defaults

/// Hermite functions u_0..u_N evaluated at the given points; row k is u_k.
/// u_0 = pi^{-1/4} exp(-x^2/2), recurrence
/// u_{k+1} = sqrt(2/(k+1)) x u_k - sqrt(k/(k+1)) u_{k-1}.
inline Eigen::MatrixXd hermite_functions(int N, const Eigen::VectorXd& x) {
    Eigen::MatrixXd U(N + 1, x.size());
    U.row(0) = (-x.array().square() / 2.0).exp() * std::pow(M_PI, -0.25);
    if (N >= 1) U.row(1) = std::sqrt(2.0) * x.transpose().array() * U.row(0).array();
    for (int k = 1; k < N; ++k)
        U.row(k + 1) = std::sqrt(2.0 / (k + 1)) * x.transpose().array() * U.row(k).array() -
                       std::sqrt(double(k) / (k + 1)) * U.row(k - 1).array();
    return U;
}

/// Fock matrix of D(alpha) = exp(alpha a^dag - conj(alpha) a), entries
/// <m|D|n>. Built diagonal by diagonal with the associated-Laguerre
/// three-term recurrence, which stays accurate at large cutoffs where
/// column recurrences blow up.
inline Eigen::MatrixXcd displacement_matrix(cplx alpha, int cutoff) {
    const int N = cutoff;
    const double u = std::norm(alpha);
    if (u == 0.0) return Eigen::MatrixXcd::Identity(N + 1, N + 1);
    if (!std::isfinite(u)) throw parameter_error("displacement_matrix: non-finite alpha");
    Eigen::MatrixXcd M(N + 1, N + 1);
    const double la = std::log(std::abs(alpha));
    // upper==false fills <n+d|D|n> along diagonal d; upper==true fills
    // <n|D|n+d> which obeys the same recurrence with alpha -> -conj(alpha).
    for (int upper = 0; upper < 2; ++upper) {
        const cplx unit = (upper ? -std::conj(alpha) : alpha) / std::abs(alpha);
        for (int d = upper; d <= N; ++d) {
            const double lh0 = -u / 2.0 + d * la - 0.5 * std::lgamma(d + 1.0);
            cplx h_nm1 = 0.0;
            cplx h_n = std::exp(lh0) * std::pow(unit, d);
            (upper ? M(0, d) : M(d, 0)) = h_n;
            for (int n = 0; n < N - d; ++n) {
                const cplx h_np1 = ((2.0 * n + 1 + d - u) * h_n -
                                    std::sqrt(double(n) * (n + d)) * h_nm1) /
                                   std::sqrt(double(n + 1) * (n + 1 + d));
                h_nm1 = h_n;
                h_n = h_np1;
                (upper ? M(n + 1, d + n + 1) : M(d + n + 1, n + 1)) = h_n;
            }
        }
    }
    return M;
}

/// Diagonal of R(phi) = exp(i phi n_hat).
inline Eigen::VectorXcd rotation_phases(double phi, int cutoff) {
    Eigen::VectorXcd d(cutoff + 1);
    for (int n = 0; n <= cutoff; ++n) d(n) = std::polar(1.0, phi * n);
    return d;
}

inline Eigen::MatrixXcd rotation_matrix(double phi, int cutoff) {
    return rotation_phases(phi, cutoff).asDiagonal();
}

namespace detail {

/// Shared quadrature grid for squeezing integrals: the exact matrix element
/// <m|S(r)|n> = e^{-r/2} Int u_m(x) u_n(e^{-r} x) dx is evaluated by
/// trapezoid quadrature, which converges exponentially here because the
/// integrand is entire and Gaussian-decaying. Written with the compressed
/// argument on the high-index factor so every oscillation on the grid stays
/// at the base Hermite frequency sqrt(2N+1).
struct SqueezeGrid {
    Eigen::VectorXd x;
    double dx;
    SqueezeGrid(int N, double points_per_wave = 5.0) {
        const double L = std::sqrt(2.0 * N + 1.0) + 6.0;
        const double fmax = std::sqrt(2.0 * N + 1.0);
        int nx = static_cast<int>(2.0 * L * fmax * points_per_wave / (2.0 * M_PI)) | 1;
        if (nx < 129) nx = 129;
        x = Eigen::VectorXd::LinSpaced(nx, -L, L);
        dx = x(1) - x(0);
    }
};

/// Unscaled Hermite table on the squeeze grid, cached per cutoff; it is the
/// only r-independent part of the squeeze quadrature and dominates its cost.
struct SqueezeBase {
    SqueezeGrid grid;
    Eigen::MatrixXd U;
    explicit SqueezeBase(int N) : grid(N), U(hermite_functions(N, grid.x)) {}

    static std::shared_ptr<const SqueezeBase> get(int N) {
        static std::mutex mu;
        static std::map<int, std::weak_ptr<const SqueezeBase>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto& slot = cache[N];
        if (auto p = slot.lock()) return p;
        auto p = std::make_shared<const SqueezeBase>(N);
        slot = p;
        return p;
    }
};

} // namespace detail

/// w = S(r) v for real r, exact untruncated matrix elements acting on the
/// truncated vector. Mass of S(r)v above the cutoff shows up as norm loss.
inline Eigen::VectorXcd squeeze_apply(const Eigen::VectorXcd& v, double r) {
    const int N = static_cast<int>(v.size()) - 1;
    if (r == 0.0) return v;
    auto base = detail::SqueezeBase::get(N);
    const detail::SqueezeGrid& g = base->grid;
    const double s = std::exp(-std::abs(r));
    const Eigen::MatrixXd Us = hermite_functions(N, (s * g.x.array()).matrix());
    // r >= 0: w_m = e^{-r/2} Int u_m(x) vtilde(e^{-r} x) dx
    // r <  0: w_m = e^{ r/2} Int u_m(e^{r} x) vtilde(x) dx  (same integral,
    // substituted so the scale factor stays <= 1 on the grid)
    if (r > 0.0) {
        Eigen::VectorXcd vt = Us.transpose() * v;
        return std::exp(-r / 2.0) * g.dx * (base->U * vt);
    }
    Eigen::VectorXcd vt = base->U.transpose() * v;
    return std::exp(r / 2.0) * g.dx * (Us * vt);
}

/// Fock matrix of S(xi) = exp((xi a^dag^2 - conj(xi) a^2)/2), xi = r e^{i phase},
/// entries <m|S|n>. Real-squeezing part via the Hermite quadrature above
/// (exact elements, stable at any cutoff in range); the phase enters through
/// S(r e^{i phase}) = R(phase/2) S(r) R(-phase/2).
inline Eigen::MatrixXcd squeezing_matrix(double r, double phase, int cutoff) {
    if (std::abs(r) > defaults::r_max)
        throw parameter_error("squeezing_matrix: |r| exceeds r_max");
    const int N = cutoff;
    if (r == 0.0) return Eigen::MatrixXcd::Identity(N + 1, N + 1);
    auto base = detail::SqueezeBase::get(N);
    const detail::SqueezeGrid& g = base->grid;
    const double s = std::exp(-std::abs(r));
    const Eigen::MatrixXd Us = hermite_functions(N, (s * g.x.array()).matrix());
    Eigen::MatrixXd Sr(N + 1, N + 1);
    if (r > 0.0)
        Sr = std::exp(-r / 2.0) * g.dx * (base->U * Us.transpose());
    else
        Sr = std::exp(r / 2.0) * g.dx * (Us * base->U.transpose());
    if (phase == 0.0) return Sr.cast<cplx>();
    const Eigen::VectorXcd ph = rotation_phases(phase / 2.0, N);
    return ph.asDiagonal() * Sr.cast<cplx>() * ph.conjugate().asDiagonal();
}

namespace detail {

/// Applies a dense single-mode matrix along one tensor leg of a flat
/// row-major amplitude vector.
inline void apply_mode_matrix(std::vector<cplx>& amps, const IndexTable& t, int mode,
                              const Eigen::MatrixXcd& M) {
    const int N = t.cutoff();
    const std::size_t stride = t.stride(mode);
    const std::size_t block = stride * static_cast<std::size_t>(N + 1);
    Eigen::VectorXcd in(N + 1), out(N + 1);
    for (std::size_t base = 0; base < amps.size(); base += block)
        for (std::size_t off = 0; off < stride; ++off) {
            const std::size_t start = base + off;
            for (int n = 0; n <= N; ++n) in(n) = amps[start + stride * n];
            out.noalias() = M * in;
            for (int n = 0; n <= N; ++n) amps[start + stride * n] = out(n);
        }
}

inline void apply_mode_phases(std::vector<cplx>& amps, const IndexTable& t, int mode,
                              const Eigen::VectorXcd& d) {
    const int N = t.cutoff();
    const std::size_t stride = t.stride(mode);
    const std::size_t block = stride * static_cast<std::size_t>(N + 1);
    for (std::size_t base = 0; base < amps.size(); base += block)
        for (std::size_t off = 0; off < stride; ++off)
            for (int n = 0; n <= N; ++n) amps[base + off + stride * n] *= d(n);
}

inline void apply_mode_squeeze(std::vector<cplx>& amps, const IndexTable& t, int mode,
                               double r) {
    if (r == 0.0) return;
    const int N = t.cutoff();
    const std::size_t stride = t.stride(mode);
    const std::size_t block = stride * static_cast<std::size_t>(N + 1);
    Eigen::VectorXcd in(N + 1);
    for (std::size_t base = 0; base < amps.size(); base += block)
        for (std::size_t off = 0; off < stride; ++off) {
            const std::size_t start = base + off;
            for (int n = 0; n <= N; ++n) in(n) = amps[start + stride * n];
            Eigen::VectorXcd out = squeeze_apply(in, r);
            for (int n = 0; n <= N; ++n) amps[start + stride * n] = out(n);
        }
}

/// exp(lambda a_i a_j^dag) restricted to one total-photon line; q indexes
/// |n_i = s - q, n_j = q>. Triangular in increasing q, terminating series.
inline void line_exp_lower(std::vector<cplx>& line, double lambda) {
    const int len = static_cast<int>(line.size());
    const int s = len - 1;
    std::vector<cplx> out(line.size(), cplx(0.0));
    std::vector<cplx> cur = line;
    for (int k = 0; k < len; ++k) {
        bool nonzero = false;
        for (int q = 0; q < len; ++q) {
            out[q] += cur[q];
            if (cur[q] != cplx(0.0)) nonzero = true;
        }
        if (!nonzero || k == len - 1) break;
        std::vector<cplx> next(line.size(), cplx(0.0));
        for (int q = 0; q + 1 < len; ++q)
            next[q + 1] = cur[q] * (lambda / double(k + 1)) *
                          std::sqrt(double(s - q) * (q + 1));
        cur.swap(next);
    }
    line = out;
}

} // namespace detail

namespace detail {

/// In-place U_BS(theta) = exp(theta (a_i^dag a_j - a_i a_j^dag)) on a flat
/// amplitude vector. Applied per total-photon line through the SU(2)
/// disentangling
/// exp(theta(J+ - J-)) = exp(tan(theta) J+) (cos theta)^(-2 Jz) exp(-tan(theta) J-),
/// after reducing theta to |theta| <= pi/4 with quarter rotations
/// U(pi/2)|n_i, n_j> = (-1)^{n_i} |n_j, n_i> so tan stays <= 1.
inline void beamsplitter_amps(std::vector<cplx>& amps, const IndexTable& t, double theta,
                              int mode_i, int mode_j) {
    const int N = t.cutoff();
    // Quarter-turn reduction: theta = theta' + quarters * pi/2, |theta'| <= pi/4.
    double th = std::remainder(theta, 2.0 * M_PI);
    int quarters = static_cast<int>(std::lround(th / (M_PI / 2.0)));
    th -= quarters * (M_PI / 2.0);
    quarters = ((quarters % 4) + 4) % 4;

    const std::size_t si = t.stride(mode_i), sj = t.stride(mode_j);
    const std::size_t others = t.size() / (static_cast<std::size_t>(N + 1) * (N + 1));
    // Enumerate fiber bases: indices with n_i = n_j = 0.
    std::vector<std::size_t> bases;
    bases.reserve(others);
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
        const auto idx = t.unrank(flat);
        if (idx[static_cast<std::size_t>(mode_i)] == 0 &&
            idx[static_cast<std::size_t>(mode_j)] == 0)
            bases.push_back(flat);
    }

    const double tn = std::tan(th);
    const double cs = std::cos(th);
    std::vector<cplx> line;
    for (std::size_t base : bases) {
        // Quarter turns first: each maps (n_i, n_j) -> (n_j, n_i) with sign (-1)^{n_i}.
        for (int qturn = 0; qturn < quarters; ++qturn) {
            std::vector<cplx> tmp(static_cast<std::size_t>(N + 1) * (N + 1));
            for (int a = 0; a <= N; ++a)
                for (int b = 0; b <= N; ++b)
                    tmp[static_cast<std::size_t>(a) * (N + 1) + b] =
                        ((a % 2) ? -1.0 : 1.0) * amps[base + si * a + sj * b];
            for (int a = 0; a <= N; ++a)
                for (int b = 0; b <= N; ++b)
                    amps[base + si * b + sj * a] =
                        tmp[static_cast<std::size_t>(a) * (N + 1) + b];
        }
        if (th == 0.0) continue;
        for (int s = 1; s <= 2 * N; ++s) {
            const int q_lo = std::max(0, s - N), q_hi = std::min(N, s);
            const int len = q_hi - q_lo + 1;
            if (len <= 1 && s <= N) continue;
            line.assign(static_cast<std::size_t>(s) + 1, cplx(0.0));
            for (int q = q_lo; q <= q_hi; ++q)
                line[static_cast<std::size_t>(q)] = amps[base + si * (s - q) + sj * q];
            // exp(-tan J-): J- = a_i a_j^dag moves q -> q+1.
            detail::line_exp_lower(line, -tn);
            // (cos theta)^(-2 Jz), Jz = (n_i - n_j)/2: factor cos^{2q - s}.
            for (int q = 0; q <= s; ++q)
                line[static_cast<std::size_t>(q)] *= std::pow(cs, double(2 * q - s));
            // exp(tan J+): J+ = a_i^dag a_j moves q -> q-1; same routine on the
            // reversed line.
            std::reverse(line.begin(), line.end());
            detail::line_exp_lower(line, tn);
            std::reverse(line.begin(), line.end());
            for (int q = q_lo; q <= q_hi; ++q)
                amps[base + si * (s - q) + sj * q] = line[static_cast<std::size_t>(q)];
        }
    }
}

} // namespace detail

inline FockState beamsplitter_apply(double theta, const FockState& psi, int mode_i,
                                    int mode_j) {
    if (psi.modes() < 2 || mode_i == mode_j || mode_i < 0 || mode_j < 0 ||
        mode_i >= psi.modes() || mode_j >= psi.modes())
        throw dimension_error("beamsplitter_apply: invalid mode pair");
    std::vector<cplx> amps = psi.amps();
    detail::beamsplitter_amps(amps, psi.table(), theta, mode_i, mode_j);
    double n2 = 0.0;
    for (const cplx& v : amps) n2 += std::norm(v);
    const double leak = 1.0 - (1.0 - psi.norm_leak()) * std::min(1.0, n2 / psi.squared_norm());
    return FockState(psi.modes(), psi.cutoff(), std::move(amps), std::clamp(leak, 0.0, 1.0));
}

/// Gaussian unitary in the form G = S(r) D(alpha) U(passive).
///
/// Passive layout ("rect-givens-v1"): m input phases, then m(m-1)/2 Givens
/// units of (theta, phase-on-first-mode) walking the rectangular
/// nearest-neighbor mesh. Single mode: [phi]. Two modes:
/// [phi_1, phi_2, theta, phi_out] with phi_out on mode 0 after the splitter.
/// Total m^2 real parameters.
struct GaussianCircuit {
    int modes = 1;
    std::vector<double> passive;
    std::vector<cplx> alphas;
    std::vector<double> rs;

    static constexpr const char* mesh_id = "rect-givens-v1";

    static GaussianCircuit identity(int m) {
        GaussianCircuit g;
        g.modes = m;
        g.passive.assign(static_cast<std::size_t>(m) * m, 0.0);
        g.alphas.assign(static_cast<std::size_t>(m), cplx(0.0));
        g.rs.assign(static_cast<std::size_t>(m), 0.0);
        return g;
    }

    std::size_t param_count() const {
        return static_cast<std::size_t>(modes) * modes + 3 * static_cast<std::size_t>(modes);
    }

    void validate() const {
        const std::size_t m = static_cast<std::size_t>(modes);
        if (modes < 1) throw dimension_error("GaussianCircuit: modes must be >= 1");
        if (passive.size() != m * m || alphas.size() != m || rs.size() != m)
            throw dimension_error("GaussianCircuit: parameter vector sizes do not match modes");
        for (double r : rs)
            if (std::abs(r) > defaults::r_max)
                throw parameter_error("GaussianCircuit: |r| exceeds r_max");
        for (cplx a : alphas)
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
                throw parameter_error("GaussianCircuit: non-finite displacement");
    }
};

/// Mesh schedule for the passive layer: (mode_index, passive slot of theta).
/// Phases for the unit sit at slot+1.
inline std::vector<std::pair<int, std::size_t>> givens_schedule(int modes) {
    std::vector<std::pair<int, std::size_t>> units;
    std::size_t slot = static_cast<std::size_t>(modes);
    for (int layer = 0; layer < modes; ++layer)
        for (int i = layer % 2; i + 1 < modes; i += 2) {
            if (units.size() == static_cast<std::size_t>(modes) * (modes - 1) / 2) break;
            units.emplace_back(i, slot);
            slot += 2;
        }
    return units;
}

struct CircuitApplication {
    FockState state;
    double leak = 0.0;
};

/// Applies G = S D U to psi. Leak is the total mass pushed past the cutoff.
inline CircuitApplication apply_circuit_raw(const GaussianCircuit& g, const FockState& psi) {
    g.validate();
    if (g.modes != psi.modes())
        throw dimension_error("apply_circuit: circuit/state mode mismatch");
    const IndexTable& t = psi.table();
    const int N = t.cutoff();
    FockState cur = psi;
    // Passive layer: input phases, then the Givens mesh.
    {
        std::vector<cplx> amps = cur.amps();
        for (int k = 0; k < g.modes; ++k)
            if (g.passive[static_cast<std::size_t>(k)] != 0.0)
                detail::apply_mode_phases(amps, t, k,
                                          rotation_phases(g.passive[static_cast<std::size_t>(k)], N));
        cur = FockState(g.modes, N, std::move(amps), cur.norm_leak());
    }
    for (auto [i, slot] : givens_schedule(g.modes)) {
        const double theta = g.passive[slot];
        const double phi = g.passive[slot + 1];
        if (phi != 0.0) {
            std::vector<cplx> amps = cur.amps();
            detail::apply_mode_phases(amps, t, i, rotation_phases(phi, N));
            cur = FockState(g.modes, N, std::move(amps), cur.norm_leak());
        }
        if (theta != 0.0) cur = beamsplitter_apply(theta, cur, i, i + 1);
    }
    // Displacements, then squeezings; track norm loss through both.
    std::vector<cplx> amps = cur.amps();
    double n2_before = 0.0;
    for (const cplx& v : amps) n2_before += std::norm(v);
    for (int k = 0; k < g.modes; ++k)
        if (g.alphas[static_cast<std::size_t>(k)] != cplx(0.0))
            detail::apply_mode_matrix(amps, t, k,
                                      displacement_matrix(g.alphas[static_cast<std::size_t>(k)], N));
    for (int k = 0; k < g.modes; ++k)
        detail::apply_mode_squeeze(amps, t, k, g.rs[static_cast<std::size_t>(k)]);
    double n2_after = 0.0;
    for (const cplx& v : amps) n2_after += std::norm(v);
    const double kept = n2_before > 0.0 ? std::min(1.0, n2_after / n2_before) : 1.0;
    const double leak =
        std::clamp(1.0 - (1.0 - cur.norm_leak()) * kept, 0.0, 1.0);
    return {FockState(g.modes, N, std::move(amps), leak), leak};
}

/// Checked circuit application; rejects results that lost more than leak_tol
/// of their mass to truncation.
inline FockState apply_circuit(const GaussianCircuit& g, const FockState& psi,
                               double leak_tol = defaults::leak_tol) {
    CircuitApplication r = apply_circuit_raw(g, psi);
    if (r.leak - psi.norm_leak() > leak_tol)
        throw truncation_error("apply_circuit: norm leakage exceeds tolerance", r.leak);
    return r.state;
}

} // namespace stellar

#endif
