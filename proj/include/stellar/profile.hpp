#ifndef STELLAR_PROFILE_HPP
#define STELLAR_PROFILE_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "stellar/errors.hpp"
#include "stellar/fock_state.hpp"
#include "stellar/gaussian.hpp"
#include "stellar/nelder_mead.hpp"

namespace stellar {

struct ProfileOptions {
    std::uint64_t seed = 0;
    int starts = 0;       // 0 = auto: 32 for one mode, 128 for two or more
    int cutoff = 0;       // 0 = keep the state's cutoff
    double nm_tol = 1e-8;
    int nm_max_evals = 2000;
    int threads = 0;      // 0 = STELLAR_THREADS env var, else hardware
    double r_range = 1.5;
    double alpha_range = 2.0;
    std::optional<GaussianCircuit> warm_start;
};

struct FidelityResult {
    double value = 0.0;
    GaussianCircuit best;
    double spread = 0.0;   // best minus 5th-best distinct local optimum
    bool flagged = false;  // spread > 1e-4
    int starts_used = 0;
    int escalations = 0;
    int cutoff = 0;
};

struct StellarProfile {
    std::string state_id;
    int n_max = 0;
    std::vector<double> values;
    std::vector<bool> flags;
    std::vector<FidelityResult> entries;
    std::uint64_t seed = 0;
    ProfileOptions opts;
};

namespace detail {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("STELLAR_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// One RNG stream per (seed, n, start) so reductions over starts are
/// bit-identical regardless of how starts are scheduled onto threads.
inline std::uint64_t start_stream_seed(std::uint64_t seed, int n, int start) {
    std::uint64_t s = splitmix64(seed ^ 0x5353a1b2c3d4e5f6ULL);
    s = splitmix64(s ^ static_cast<std::uint64_t>(n));
    s = splitmix64(s ^ (static_cast<std::uint64_t>(start) << 20));
    return s;
}

/// Parameter vector layout: [passive (m^2), Re alpha (m), Im alpha (m), r (m)].
inline GaussianCircuit decode_circuit(int modes, const Eigen::VectorXd& x) {
    GaussianCircuit g = GaussianCircuit::identity(modes);
    const std::size_t m = static_cast<std::size_t>(modes), mm = m * m;
    for (std::size_t i = 0; i < mm; ++i) g.passive[i] = x(static_cast<int>(i));
    for (std::size_t k = 0; k < m; ++k)
        g.alphas[k] = cplx(x(static_cast<int>(mm + k)), x(static_cast<int>(mm + m + k)));
    for (std::size_t k = 0; k < m; ++k) g.rs[k] = x(static_cast<int>(mm + 2 * m + k));
    return g;
}

inline Eigen::VectorXd encode_circuit(const GaussianCircuit& g) {
    const std::size_t m = static_cast<std::size_t>(g.modes), mm = m * m;
    Eigen::VectorXd x(static_cast<int>(g.param_count()));
    for (std::size_t i = 0; i < mm; ++i) x(static_cast<int>(i)) = g.passive[i];
    for (std::size_t k = 0; k < m; ++k) {
        x(static_cast<int>(mm + k)) = g.alphas[k].real();
        x(static_cast<int>(mm + m + k)) = g.alphas[k].imag();
        x(static_cast<int>(mm + 2 * m + k)) = g.rs[k];
    }
    return x;
}

/// Mass of G|psi> inside total photon number <= n, on raw amplitudes.
/// Truncation leak only lowers the mass, so the result stays a valid lower
/// bound on the true overlap with the rank-n subspace.
inline double circuit_rank_mass(const GaussianCircuit& g, const std::vector<cplx>& psi_amps,
                                const IndexTable& t, int n) {
    const int N = t.cutoff();
    std::vector<cplx> amps = psi_amps;
    for (int k = 0; k < g.modes; ++k)
        if (g.passive[static_cast<std::size_t>(k)] != 0.0)
            apply_mode_phases(amps, t, k,
                              rotation_phases(g.passive[static_cast<std::size_t>(k)], N));
    for (auto [i, slot] : givens_schedule(g.modes)) {
        const double theta = g.passive[slot], phi = g.passive[slot + 1];
        if (phi != 0.0) apply_mode_phases(amps, t, i, rotation_phases(phi, N));
        if (theta != 0.0) beamsplitter_amps(amps, t, theta, i, i + 1);
    }
    for (int k = 0; k < g.modes; ++k)
        if (g.alphas[static_cast<std::size_t>(k)] != cplx(0.0))
            apply_mode_matrix(amps, t, k,
                              displacement_matrix(g.alphas[static_cast<std::size_t>(k)], N));
    for (int k = 0; k < g.modes; ++k)
        apply_mode_squeeze(amps, t, k, g.rs[static_cast<std::size_t>(k)]);
    double mass = 0.0;
    const int top = std::min(n, t.max_total());
    for (int s = 0; s <= top; ++s)
        for (std::size_t flat : t.stratum(s)) mass += std::norm(amps[flat]);
    return mass;
}

/// Negated objective for the simplex minimizer. Squeezing outside the
/// supported range is clamped and penalized so the search turns back.
struct RankMassObjective {
    int modes, n;
    const std::vector<cplx>* psi_amps;
    const IndexTable* table;

    double operator()(const Eigen::VectorXd& x) const {
        GaussianCircuit g = decode_circuit(modes, x);
        double penalty = 0.0;
        for (double& r : g.rs) {
            const double excess = std::abs(r) - defaults::r_max;
            if (excess > 0.0) {
                penalty += 1e3 * excess * excess;
                r = std::copysign(defaults::r_max, r);
            }
        }
        return penalty - circuit_rank_mass(g, *psi_amps, *table, n);
    }
};

/// Runs fn(i) for i in [0, count) on up to `threads` workers.
template <typename Fn>
inline void parallel_for(int count, int threads, Fn&& fn) {
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (std::thread& th : pool) th.join();
}

inline Eigen::VectorXd random_start(int modes, std::uint64_t stream, double r_range,
                                    double alpha_range) {
    std::mt19937_64 rng(stream);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t m = static_cast<std::size_t>(modes), mm = m * m;
    Eigen::VectorXd x(static_cast<int>(mm + 3 * m));
    for (std::size_t i = 0; i < mm; ++i) x(static_cast<int>(i)) = angle(rng);
    for (std::size_t k = 0; k < m; ++k) {
        const double mag = alpha_range * unit(rng), ph = angle(rng);
        x(static_cast<int>(mm + k)) = mag * std::cos(ph);
        x(static_cast<int>(mm + m + k)) = mag * std::sin(ph);
    }
    for (std::size_t k = 0; k < m; ++k)
        x(static_cast<int>(mm + 2 * m + k)) = r_range * (2.0 * unit(rng) - 1.0);
    return x;
}

} // namespace detail

/// Best lower bound on the stellar fidelity f_n*(psi) from multi-start
/// simplex search over Gaussian circuits, with cutoff-escalation checks.
inline FidelityResult stellar_fidelity(const FockState& psi_in, int n,
                                       const ProfileOptions& opts = {}) {
    if (n < 0) throw dimension_error("stellar_fidelity: n must be >= 0");
    const int modes = psi_in.modes();
    const int starts = opts.starts > 0 ? opts.starts : (modes == 1 ? 32 : 128);
    const int threads = detail::resolve_threads(opts.threads);
    int cutoff = opts.cutoff > 0 ? opts.cutoff : psi_in.cutoff();
    FockState psi = cutoff == psi_in.cutoff() ? psi_in : psi_in.with_cutoff(cutoff);

    NelderMeadOptions nm;
    nm.tol = opts.nm_tol;
    nm.max_evals = opts.nm_max_evals;

    // Start 0 is the identity circuit; an optional warm start is appended.
    const int extra = opts.warm_start ? 1 : 0;
    const int total = starts + extra;
    std::vector<NelderMeadResult> results(static_cast<std::size_t>(total));
    std::vector<char> failed(static_cast<std::size_t>(total), 0);
    {
        detail::RankMassObjective obj{modes, n, &psi.amps(), &psi.table()};
        detail::parallel_for(total, threads, [&](int i) {
            Eigen::VectorXd x0;
            if (i == 0)
                x0 = Eigen::VectorXd::Zero(static_cast<int>(
                    GaussianCircuit::identity(modes).param_count()));
            else if (i == starts)
                x0 = detail::encode_circuit(*opts.warm_start);
            else
                x0 = detail::random_start(modes,
                                          detail::start_stream_seed(opts.seed, n, i),
                                          opts.r_range, opts.alpha_range);
            try {
                results[static_cast<std::size_t>(i)] =
                    nelder_mead([&obj](const Eigen::VectorXd& x) { return obj(x); }, x0, nm);
            } catch (const error&) {
                failed[static_cast<std::size_t>(i)] = 1;
            }
        });
    }

    // Deterministic reduction: best value, ties broken by start index.
    int best_i = -1;
    for (int i = 0; i < total; ++i) {
        if (failed[static_cast<std::size_t>(i)]) continue;
        if (best_i < 0 ||
            results[static_cast<std::size_t>(i)].value < results[static_cast<std::size_t>(best_i)].value)
            best_i = i;
    }
    if (best_i < 0)
        throw infeasible_error("stellar_fidelity: every optimizer start failed");

    // Confidence spread: best minus 5th-best distinct local optimum.
    std::vector<double> vals;
    for (int i = 0; i < total; ++i)
        if (!failed[static_cast<std::size_t>(i)])
            vals.push_back(-results[static_cast<std::size_t>(i)].value);
    std::sort(vals.begin(), vals.end(), std::greater<>());
    std::vector<double> distinct;
    for (double v : vals)
        if (distinct.empty() || distinct.back() - v > 1e-7) distinct.push_back(v);
    const std::size_t ref = std::min<std::size_t>(4, distinct.size() - 1);
    const double spread = distinct.front() - distinct[ref];

    Eigen::VectorXd best_x = results[static_cast<std::size_t>(best_i)].x;
    double best_val = -results[static_cast<std::size_t>(best_i)].value;

    // Re-score at a larger cutoff; escalate and re-polish if the value moved.
    int escalations = 0;
    for (;;) {
        FockState hi = psi.with_cutoff(cutoff + 15);
        detail::RankMassObjective obj_hi{modes, n, &hi.amps(), &hi.table()};
        const double val_hi = -obj_hi(best_x);
        if (std::abs(val_hi - best_val) <= 1e-6 || escalations >= 2) {
            best_val = std::min(best_val, val_hi);
            break;
        }
        ++escalations;
        cutoff += 15;
        psi = std::move(hi);
        detail::RankMassObjective obj{modes, n, &psi.amps(), &psi.table()};
        NelderMeadResult polished =
            nelder_mead([&obj](const Eigen::VectorXd& x) { return obj(x); }, best_x, nm);
        if (-polished.value > val_hi) {
            best_x = polished.x;
            best_val = -polished.value;
        } else {
            best_val = val_hi;
        }
    }

    FidelityResult out;
    out.value = std::clamp(best_val, 0.0, 1.0);
    out.best = detail::decode_circuit(modes, best_x);
    for (double& r : out.best.rs) r = std::clamp(r, -defaults::r_max, defaults::r_max);
    out.spread = spread;
    out.flagged = spread > 1e-4;
    out.starts_used = total;
    out.escalations = escalations;
    out.cutoff = cutoff;
    return out;
}

/// Profile f_0*..f_{n_max}*: warm-started entries under a running max, with
/// a short-circuit once an entry reaches 1.
inline StellarProfile profile(const FockState& psi, int n_max, const ProfileOptions& opts = {}) {
    if (n_max < 0) throw dimension_error("profile: n_max must be >= 0");
    StellarProfile p;
    p.n_max = n_max;
    p.seed = opts.seed;
    p.opts = opts;
    ProfileOptions entry_opts = opts;
    double running = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        if (running >= 1.0 - 1e-12) {
            FidelityResult copy = p.entries.back();
            copy.spread = 0.0;
            copy.flagged = false;
            p.entries.push_back(copy);
            p.values.push_back(running);
            p.flags.push_back(false);
            continue;
        }
        FidelityResult r = stellar_fidelity(psi, n, entry_opts);
        running = std::max(running, r.value);
        p.entries.push_back(r);
        p.values.push_back(running);
        p.flags.push_back(r.flagged);
        entry_opts.warm_start = r.best;
    }
    return p;
}

/// Right-continuous non-increasing step function epsilon -> approximate
/// stellar rank; thresholds are exactly 1 - f_n* from the profile.
struct ApproxRankFunction {
    struct Step {
        double eps_threshold; // rank applies for eps >= eps_threshold
        int rank;
    };
    std::vector<Step> steps; // sorted by decreasing rank
    bool censored = false;   // top step means "rank >= n_max + 1"

    int rank_at(double eps) const {
        for (auto it = steps.rbegin(); it != steps.rend(); ++it)
            if (eps >= it->eps_threshold) return it->rank;
        return steps.front().rank;
    }
};

inline ApproxRankFunction approx_rank_from_profile(const StellarProfile& p) {
    ApproxRankFunction f;
    for (std::size_t i = 1; i < p.values.size(); ++i)
        if (p.values[i] + 1e-12 < p.values[i - 1])
            throw spec_error("approx_rank_from_profile: profile is not monotone");
    // Declared rank: first entry within 1e-6 of 1; profiles that never get
    // there are censored at the cap.
    int rank = p.n_max;
    for (int n = 0; n <= p.n_max; ++n)
        if (p.values[static_cast<std::size_t>(n)] >= 1.0 - 1e-6) {
            rank = n;
            break;
        }
    f.censored = p.values[static_cast<std::size_t>(rank)] < 1.0 - 1e-6;
    if (f.censored) f.steps.push_back({0.0, p.n_max + 1});
    for (int n = rank; n >= 0; --n) {
        const double thr = 1.0 - p.values[static_cast<std::size_t>(n)];
        // Equal thresholds collapse to the smaller rank.
        if (!f.steps.empty() && thr <= f.steps.back().eps_threshold)
            f.steps.back().rank = n;
        else
            f.steps.push_back({thr, n});
    }
    return f;
}

/// Single-copy-derived lower bounds (k n, 1 - k (1 - f_n*)) on the k-copy
/// profile, clamped to [0, 1].
inline std::vector<std::pair<int, double>> subadditive_profile_bound(const StellarProfile& p,
                                                                     int k) {
    if (k < 1) throw dimension_error("subadditive_profile_bound: k must be >= 1");
    std::vector<std::pair<int, double>> out;
    for (int n = 0; n <= p.n_max; ++n) {
        const double f = p.values[static_cast<std::size_t>(n)];
        out.emplace_back(k * n, std::clamp(1.0 - k * (1.0 - f), 0.0, 1.0));
    }
    return out;
}

} // namespace stellar

#endif
