#ifndef STELLAR_CONVERSION_HPP
#define STELLAR_CONVERSION_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "stellar/errors.hpp"
#include "stellar/profile.hpp"

namespace stellar {

enum class ConversionFlavor { multicopy, subadditive };
enum class Purity { pure, mixed };

struct ConversionScenario {
    std::string input_id;
    std::string target_id;
    int input_copies = 1;
    int target_copies = 1;
    ConversionFlavor flavor = ConversionFlavor::multicopy;
    Purity purity = Purity::pure;

    void validate() const {
        if (input_copies < 1 || target_copies < 1)
            throw parameter_error("ConversionScenario: copy counts must be >= 1");
        if (flavor == ConversionFlavor::subadditive && target_copies != 1)
            throw parameter_error("ConversionScenario: sub-additive flavor requires a single-copy target");
    }
};

/// Union of half-open boxes (p_gt, 1] x [0, delta_lt) in (success probability,
/// trace-distance error) space. The excluded-delta threshold delta*(p) is a
/// non-decreasing step function of p.
struct NoGoRegion {
    struct Rectangle {
        double p_gt = 0.0;
        double delta_lt = 0.0;
        int n = 0, q = 0; // profile indices the rectangle came from
        bool certified = true;
    };
    ConversionScenario scenario;
    std::vector<Rectangle> rectangles;
    int input_cap = 0, target_cap = 0; // profile caps used (region is censored by them)

    bool empty() const { return rectangles.empty(); }

    double delta_at(double p) const {
        double d = 0.0;
        for (const Rectangle& r : rectangles)
            if (p > r.p_gt) d = std::max(d, r.delta_lt);
        return d;
    }

    bool excludes(double p, double delta) const { return p > 0.0 && delta < delta_at(p); }

    /// Boundary steps as (p, delta*) pairs: delta* holds on (p, next_p].
    std::vector<std::pair<double, double>> boundary() const {
        std::vector<double> ps{0.0};
        for (const Rectangle& r : rectangles) ps.push_back(r.p_gt);
        std::sort(ps.begin(), ps.end());
        ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
        std::vector<std::pair<double, double>> out;
        for (double p : ps) {
            if (p >= 1.0) continue;
            const double d = delta_at(std::nextafter(p, 2.0));
            if (out.empty() || d != out.back().second) out.emplace_back(p, d);
        }
        return out;
    }
};

enum class BoundVerdict { consistent, violated, inconclusive };

namespace detail {

inline int profile_rank(const StellarProfile& p) {
    for (int n = 0; n <= p.n_max; ++n)
        if (p.values[static_cast<std::size_t>(n)] >= 1.0 - 1e-6) return n;
    return p.n_max;
}

inline double delta_extent(double gap, Purity purity) {
    // Pure targets exclude delta < gap; the mixed-state form of the bound has
    // a sqrt(2 delta) offset, so the excluded extent becomes gap^2 / 2.
    return purity == Purity::pure ? gap : 0.5 * gap * gap;
}

} // namespace detail

/// Exact-conversion inequality f_n(in) <= f_floor(n/p)(out) checked per n.
/// Entries whose target index exceeds the target profile cap are inconclusive.
inline std::vector<BoundVerdict> exact_bound_check(const StellarProfile& prof_in,
                                                   const StellarProfile& prof_out, double p) {
    if (!(p > 0.0) || p > 1.0)
        throw parameter_error("exact_bound_check: p must lie in (0, 1]");
    std::vector<BoundVerdict> out;
    for (int n = 0; n <= prof_in.n_max; ++n) {
        const double idx_f = std::floor(static_cast<double>(n) / p + 1e-12);
        if (idx_f > static_cast<double>(prof_out.n_max)) {
            out.push_back(BoundVerdict::inconclusive);
            continue;
        }
        const int idx = static_cast<int>(idx_f);
        out.push_back(prof_in.values[static_cast<std::size_t>(n)] >
                              prof_out.values[static_cast<std::size_t>(idx)]
                          ? BoundVerdict::violated
                          : BoundVerdict::consistent);
    }
    return out;
}

/// Rectangles (n/q, 1] x [0, f_n(in) - f_q(out)) for n up to the input rank
/// and q in [n, target cap]; the n=0 rectangle spans all p. Rectangles whose
/// extent survives widening the target value by its confidence spread are
/// certified; the rest are heuristic. Input values are lower bounds already,
/// so they need no padding.
inline NoGoRegion nogo_region_multicopy(const StellarProfile& prof_in,
                                        const StellarProfile& prof_out,
                                        Purity purity = Purity::pure) {
    NoGoRegion region;
    region.scenario.purity = purity;
    region.input_cap = prof_in.n_max;
    region.target_cap = prof_out.n_max;
    const int rank_in = detail::profile_rank(prof_in);
    for (int n = 0; n <= rank_in; ++n)
        for (int q = n; q <= prof_out.n_max; ++q) {
            if (n > 0 && q == n) continue; // empty p-interval (1, 1]
            const double f_in = prof_in.values[static_cast<std::size_t>(n)];
            const double f_out = prof_out.values[static_cast<std::size_t>(q)];
            const double gap = f_in - f_out;
            if (gap <= 0.0) continue;
            NoGoRegion::Rectangle r;
            r.p_gt = n == 0 ? 0.0 : static_cast<double>(n) / q;
            r.delta_lt = detail::delta_extent(gap, purity);
            r.n = n;
            r.q = q;
            const double spread_out = prof_out.entries.empty()
                                          ? 0.0
                                          : prof_out.entries[static_cast<std::size_t>(q)].spread;
            r.certified = f_in - (f_out + spread_out) > 0.0;
            region.rectangles.push_back(r);
        }
    return region;
}

/// Single-copy-derived region for psi^{(x)k} -> phi: rectangles
/// (k n / q, 1] x [0, 1 - f_q(phi) - k (1 - f_n(psi))).
inline NoGoRegion nogo_region_subadditive(const StellarProfile& prof_single_in, int k,
                                          const StellarProfile& prof_out,
                                          Purity purity = Purity::pure) {
    if (k < 1) throw parameter_error("nogo_region_subadditive: k must be >= 1");
    NoGoRegion region;
    region.scenario.flavor = ConversionFlavor::subadditive;
    region.scenario.input_copies = k;
    region.scenario.purity = purity;
    region.input_cap = prof_single_in.n_max;
    region.target_cap = prof_out.n_max;
    const int rank_in = detail::profile_rank(prof_single_in);
    for (int n = 0; n <= rank_in; ++n)
        for (int q = k * n; q <= prof_out.n_max; ++q) {
            if (n > 0 && q == k * n) continue;
            const double f_in = prof_single_in.values[static_cast<std::size_t>(n)];
            const double f_out = prof_out.values[static_cast<std::size_t>(q)];
            const double gap = 1.0 - f_out - k * (1.0 - f_in);
            if (gap <= 0.0) continue;
            NoGoRegion::Rectangle r;
            r.p_gt = n == 0 ? 0.0 : static_cast<double>(k * n) / q;
            r.delta_lt = detail::delta_extent(gap, purity);
            r.n = n;
            r.q = q;
            const double spread_out = prof_out.entries.empty()
                                          ? 0.0
                                          : prof_out.entries[static_cast<std::size_t>(q)].spread;
            r.certified = 1.0 - (f_out + spread_out) - k * (1.0 - f_in) > 0.0;
            region.rectangles.push_back(r);
        }
    return region;
}

struct AssessResult {
    bool inside_nogo = false; // protocol claim inconsistent with the bounds
    double delta = 0.0;       // error implied by the achieved fidelity
    double delta_boundary = 0.0;
    double delta_margin = 0.0; // delta - delta*(p); negative means inside
    double p_margin = 0.0;     // extra p before the point enters the region
};

/// Places a protocol point (success probability p, achieved fidelity F)
/// relative to the region; pure targets use delta = sqrt(1 - F).
inline AssessResult assess_protocol(const NoGoRegion& region, double p, double fidelity_achieved) {
    if (!(p > 0.0) || p > 1.0)
        throw parameter_error("assess_protocol: p must lie in (0, 1]");
    if (fidelity_achieved < 0.0 || fidelity_achieved > 1.0)
        throw parameter_error("assess_protocol: fidelity must lie in [0, 1]");
    AssessResult out;
    out.delta = std::sqrt(std::max(0.0, 1.0 - fidelity_achieved));
    out.delta_boundary = region.delta_at(p);
    out.delta_margin = out.delta - out.delta_boundary;
    out.inside_nogo = region.excludes(p, out.delta);
    double p_thr = std::numeric_limits<double>::infinity();
    for (const NoGoRegion::Rectangle& r : region.rectangles)
        if (out.delta < r.delta_lt) p_thr = std::min(p_thr, r.p_gt);
    out.p_margin = p_thr - p;
    return out;
}

/// Wigner-negativity comparator: conversion at probability p is ruled out
/// iff w_in < p * w_out.
inline bool wln_bound_check(double w_in, double w_out, double p) {
    if (!(p > 0.0) || p > 1.0)
        throw parameter_error("wln_bound_check: p must lie in (0, 1]");
    return w_in < p * w_out;
}

} // namespace stellar

#endif
