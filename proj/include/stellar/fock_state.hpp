#ifndef STELLAR_FOCK_STATE_HPP
#define STELLAR_FOCK_STATE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "stellar/errors.hpp"
#include "stellar/multi_index.hpp"

namespace stellar {

using cplx = std::complex<double>;

namespace defaults {
inline constexpr double tail_tol = 1e-10;
inline constexpr std::size_t tensor_budget = 20'000'000; // complex entries
inline constexpr int cutoff_single_mode = 40;
inline constexpr int cutoff_two_mode = 25;
} // namespace defaults

inline int default_cutoff(int modes) {
    return modes == 1 ? defaults::cutoff_single_mode : defaults::cutoff_two_mode;
}

/// Immutable m-mode pure state in a truncated Fock basis. Amplitudes are
/// stored flat in IndexTable row-major order. Construction normalizes and
/// applies the global-phase convention (first nonzero amplitude in
/// enumeration order made real-positive), so serialized states compare.
class FockState {
  public:
    FockState(int modes, int cutoff, std::vector<cplx> amps, double norm_leak = 0.0)
        : modes_(modes), cutoff_(cutoff), amps_(std::move(amps)), norm_leak_(norm_leak),
          table_(IndexTable::get(modes, cutoff)) {
        if (amps_.size() != table_->size())
            throw dimension_error("FockState: amplitude count does not match (cutoff+1)^modes");
        normalize();
    }

    /// Vacuum state.
    static FockState vacuum(int modes, int cutoff) {
        std::vector<cplx> a(IndexTable::get(modes, cutoff)->size(), cplx(0.0));
        a[0] = 1.0;
        return FockState(modes, cutoff, std::move(a));
    }

    int modes() const { return modes_; }
    int cutoff() const { return cutoff_; }
    double norm_leak() const { return norm_leak_; }
    const std::vector<cplx>& amps() const { return amps_; }
    const IndexTable& table() const { return *table_; }

    cplx amp(const std::vector<int>& n) const { return amps_[table_->rank(n)]; }

    /// Same state embedded at a larger per-mode cutoff (zero padding).
    FockState with_cutoff(int new_cutoff) const {
        if (new_cutoff == cutoff_) return *this;
        if (new_cutoff < cutoff_)
            throw dimension_error("with_cutoff: shrinking the cutoff is not supported");
        auto big = IndexTable::get(modes_, new_cutoff);
        std::vector<cplx> a(big->size(), cplx(0.0));
        for (std::size_t flat = 0; flat < amps_.size(); ++flat)
            a[big->rank(table_->unrank(flat))] = amps_[flat];
        return FockState(modes_, new_cutoff, std::move(a), norm_leak_);
    }

    double squared_norm() const {
        double s = 0.0;
        for (const cplx& v : amps_) s += std::norm(v);
        return s;
    }

  private:
    void normalize() {
        const double n2 = squared_norm();
        if (n2 < 1e-300) throw degenerate_error("FockState: zero-norm amplitude vector");
        // Already-normalized input passes through bitwise unchanged so that
        // serialization round trips are exact.
        const double inv = std::abs(n2 - 1.0) < 4e-16 ? 1.0 : 1.0 / std::sqrt(n2);
        // Global-phase convention: rotate the first nonzero amplitude to the
        // positive real axis.
        cplx phase(1.0, 0.0);
        for (const cplx& v : amps_) {
            if (std::abs(v) > 1e-14) {
                if (!(v.imag() == 0.0 && v.real() > 0.0))
                    phase = std::conj(v) / std::abs(v);
                break;
            }
        }
        if (inv == 1.0 && phase == cplx(1.0, 0.0)) return;
        for (cplx& v : amps_) v *= inv * phase;
    }

    int modes_;
    int cutoff_;
    std::vector<cplx> amps_;
    double norm_leak_;
    std::shared_ptr<const IndexTable> table_;
};

inline cplx overlap(const FockState& a, const FockState& b) {
    if (a.modes() != b.modes())
        throw dimension_error("overlap: mode count mismatch");
    if (a.cutoff() == b.cutoff()) {
        cplx s(0.0);
        for (std::size_t i = 0; i < a.amps().size(); ++i)
            s += std::conj(a.amps()[i]) * b.amps()[i];
        return s;
    }
    const int c = std::max(a.cutoff(), b.cutoff());
    return overlap(a.with_cutoff(c), b.with_cutoff(c));
}

/// Pure-state fidelity F = |<a|b>|^2.
inline double fidelity(const FockState& a, const FockState& b) {
    const double f = std::norm(overlap(a, b));
    return std::clamp(f, 0.0, 1.0);
}

/// Trace distance between pure states, D = sqrt(1 - F).
inline double trace_distance_pure(const FockState& a, const FockState& b) {
    const double d2 = 1.0 - fidelity(a, b);
    return std::sqrt(std::max(0.0, d2));
}

/// Tensor product; modes add, amplitudes multiply.
inline FockState tensor(const FockState& a, const FockState& b) {
    int cutoff = std::max(a.cutoff(), b.cutoff());
    const FockState& ap = a.cutoff() == cutoff ? a : a.with_cutoff(cutoff);
    const FockState& bp = b.cutoff() == cutoff ? b : b.with_cutoff(cutoff);
    const std::size_t na = ap.amps().size(), nb = bp.amps().size();
    if (nb != 0 && na > defaults::tensor_budget / nb)
        throw capacity_error("tensor: result exceeds the memory budget");
    std::vector<cplx> out(na * nb);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j)
            out[i * nb + j] = ap.amps()[i] * bp.amps()[j];
    const double leak = 1.0 - (1.0 - a.norm_leak()) * (1.0 - b.norm_leak());
    return FockState(a.modes() + b.modes(), cutoff, std::move(out), leak);
}

/// k-fold tensor power.
inline FockState tensor_power(const FockState& a, int k) {
    if (k < 1) throw dimension_error("tensor_power: k must be >= 1");
    FockState out = a;
    for (int i = 1; i < k; ++i) out = tensor(out, a);
    return out;
}

struct RankProjection {
    double weight = 0.0;
    bool degenerate = false;
    std::vector<cplx> projected_amps; // unnormalized restriction; empty if degenerate
};

/// Weight and restriction of psi onto total photon number <= n.
inline RankProjection project_rank_raw(const FockState& psi, int n) {
    const IndexTable& t = psi.table();
    if (n < 0 || n > t.max_total())
        throw dimension_error("project_rank: n outside [0, cutoff*modes]");
    RankProjection out;
    out.projected_amps.assign(psi.amps().size(), cplx(0.0));
    for (int s = 0; s <= n; ++s)
        for (std::size_t flat : t.stratum(s)) {
            out.projected_amps[flat] = psi.amps()[flat];
            out.weight += std::norm(psi.amps()[flat]);
        }
    if (out.weight < 1e-15) {
        out.degenerate = true;
        out.projected_amps.clear();
    }
    return out;
}

/// Normalized rank-n projection; throws degenerate_error on zero weight.
inline std::pair<double, FockState> project_rank(const FockState& psi, int n) {
    RankProjection raw = project_rank_raw(psi, n);
    if (raw.degenerate)
        throw degenerate_error("project_rank: projection weight below 1e-15");
    return {raw.weight, FockState(psi.modes(), psi.cutoff(), std::move(raw.projected_amps))};
}

} // namespace stellar

#endif
