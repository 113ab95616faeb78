#ifndef STELLAR_MULTI_INDEX_HPP
#define STELLAR_MULTI_INDEX_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "stellar/errors.hpp"

namespace stellar {

/// Deterministic row-major enumeration of photon-number multi-indices
/// n = (n_1,...,n_m) with 0 <= n_k <= cutoff, plus the per-total-photon
/// strata used by the rank projectors. Flat index of n is
/// n_1*(cutoff+1)^(m-1) + ... + n_m.
class IndexTable {
  public:
    IndexTable(int modes, int cutoff) : modes_(modes), cutoff_(cutoff) {
        if (modes < 1) throw dimension_error("IndexTable: modes must be >= 1");
        if (cutoff < 0) throw dimension_error("IndexTable: cutoff must be >= 0");
        std::size_t d = 1;
        strides_.assign(static_cast<std::size_t>(modes), 1);
        for (int k = modes - 1; k >= 0; --k) {
            strides_[static_cast<std::size_t>(k)] = d;
            d *= static_cast<std::size_t>(cutoff + 1);
        }
        size_ = d;
        const int s_max = modes * cutoff;
        strata_.assign(static_cast<std::size_t>(s_max) + 1, {});
        std::vector<int> n(static_cast<std::size_t>(modes), 0);
        for (std::size_t flat = 0; flat < size_; ++flat) {
            int total = 0;
            std::size_t rem = flat;
            for (int k = 0; k < modes; ++k) {
                const int nk = static_cast<int>(rem / strides_[static_cast<std::size_t>(k)]);
                rem %= strides_[static_cast<std::size_t>(k)];
                total += nk;
            }
            strata_[static_cast<std::size_t>(total)].push_back(flat);
        }
    }

    int modes() const { return modes_; }
    int cutoff() const { return cutoff_; }
    std::size_t size() const { return size_; }
    std::size_t stride(int mode) const { return strides_[static_cast<std::size_t>(mode)]; }

    /// Flat indices with total photon number exactly s, in enumeration order.
    const std::vector<std::size_t>& stratum(int s) const {
        return strata_[static_cast<std::size_t>(s)];
    }
    int max_total() const { return modes_ * cutoff_; }

    int total_photons(std::size_t flat) const {
        int total = 0;
        for (int k = 0; k < modes_; ++k) {
            total += static_cast<int>(flat / strides_[static_cast<std::size_t>(k)]);
            flat %= strides_[static_cast<std::size_t>(k)];
        }
        return total;
    }

    std::vector<int> unrank(std::size_t flat) const {
        std::vector<int> n(static_cast<std::size_t>(modes_));
        for (int k = 0; k < modes_; ++k) {
            n[static_cast<std::size_t>(k)] =
                static_cast<int>(flat / strides_[static_cast<std::size_t>(k)]);
            flat %= strides_[static_cast<std::size_t>(k)];
        }
        return n;
    }

    std::size_t rank(const std::vector<int>& n) const {
        std::size_t flat = 0;
        for (int k = 0; k < modes_; ++k)
            flat += static_cast<std::size_t>(n[static_cast<std::size_t>(k)]) *
                    strides_[static_cast<std::size_t>(k)];
        return flat;
    }

    /// Shared, cached table per (modes, cutoff). Concurrent lookups are safe;
    /// concurrent misses deduplicate on the map entry.
    static std::shared_ptr<const IndexTable> get(int modes, int cutoff) {
        static std::mutex mu;
        static std::map<std::pair<int, int>, std::shared_ptr<const IndexTable>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto& slot = cache[{modes, cutoff}];
        if (!slot) slot = std::make_shared<IndexTable>(modes, cutoff);
        return slot;
    }

  private:
    int modes_;
    int cutoff_;
    std::size_t size_;
    std::vector<std::size_t> strides_;
    std::vector<std::vector<std::size_t>> strata_;
};

} // namespace stellar

#endif
