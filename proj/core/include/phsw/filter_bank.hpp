#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <shared_mutex>
#include <vector>

#include "phsw/error.hpp"

namespace phsw {

// Per-sample exponent above which filters are clamped.
inline constexpr double kThetaMax = 20.0;
// Default snap grid for cached filter lookups.
inline constexpr double kDefaultThetaQuantum = 1e-3;
inline constexpr int kMaxOrder = 12;

// Orthonormal two-channel filter pair of length 2*order_n. Taps are stored as
// ascending powers of z; the lowpass factor keeps every root inside the closed
// unit disk. highpass[j] = (-1)^j * lowpass[2N-1-j] holds exactly on the
// stored values.
struct FilterPair {
    double theta = 0.0;
    int order_n = 0;
    std::vector<double> lowpass;
    std::vector<double> highpass;
    double condition_estimate = 0.0;
};

// Builds the pair for per-sample exponent theta (clamped to kThetaMax).
// The lowpass filter is the minimal-phase spectral factor of the half-band
// symbol whose subdivision scheme reproduces span{t^k e^{+-theta t}, k < N}
// across the two-scale grid; the associated highpass annihilates integer-grid
// samples of t^k e^{+theta t}, k < N.
//
// Throws InvalidOrder for order_n outside [1, 12], ConditioningFailure when
// the factorization cannot reach the required accuracy.
FilterPair build_filter_pair(double theta, int order_n);

// Thread-safe cache keyed by (round(theta/quantum), order_n). The first
// completed build for a key wins; later identical requests share it.
class FilterCache {
public:
    explicit FilterCache(double quantum = kDefaultThetaQuantum) : quantum_(quantum) {}

    std::shared_ptr<const FilterPair> get(double theta, int order_n) const;

    double quantum() const noexcept { return quantum_; }
    std::size_t size() const;

    // Snapshot in key order, for the CSV dump.
    std::vector<std::shared_ptr<const FilterPair>> snapshot() const;

private:
    double quantum_;
    mutable std::shared_mutex mutex_;
    mutable std::map<std::pair<std::int64_t, int>, std::shared_ptr<const FilterPair>> cache_;
};

// Process-wide cache used by the transforms.
FilterCache& default_filter_cache();

// Columns: theta,order_n,tap_index,lowpass,highpass; 17 significant digits.
void write_filter_table_csv(std::ostream& out,
                            const std::vector<std::shared_ptr<const FilterPair>>& pairs);

}  // namespace phsw
