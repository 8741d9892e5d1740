#pragma once

#include "hydro/model.hpp"
#include "hydro/rng.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace hydro {

/// Fenwick tree over non-negative bond rates with a cached total.
class RateIndex {
public:
    RateIndex() = default;
    explicit RateIndex(std::span<const double> rates) { rebuild(rates); }

    void rebuild(std::span<const double> rates);
    void update(std::size_t i, double rate);

    double rate(std::size_t i) const { return rates_[i]; }
    double total() const { return total_; }
    std::size_t size() const { return rates_.size(); }

    /// Smallest i with prefix_sum(i) > target, for 0 <= target < total.
    /// Never returns a zero-rate slot.
    std::size_t find(double target) const;

    std::span<const double> rates() const { return rates_; }

private:
    std::vector<double> rates_;
    std::vector<double> tree_;
    double total_ = 0.0;
    std::size_t top_bit_ = 0;
};

struct Event {
    Site bond;
    double dt_macro;
};

/// Snapshot of the configuration at a macroscopic time.
struct Snapshot {
    double t;
    Configuration cfg;
};

using ProfileSeries = std::vector<Snapshot>;

/// Continuous-time exclusion dynamics with generator N^2 L_N, simulated by
/// the Gillespie direct method. Time is macroscopic.
class SimState {
public:
    static constexpr std::uint64_t kRebuildInterval = 1'000'000;

    SimState(const ModelParams& params, Configuration cfg0, std::uint64_t seed);

    const ModelParams& params() const { return params_; }
    const Configuration& cfg() const { return cfg_; }
    double t_macro() const { return t_; }
    std::uint64_t events() const { return events_; }
    double total_rate() const { return index_.total(); }
    const RateIndex& rate_index() const { return index_; }

    /// Number of events after which the particle count changed. Always 0
    /// unless the rate bookkeeping is broken.
    std::uint64_t count_violations() const { return violations_; }
    long particle_count() const { return count_; }

    /// Performs one event, or returns nullopt when no swap is possible.
    std::optional<Event> step();

    /// Advances to t_end, calling `observe` at each snapshot time with the
    /// configuration left by the last event at or before that time.
    /// Snapshots must be sorted and lie in [t_macro, t_end].
    void run_until(double t_end, std::span<const double> snapshots,
                   const std::function<void(double, const Configuration&)>& observe);

    ProfileSeries run_until(double t_end, std::span<const double> snapshots);

    /// Largest |stored - recomputed| bond rate.
    double rate_table_error() const;
    void rebuild_rates();

private:
    void refresh_bond(Site x);
    Site apply_event(double total);
    std::size_t slot(Site x) const { return static_cast<std::size_t>(x + params_.n()); }

    ModelParams params_;
    Configuration cfg_;
    Rng rng_;
    RateIndex index_;
    double t_ = 0.0;
    double time_scale_;
    std::uint64_t events_ = 0;
    std::uint64_t violations_ = 0;
    long count_ = 0;
};

}  // namespace hydro
