#include "hydro/kmc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace hydro {

void RateIndex::rebuild(std::span<const double> rates) {
    rates_.assign(rates.begin(), rates.end());
    const std::size_t n = rates_.size();
    tree_.assign(n + 1, 0.0);
    total_ = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(rates_[i] >= 0.0)) throw std::invalid_argument("negative or NaN rate");
        total_ += rates_[i];
        tree_[i + 1] += rates_[i];
        const std::size_t parent = (i + 1) + ((i + 1) & (~(i + 1) + 1));
        if (parent <= n) tree_[parent] += tree_[i + 1];
    }
    top_bit_ = n == 0 ? 0 : std::bit_floor(n);
}

void RateIndex::update(std::size_t i, double rate) {
    const double delta = rate - rates_[i];
    if (delta == 0.0) return;
    rates_[i] = rate;
    total_ += delta;
    for (std::size_t k = i + 1; k < tree_.size(); k += k & (~k + 1)) tree_[k] += delta;
}

std::size_t RateIndex::find(double target) const {
    std::size_t pos = 0;
    for (std::size_t step = top_bit_; step > 0; step >>= 1) {
        const std::size_t next = pos + step;
        if (next < tree_.size() && tree_[next] <= target) {
            pos = next;
            target -= tree_[next];
        }
    }
    // Rounding can land on an empty slot or run off the end.
    if (pos >= rates_.size()) pos = rates_.size() - 1;
    if (rates_[pos] > 0.0) return pos;
    for (std::size_t d = 1; d < rates_.size(); ++d) {
        if (pos >= d && rates_[pos - d] > 0.0) return pos - d;
        if (pos + d < rates_.size() && rates_[pos + d] > 0.0) return pos + d;
    }
    throw std::logic_error("RateIndex::find on an all-zero table");
}

SimState::SimState(const ModelParams& params, Configuration cfg0, std::uint64_t seed)
    : params_(params), cfg_(std::move(cfg0)), rng_(seed) {
    if (cfg_.n() != params_.n()) throw std::invalid_argument("configuration size does not match N");
    const double n = static_cast<double>(params_.n());
    time_scale_ = n * n;
    count_ = cfg_.count();
    rebuild_rates();
}

void SimState::rebuild_rates() {
    std::vector<double> rates(static_cast<std::size_t>(params_.bond_count()));
    for (Site x = params_.first_site(); x < params_.last_site(); ++x) rates[slot(x)] = bond_rate(cfg_, x, params_);
    index_.rebuild(rates);
}

double SimState::rate_table_error() const {
    double worst = 0.0;
    for (Site x = params_.first_site(); x < params_.last_site(); ++x)
        worst = std::max(worst, std::abs(index_.rate(slot(x)) - bond_rate(cfg_, x, params_)));
    return worst;
}

void SimState::refresh_bond(Site x) {
    if (x < params_.first_site() || x >= params_.last_site()) return;
    index_.update(slot(x), bond_rate(cfg_, x, params_));
}

std::optional<Event> SimState::step() {
    const double total = index_.total();
    if (!(total > 0.0)) return std::nullopt;
    const double dt = rng_.exponential() / (time_scale_ * total);
    const Site x = apply_event(total);
    t_ += dt;
    return Event{x, dt};
}

Site SimState::apply_event(double total) {
    const Site x = static_cast<Site>(index_.find(rng_.uniform() * total)) + params_.first_site();
    const int before = cfg_(x) + cfg_(x + 1);
    if (cfg_(x) == cfg_(x + 1)) throw std::logic_error("selected a bond with equal occupancies");
    cfg_.swap_bond(x);
    if (cfg_(x) + cfg_(x + 1) != before) ++violations_;
    count_ += cfg_(x) + cfg_(x + 1) - before;

    // Rates of bonds x-2..x+2 read the swapped sites.
    for (Site b = x - 2; b <= x + 2; ++b) refresh_bond(b);
    if (++events_ % kRebuildInterval == 0) rebuild_rates();
    return x;
}

void SimState::run_until(double t_end, std::span<const double> snapshots,
                         const std::function<void(double, const Configuration&)>& observe) {
    if (t_end < t_) throw std::invalid_argument("run_until: t_end before current time");
    if (!std::is_sorted(snapshots.begin(), snapshots.end()))
        throw std::invalid_argument("run_until: snapshot times must be sorted");
    if (!snapshots.empty() && (snapshots.front() < t_ || snapshots.back() > t_end))
        throw std::invalid_argument("run_until: snapshot times outside [t, t_end]");

    std::size_t next = 0;
    while (true) {
        const double total = index_.total();
        if (!(total > 0.0)) break;  // frozen: the configuration persists
        const double t_next = t_ + rng_.exponential() / (time_scale_ * total);
        while (next < snapshots.size() && snapshots[next] < t_next) observe(snapshots[next++], cfg_);
        if (t_next > t_end) break;

        apply_event(total);
        t_ = t_next;
    }
    while (next < snapshots.size()) observe(snapshots[next++], cfg_);
    t_ = t_end;
}

ProfileSeries SimState::run_until(double t_end, std::span<const double> snapshots) {
    ProfileSeries out;
    out.reserve(snapshots.size());
    run_until(t_end, snapshots, [&](double t, const Configuration& cfg) { out.push_back({t, cfg}); });
    return out;
}

}  // namespace hydro
