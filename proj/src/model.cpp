#include "hydro/model.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hydro {

ModelParams::ModelParams(double theta, double alpha, double beta, long n_sites)
    : theta_(theta), alpha_(alpha), beta_(beta), n_(n_sites) {
    if (!std::isfinite(theta) || !std::isfinite(alpha) || !std::isfinite(beta))
        throw std::invalid_argument("model parameters must be finite");
    // theta > 0 is needed for the finite-range rates to stay positive on an
    // empty neighbourhood.
    if (!(theta > 0.0))
        throw std::invalid_argument("theta must be positive");
    if (!(theta + alpha > 0.0) || !(theta + beta > 0.0) || !(theta + alpha + beta > 0.0))
        throw std::invalid_argument("need theta+alpha > 0, theta+beta > 0, theta+alpha+beta > 0");
    if (n_sites < 4)
        throw std::invalid_argument("N must be at least 4, got " + std::to_string(n_sites));
    q_ = alpha == beta ? 0.0 : std::log((theta + alpha) / (theta + beta));
}

Region region_of(Site x, long n) {
    if (x < 0) return Region::LeftReservoir;
    if (x <= n) return Region::Bulk;
    return Region::RightReservoir;
}

BondClass classify_bond(Site x, long n) {
    if (x == -1 || x == 0 || x == n - 1 || x == n) return BondClass::Boundary;
    if (x >= 1 && x <= n - 2) return BondClass::FiniteRange;
    return BondClass::Ssep;
}

Configuration::Configuration(long n) : n_(n), occ_(static_cast<std::size_t>(3 * n + 1), 0) {}

Configuration::Configuration(long n, std::vector<std::uint8_t> occupancy)
    : n_(n), occ_(std::move(occupancy)) {
    if (occ_.size() != static_cast<std::size_t>(3 * n + 1))
        throw std::invalid_argument("occupancy vector does not cover sites -N..2N");
    for (auto v : occ_)
        if (v > 1) throw std::invalid_argument("occupancy values must be 0 or 1");
}

int Configuration::at_or_empty(Site x) const {
    if (x < -n_ || x > 2 * n_) return 0;
    return (*this)(x);
}

void Configuration::set(Site x, int value) {
    if (x < -n_ || x > 2 * n_) throw std::out_of_range("site outside lattice");
    occ_[static_cast<std::size_t>(x + n_)] = value ? 1 : 0;
}

long Configuration::count() const {
    return std::accumulate(occ_.begin(), occ_.end(), 0L);
}

void Configuration::swap_bond(Site x) {
    if (x < -n_ || x >= 2 * n_) throw std::out_of_range("bond outside lattice");
    auto i = static_cast<std::size_t>(x + n_);
    std::swap(occ_[i], occ_[i + 1]);
}

namespace {

void check_bond(const Configuration& cfg, Site x) {
    if (x < cfg.first_site() || x >= cfg.last_site())
        throw std::out_of_range("bond index " + std::to_string(x) + " outside lattice");
}

bool in_hamiltonian(Site bond, long n) { return bond >= 0 && bond <= n - 1; }

}  // namespace

double hamiltonian(const Configuration& cfg, const ModelParams& params) {
    long pairs = 0;
    for (Site x = 0; x < params.n(); ++x) pairs += cfg(x) * cfg(x + 1);
    return params.q() * static_cast<double>(pairs);
}

double delta_h_swap(const Configuration& cfg, Site x, const ModelParams& params) {
    check_bond(cfg, x);
    const int a = cfg(x);
    const int b = cfg(x + 1);
    if (a == b) return 0.0;
    // The bond (x, x+1) itself is symmetric under the swap; only its two
    // neighbouring bonds change.
    int change = 0;
    if (in_hamiltonian(x - 1, params.n())) change += cfg.at_or_empty(x - 1) * (b - a);
    if (in_hamiltonian(x + 1, params.n())) change += cfg.at_or_empty(x + 2) * (a - b);
    return params.q() * change;
}

double bond_rate(const Configuration& cfg, Site x, const ModelParams& params) {
    check_bond(cfg, x);
    const int a = cfg(x);
    const int b = cfg(x + 1);
    if (a == b) return 0.0;
    switch (classify_bond(x, params.n())) {
    case BondClass::Ssep:
        return 1.0;
    case BondClass::FiniteRange: {
        const int left = cfg.at_or_empty(x - 1);
        const int right = cfg.at_or_empty(x + 2);
        // Particle jumps right (a = 1) or left (b = 1).
        if (a == 1) return params.theta() + params.alpha() * left + params.beta() * right;
        return params.theta() + params.alpha() * right + params.beta() * left;
    }
    case BondClass::Boundary:
        return std::exp(-0.5 * delta_h_swap(cfg, x, params));
    }
    return 0.0;
}

Configuration swap(const Configuration& cfg, Site x) {
    check_bond(cfg, x);
    Configuration out = cfg;
    out.swap_bond(x);
    return out;
}

}  // namespace hydro
