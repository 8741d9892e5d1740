#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hydro {

using Site = long;

/// Exchange-rate parameters and lattice size. The lattice is the set of
/// sites -N..2N: left reservoir -N..-1, interacting bulk 0..N, right
/// reservoir N+1..2N.
class ModelParams {
public:
    /// Throws std::invalid_argument unless theta > 0, theta + alpha > 0,
    /// theta + beta > 0, theta + alpha + beta > 0 and n_sites >= 4.
    ModelParams(double theta, double alpha, double beta, long n_sites);

    double theta() const { return theta_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    long n() const { return n_; }

    /// Nearest-neighbour coupling ln((theta + alpha) / (theta + beta)).
    double q() const { return q_; }

    Site first_site() const { return -n_; }
    Site last_site() const { return 2 * n_; }
    long site_count() const { return 3 * n_ + 1; }
    /// Bonds (x, x+1) for x = -N..2N-1.
    long bond_count() const { return 3 * n_; }

private:
    double theta_;
    double alpha_;
    double beta_;
    long n_;
    double q_;
};

enum class Region { LeftReservoir, Bulk, RightReservoir };

enum class BondClass { Ssep, FiniteRange, Boundary };

Region region_of(Site x, long n);

/// Classifies bond (x, x+1). Boundary bonds are x in {-1, 0, N-1, N},
/// finite-range bonds are 1..N-2, everything else is simple exclusion.
BondClass classify_bond(Site x, long n);

/// Occupation numbers on the sites -N..2N.
class Configuration {
public:
    Configuration() = default;
    explicit Configuration(long n);
    Configuration(long n, std::vector<std::uint8_t> occupancy);

    long n() const { return n_; }
    Site first_site() const { return -n_; }
    Site last_site() const { return 2 * n_; }
    std::size_t size() const { return occ_.size(); }

    int operator()(Site x) const { return occ_[static_cast<std::size_t>(x + n_)]; }
    /// Returns 0 for sites outside the lattice.
    int at_or_empty(Site x) const;
    void set(Site x, int value);

    long count() const;
    std::span<const std::uint8_t> occupancy() const { return occ_; }

    /// In-place exchange of sites x and x+1.
    void swap_bond(Site x);

    bool operator==(const Configuration&) const = default;

private:
    long n_ = 0;
    std::vector<std::uint8_t> occ_;
};

double hamiltonian(const Configuration& cfg, const ModelParams& params);

/// H(cfg^{x,x+1}) - H(cfg), read from the sites x-1..x+2.
double delta_h_swap(const Configuration& cfg, Site x, const ModelParams& params);

/// Exchange rate c_{x,x+1}(cfg). Zero iff the two sites agree.
double bond_rate(const Configuration& cfg, Site x, const ModelParams& params);

Configuration swap(const Configuration& cfg, Site x);

}  // namespace hydro
