#pragma once

#include "hydro/ensembles.hpp"
#include "hydro/model.hpp"
#include "hydro/rng.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace hydro {

/// Occupancies of the two sites just outside an interval.
struct BoundaryCondition {
    int left = 0;
    int right = 0;
};

/// Grand-canonical Gibbs distribution on an interval of `size` sites:
/// weight exp(-H + lambda * N), with H = q * sum of adjacent pairs for the
/// Plus family (plus the two boundary bonds when a boundary is given) and
/// H = 0 for Minus.
struct GibbsSpec {
    int size = 1;
    Family family = Family::Minus;
    double lambda = 0.0;
    double q = 0.0;
    std::optional<BoundaryCondition> boundary;
};

/// Exact draw by forward filtering / backward sampling on the chain.
std::vector<std::uint8_t> sample_chain(const GibbsSpec& spec, Rng& rng);

/// Exact draw of the full-lattice Gibbs measure with chemical potential
/// lambda: Bernoulli reservoirs, Plus chain on the bulk sites 0..N.
Configuration sample_full_lattice(const ModelParams& params, double lambda, Rng& rng);

/// E[eta_x] for each site of the interval.
std::vector<double> exact_marginals(const GibbsSpec& spec);

/// E[eta_x] for every lattice site -N..2N under the full-lattice measure.
std::vector<double> full_lattice_marginals(const ModelParams& params, double lambda);

/// Probabilities of all 2^size states (bit i of the index is site i),
/// evaluated directly from the weights. Only for size <= 20.
std::vector<double> enumerate_distribution(const GibbsSpec& spec);

/// Same for the whole lattice (3N+1 <= 20 sites); bit i is site i - N.
std::vector<double> enumerate_full_lattice(const ModelParams& params, double lambda);

}  // namespace hydro
