#pragma once

#include "hydro/config.hpp"
#include "hydro/gibbs.hpp"
#include "hydro/observables.hpp"
#include "hydro/pde.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace hydro {

inline constexpr const char* kCodeVersion = "0.1.0";

/// Runs job(r) for r = 0..count-1 on `threads` workers. Jobs must write
/// only to their own slot; the first exception is rethrown after joining.
void parallel_for(long count, long threads, const std::function<void(long)>& job);

/// Initial configuration: product Bernoulli(rho0(x/N)) per site, or an
/// exact full-lattice Gibbs draw for the gibbs preset.
Configuration initial_configuration(const RunConfig& cfg, Rng& rng);

/// Per-snapshot aggregate of a replica batch.
struct TraceSummary {
    std::array<double, 4> mean{};  // (0-, 0+, 1-, 1+)
    std::array<double, 4> se{};
    PotentialGaps gaps{};           // evaluated on the mean traces
    double mean_count = 0.0;
};

struct SimulationResult {
    std::vector<DensityProfile> profiles;  // one per snapshot, lattice kind
    std::vector<TraceSummary> traces;
    std::uint64_t total_events = 0;
    std::uint64_t count_violations = 0;
};

/// Runs all replicas of cfg.simulation and reduces them in replica order.
SimulationResult run_simulation(const RunConfig& cfg);

struct PdeResult {
    long cells = 0;
    std::vector<PdeState> snapshots;
};

/// Solves the PDE from the configured initial profile, storing the state
/// at every snapshot time.
PdeResult run_pde(const RunConfig& cfg, long cells);

/// Initial profile as a function of u for the PDE (bulk values on [0,1]).
std::function<double(double)> initial_density_function(const RunConfig& cfg);

struct CompareEntry {
    std::string name;
    double distance;  // trapezoid in t of |<sim, G> - <pde, G>|
};

struct CompareReport {
    std::vector<CompareEntry> entries;
    double max_distance = 0.0;
    double gap0 = 0.0;
    double gap1 = 0.0;
    bool gaps_available = false;
    bool pass = false;
};

/// Time-integrated pairing distances over the comparison battery. Lattice
/// profiles are paired with the averaged empirical weights for `k`,
/// normalised to unit interior weight. Throws std::invalid_argument if the
/// snapshot grids differ.
CompareReport compare_profiles(const std::vector<DensityProfile>& sim, const std::vector<DensityProfile>& pde,
                               long k);

/// Subcommands. Each writes its artifacts under `out` and returns the
/// process exit code for success (0) or a failed check (1).
int cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out);
int cmd_pde(const RunConfig& cfg, const std::filesystem::path& out);
int cmd_compare(const std::filesystem::path& sim_dir, const std::filesystem::path& pde_dir, const RunConfig& cfg,
                const std::filesystem::path& out);
int cmd_ensembles(const RunConfig& cfg, const std::filesystem::path& out);
int cmd_gibbs_check(const RunConfig& cfg, const std::filesystem::path& out);

/// Gibbs-sampler checks shared by gibbs-check and the test suites.
double chain_tv_distance(const GibbsSpec& spec, long samples, Rng& rng);
double full_lattice_tv_distance(const ModelParams& params, double lambda, long samples, Rng& rng);

/// Fraction of `samples` exact draws of the free-boundary measure on 2l+1
/// sites, at the chemical potential of density rho, whose block density
/// deviates from rho by at least eps.
double lln_exceedance(Family family, double q, double rho, long l, double eps, long samples, Rng& rng);

}  // namespace hydro
