#pragma once

#include "hydro/model.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hydro {

/// Raised for malformed or inconsistent configuration; the CLI maps it to
/// exit code 2.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Initial density profile rho0 on [-1, 2]. Discontinuities are only
/// allowed at u = 0 and u = 1; `density` takes the region so that the
/// one-sided value is used there.
struct InitialProfile {
    enum class Preset { Step, Constant, PiecewiseLinear, Stationary, Gibbs };

    Preset preset = Preset::Step;
    std::array<double, 3> step_values{0.8, 0.2, 0.2};
    double constant = 0.5;
    std::vector<std::pair<double, double>> breakpoints;
    double total_mass = 1.5;
    double lambda = 0.0;

    /// rho0(u) seen from `region` (for PDE cells and lattice sites). The
    /// stationary and gibbs presets solve for lambda once, here.
    std::function<double(double, Region)> resolve(const ModelParams& params) const;

    std::string describe() const;
};

struct SimulationConfig {
    double t_end = 0.0;
    std::vector<double> snapshots{0.0};
    long replicas = 1;
    std::uint64_t seed = 1;
    long block_l = 4;
    long average_k = 16;
    long threads = 1;
};

struct PdeConfig {
    long cells = 100;
    double safety = 0.4;
    bool refine = false;
};

struct CompareConfig {
    long k = 16;
    double tolerance = 0.05;
    double gap_tolerance = 0.1;
};

struct EnsembleConfig {
    long rho_points = 19;
    double lambda_min = -5.0;
    double lambda_max = 5.0;
    long lambda_points = 21;
};

struct GibbsCheckConfig {
    long interval = 8;
    double lambda = 0.0;
    long samples = 1'000'000;
    long lattice_n = 4;
    double lattice_lambda = -1.5;
    long lattice_samples = 10'000'000;
    long lln_samples = 10'000;
};

struct RunConfig {
    double theta = 1.0;
    double alpha = 2.0;
    double beta = 0.0;
    long n = 64;
    InitialProfile initial;
    SimulationConfig simulation;
    PdeConfig pde;
    CompareConfig compare;
    EnsembleConfig ensembles;
    GibbsCheckConfig gibbs;
    std::filesystem::path output_dir = "out";

    ModelParams model() const { return ModelParams(theta, alpha, beta, n); }

    /// Throws ValidationError on any inconsistency.
    void validate() const;
};

/// Parses the INI-style file (sections [model], [initial], [simulation],
/// [pde], [compare], [ensembles], [gibbs], [output]); unknown keys are
/// rejected. The result is validated.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text);

/// Documentation of all keys, printed by `--help`.
std::string config_reference();

/// Number of worker threads from HYDRO_THREADS, or 1. Used when the
/// configuration does not set [simulation] threads.
long default_thread_count();

/// Evenly spaced times 0, t_end/(count-1), ..., t_end.
std::vector<double> uniform_times(double t_end, long count);

}  // namespace hydro
