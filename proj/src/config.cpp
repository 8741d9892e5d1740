#include "hydro/config.hpp"

#include "hydro/ensembles.hpp"
#include "hydro/pde.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace hydro {

namespace pt = boost::property_tree;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

double to_double(const std::string& key, const std::string& s) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("key '" + key + "': expected a number, got '" + s + "'");
    }
}

long to_long(const std::string& key, const std::string& s) {
    try {
        std::size_t used = 0;
        const long v = std::stol(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("key '" + key + "': expected an integer, got '" + s + "'");
    }
}

std::uint64_t to_u64(const std::string& key, const std::string& s) {
    try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used);
        if (used != s.size() || s.front() == '-') throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("key '" + key + "': expected an unsigned integer, got '" + s + "'");
    }
}

bool to_bool(const std::string& key, const std::string& s) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ValidationError("key '" + key + "': expected true/false, got '" + s + "'");
}

std::vector<double> to_doubles(const std::string& key, const std::string& s) {
    std::vector<double> out;
    for (const auto& item : split(s, ',')) out.push_back(to_double(key, item));
    return out;
}

/// Piecewise-linear interpolation with left/right limits at repeated breakpoints.
double interpolate(const std::vector<std::pair<double, double>>& bp, double u, bool right_limit) {
    if (u <= bp.front().first) return bp.front().second;
    if (u >= bp.back().first) return bp.back().second;
    std::size_t i = 0;
    if (right_limit) {
        while (i + 1 < bp.size() && bp[i + 1].first <= u) ++i;
    } else {
        while (i + 1 < bp.size() && bp[i + 1].first < u) ++i;
    }
    const auto [u0, r0] = bp[i];
    const auto [u1, r1] = bp[std::min(i + 1, bp.size() - 1)];
    if (u1 == u0) return right_limit ? r1 : r0;
    return r0 + (r1 - r0) * (u - u0) / (u1 - u0);
}

const std::map<std::string, std::set<std::string>> kKnownKeys = {
    {"model", {"theta", "alpha", "beta", "N"}},
    {"initial", {"preset", "values", "value", "breakpoints", "mass", "lambda"}},
    {"simulation", {"t_end", "snapshots", "snapshot_count", "replicas", "seed", "block_l", "average_k", "threads"}},
    {"pde", {"cells", "safety", "refine"}},
    {"compare", {"k", "tolerance", "gap_tolerance"}},
    {"ensembles", {"rho_points", "lambda_min", "lambda_max", "lambda_points"}},
    {"gibbs", {"interval", "lambda", "samples", "lattice_n", "lattice_lambda", "lattice_samples", "lln_samples"}},
    {"output", {"dir"}},
};

}  // namespace

std::function<double(double, Region)> InitialProfile::resolve(const ModelParams& params) const {
    switch (preset) {
    case Preset::Step: {
        const auto values = step_values;
        return [values](double, Region region) { return values[static_cast<std::size_t>(region)]; };
    }
    case Preset::Constant: {
        const double c = constant;
        return [c](double, Region) { return c; };
    }
    case Preset::PiecewiseLinear: {
        const auto bp = breakpoints;
        return [bp](double u, Region region) {
            const bool right = region == Region::Bulk ? u < 0.5 : region == Region::RightReservoir;
            return interpolate(bp, u, right);
        };
    }
    case Preset::Stationary:
    case Preset::Gibbs: {
        const EnsembleTable table(params);
        const double lam = preset == Preset::Gibbs ? lambda : stationary_profile(total_mass, table).lambda;
        const double bulk = table.rho_plus(lam);
        const double reservoir = table.rho_minus(lam);
        return [bulk, reservoir](double, Region region) { return region == Region::Bulk ? bulk : reservoir; };
    }
    }
    throw std::logic_error("unknown initial preset");
}

std::string InitialProfile::describe() const {
    std::ostringstream out;
    out.precision(17);
    switch (preset) {
    case Preset::Step:
        out << "step(" << step_values[0] << "," << step_values[1] << "," << step_values[2] << ")";
        break;
    case Preset::Constant:
        out << "constant(" << constant << ")";
        break;
    case Preset::PiecewiseLinear:
        out << "piecewise_linear(";
        for (std::size_t i = 0; i < breakpoints.size(); ++i)
            out << (i ? "," : "") << breakpoints[i].first << ":" << breakpoints[i].second;
        out << ")";
        break;
    case Preset::Stationary:
        out << "stationary(mass=" << total_mass << ")";
        break;
    case Preset::Gibbs:
        out << "gibbs(lambda=" << lambda << ")";
        break;
    }
    return out.str();
}

std::vector<double> uniform_times(double t_end, long count) {
    if (count < 1) throw ValidationError("snapshot_count must be at least 1");
    if (count == 1) return {t_end};
    std::vector<double> out(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = t_end * static_cast<double>(i) / (count - 1);
    out.back() = t_end;
    return out;
}

void RunConfig::validate() const {
    try {
        (void)model();
    } catch (const std::invalid_argument& e) {
        throw ValidationError(std::string("model: ") + e.what());
    }
    const auto& sim = simulation;
    if (!(sim.t_end >= 0.0)) throw ValidationError("simulation.t_end must be non-negative");
    if (sim.snapshots.empty()) throw ValidationError("at least one snapshot time is required");
    if (!std::is_sorted(sim.snapshots.begin(), sim.snapshots.end()))
        throw ValidationError("snapshot times must be sorted");
    if (sim.snapshots.front() < 0.0 || sim.snapshots.back() > sim.t_end)
        throw ValidationError("snapshot times must lie in [0, t_end]");
    if (sim.replicas < 1) throw ValidationError("replicas must be at least 1");
    if (sim.threads < 1) throw ValidationError("threads must be at least 1");
    if (sim.block_l < 0 || 4 * sim.block_l > n) throw ValidationError("block_l must satisfy 0 <= l <= N/4");
    if (sim.average_k < 3 || 2 * (sim.average_k - 2) > n)
        throw ValidationError("average_k must satisfy 3 <= k and 2(k-2) <= N");
    if (pde.cells < 2) throw ValidationError("pde.cells must be at least 2");
    if (!(pde.safety > 0.0 && pde.safety <= 0.5)) throw ValidationError("pde.safety must lie in (0, 0.5]");
    if (compare.k < 3) throw ValidationError("compare.k must be at least 3");

    const auto& ini = initial;
    auto check_density = [](double v, const char* what) {
        if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(std::string(what) + " must lie in [0,1]");
    };
    switch (ini.preset) {
    case InitialProfile::Preset::Step:
        for (double v : ini.step_values) check_density(v, "initial.values");
        break;
    case InitialProfile::Preset::Constant:
        check_density(ini.constant, "initial.value");
        break;
    case InitialProfile::Preset::PiecewiseLinear: {
        const auto& bp = ini.breakpoints;
        if (bp.size() < 2) throw ValidationError("initial.breakpoints needs at least two points");
        if (bp.front().first != -1.0 || bp.back().first != 2.0)
            throw ValidationError("initial.breakpoints must start at u=-1 and end at u=2");
        for (std::size_t i = 0; i < bp.size(); ++i) {
            check_density(bp[i].second, "initial.breakpoints density");
            if (i == 0) continue;
            if (bp[i].first < bp[i - 1].first) throw ValidationError("initial.breakpoints must be sorted in u");
            if (bp[i].first == bp[i - 1].first && bp[i].first != 0.0 && bp[i].first != 1.0)
                throw ValidationError("initial profile may only jump at u = 0 or u = 1");
        }
        break;
    }
    case InitialProfile::Preset::Stationary:
        if (!(ini.total_mass > 0.0 && ini.total_mass < 3.0)) throw ValidationError("initial.mass must lie in (0,3)");
        break;
    case InitialProfile::Preset::Gibbs:
        if (!std::isfinite(ini.lambda)) throw ValidationError("initial.lambda must be finite");
        break;
    }
    if (ensembles.rho_points < 2 || ensembles.lambda_points < 2 || !(ensembles.lambda_min < ensembles.lambda_max))
        throw ValidationError("ensembles grid is degenerate");
    if (gibbs.interval < 1 || gibbs.interval > 16) throw ValidationError("gibbs.interval must lie in [1,16]");
    if (gibbs.lattice_n < 4 || 3 * gibbs.lattice_n + 1 > 20) throw ValidationError("gibbs.lattice_n must lie in [4,6]");
    if (gibbs.samples < 1 || gibbs.lattice_samples < 1 || gibbs.lln_samples < 1)
        throw ValidationError("gibbs sample counts must be positive");
}

RunConfig parse_config(const std::string& text) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ValidationError(std::string("config syntax: ") + e.what());
    }

    for (const auto& [section, body] : tree) {
        const auto known = kKnownKeys.find(section);
        if (known == kKnownKeys.end()) throw ValidationError("unknown config section [" + section + "]");
        if (body.empty() && !body.data().empty()) throw ValidationError("key '" + section + "' outside a section");
        for (const auto& [key, value] : body)
            if (!known->second.contains(key)) throw ValidationError("unknown key " + section + "." + key);
    }

    RunConfig cfg;
    auto get = [&](const std::string& path) -> std::optional<std::string> {
        if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'))) return *v;
        return std::nullopt;
    };
    auto read_double = [&](const std::string& path, double& target) {
        if (auto v = get(path)) target = to_double(path, *v);
    };
    auto read_long = [&](const std::string& path, long& target) {
        if (auto v = get(path)) target = to_long(path, *v);
    };

    read_double("model.theta", cfg.theta);
    read_double("model.alpha", cfg.alpha);
    read_double("model.beta", cfg.beta);
    read_long("model.N", cfg.n);

    auto& ini = cfg.initial;
    const std::string preset = get("initial.preset").value_or("step");
    if (preset == "step") {
        ini.preset = InitialProfile::Preset::Step;
        if (auto v = get("initial.values")) {
            const auto vals = to_doubles("initial.values", *v);
            if (vals.size() != 3) throw ValidationError("initial.values needs three densities");
            std::copy(vals.begin(), vals.end(), ini.step_values.begin());
        }
    } else if (preset == "constant") {
        ini.preset = InitialProfile::Preset::Constant;
        read_double("initial.value", ini.constant);
    } else if (preset == "piecewise_linear") {
        ini.preset = InitialProfile::Preset::PiecewiseLinear;
        const auto v = get("initial.breakpoints");
        if (!v) throw ValidationError("piecewise_linear preset needs initial.breakpoints");
        for (const auto& item : split(*v, ',')) {
            const auto parts = split(item, ':');
            if (parts.size() != 2) throw ValidationError("breakpoint '" + item + "' is not u:rho");
            ini.breakpoints.emplace_back(to_double("initial.breakpoints", parts[0]),
                                         to_double("initial.breakpoints", parts[1]));
        }
    } else if (preset == "stationary") {
        ini.preset = InitialProfile::Preset::Stationary;
        read_double("initial.mass", ini.total_mass);
    } else if (preset == "gibbs") {
        ini.preset = InitialProfile::Preset::Gibbs;
        read_double("initial.lambda", ini.lambda);
    } else {
        throw ValidationError("unknown initial.preset '" + preset + "'");
    }

    auto& sim = cfg.simulation;
    read_double("simulation.t_end", sim.t_end);
    const auto snaps = get("simulation.snapshots");
    const auto count = get("simulation.snapshot_count");
    if (snaps && count) throw ValidationError("give either simulation.snapshots or simulation.snapshot_count");
    if (snaps) sim.snapshots = to_doubles("simulation.snapshots", *snaps);
    else if (count) sim.snapshots = uniform_times(sim.t_end, to_long("simulation.snapshot_count", *count));
    else sim.snapshots = sim.t_end > 0.0 ? std::vector<double>{0.0, sim.t_end} : std::vector<double>{0.0};
    read_long("simulation.replicas", sim.replicas);
    if (auto v = get("simulation.seed")) sim.seed = to_u64("simulation.seed", *v);
    read_long("simulation.block_l", sim.block_l);
    read_long("simulation.average_k", sim.average_k);
    sim.threads = default_thread_count();
    read_long("simulation.threads", sim.threads);

    read_long("pde.cells", cfg.pde.cells);
    read_double("pde.safety", cfg.pde.safety);
    if (auto v = get("pde.refine")) cfg.pde.refine = to_bool("pde.refine", *v);

    read_long("compare.k", cfg.compare.k);
    read_double("compare.tolerance", cfg.compare.tolerance);
    read_double("compare.gap_tolerance", cfg.compare.gap_tolerance);

    read_long("ensembles.rho_points", cfg.ensembles.rho_points);
    read_double("ensembles.lambda_min", cfg.ensembles.lambda_min);
    read_double("ensembles.lambda_max", cfg.ensembles.lambda_max);
    read_long("ensembles.lambda_points", cfg.ensembles.lambda_points);

    read_long("gibbs.interval", cfg.gibbs.interval);
    read_double("gibbs.lambda", cfg.gibbs.lambda);
    read_long("gibbs.samples", cfg.gibbs.samples);
    read_long("gibbs.lattice_n", cfg.gibbs.lattice_n);
    read_double("gibbs.lattice_lambda", cfg.gibbs.lattice_lambda);
    read_long("gibbs.lattice_samples", cfg.gibbs.lattice_samples);
    read_long("gibbs.lln_samples", cfg.gibbs.lln_samples);

    if (auto v = get("output.dir")) cfg.output_dir = *v;

    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

long default_thread_count() {
    if (const char* env = std::getenv("HYDRO_THREADS")) {
        try {
            const long n = std::stol(env);
            if (n >= 1) return n;
        } catch (const std::exception&) {
        }
        throw ValidationError(std::string("HYDRO_THREADS must be a positive integer, got '") + env + "'");
    }
    return 1;
}

std::string config_reference() {
    return R"(Configuration file: INI sections with `key = value` lines.

[model]
  theta, alpha, beta   exchange-rate parameters (theta > 0, theta+alpha > 0, theta+beta > 0)
  N                    lattice size; sites -N..2N (N >= 4)
[initial]
  preset               step | constant | piecewise_linear | stationary | gibbs
  values               step: three densities for (-1,0), (0,1), (1,2)
  value                constant: density
  breakpoints          piecewise_linear: u:rho list from u=-1 to u=2; repeat u=0 or u=1 for a jump
  mass                 stationary: total mass in (0,3) of the flat-potential profile
  lambda               gibbs: chemical potential of the full-lattice Gibbs measure
[simulation]
  t_end                macroscopic end time
  snapshots            comma-separated sorted times in [0, t_end]
  snapshot_count       alternatively: that many evenly spaced times from 0 to t_end
  replicas, seed       replica count and base seed (replica r uses a hash of (seed, r))
  block_l              half-width l of the interface trace blocks (2l+1 sites)
  average_k            averaging parameter k of the averaged empirical density
  threads              worker threads (default: HYDRO_THREADS or 1)
[pde]
  cells                cells per unit interval (3 * cells in total)
  safety               CFL safety factor in (0, 0.5]
  refine               true: also solve with 2x and 4x cells and report self-convergence
[compare]
  k                    averaging parameter applied to lattice profiles
  tolerance            pass threshold of the time-integrated pairing distance
  gap_tolerance        pass threshold of the final chemical-potential gaps
[ensembles]
  rho_points, lambda_min, lambda_max, lambda_points   table grids
[gibbs]
  interval, lambda, samples                 chain-sampler check on an interval
  lattice_n, lattice_lambda, lattice_samples   full-lattice sampler check
  lln_samples                               samples per (family, rho, l) in the LLN sweep
[output]
  dir                  output directory (overridden by --out)
)";
}

}  // namespace hydro
