#include "hydro/commands.hpp"
#include "hydro/config.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<long> replicas;
    std::optional<long> threads;
    std::string sim_dir;
    std::string pde_dir;
};

void add_common(CLI::App* sub, Options& o, bool with_config = true) {
    if (with_config) sub->add_option("--config", o.config, "Configuration file (INI sections)")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Output directory (default: [output] dir)");
    sub->add_option("--seed", o.seed, "Base seed (overrides [simulation] seed)");
    sub->add_option("--replicas", o.replicas, "Replica count (overrides [simulation] replicas)");
    sub->add_option("--threads", o.threads, "Worker threads (default: HYDRO_THREADS or 1)");
}

hydro::RunConfig resolve(const Options& o) {
    hydro::RunConfig cfg = o.config.empty() ? hydro::parse_config("") : hydro::load_config(o.config);
    if (o.seed) cfg.simulation.seed = *o.seed;
    if (o.replicas) cfg.simulation.replicas = *o.replicas;
    if (o.threads) cfg.simulation.threads = *o.threads;
    if (!o.out.empty()) cfg.output_dir = o.out;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exclusion process with a finite-range bulk: particle simulation, hydrodynamic PDE and checks"};
    app.footer(hydro::config_reference());
    app.require_subcommand(1);
    Options o;

    auto* simulate = app.add_subcommand("simulate", "Run kinetic Monte Carlo replicas and write mean profiles");
    add_common(simulate, o);
    auto* pde = app.add_subcommand("pde", "Solve the hydrodynamic equation and write profiles and residuals");
    add_common(pde, o);
    auto* compare = app.add_subcommand("compare", "Compare a simulation run with a PDE run");
    add_common(compare, o);
    compare->add_option("--sim", o.sim_dir, "Output directory of `simulate`")->required();
    compare->add_option("--pde", o.pde_dir, "Output directory of `pde`")->required();
    auto* ensembles = app.add_subcommand("ensembles", "Write thermodynamic tables");
    add_common(ensembles, o);
    auto* gibbs = app.add_subcommand("gibbs-check", "Check the exact Gibbs samplers against enumeration");
    add_common(gibbs, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const hydro::RunConfig cfg = resolve(o);
        const auto& out = cfg.output_dir;
        if (*simulate) return hydro::cmd_simulate(cfg, out);
        if (*pde) return hydro::cmd_pde(cfg, out);
        if (*compare) return hydro::cmd_compare(o.sim_dir, o.pde_dir, cfg, out);
        if (*ensembles) return hydro::cmd_ensembles(cfg, out);
        if (*gibbs) return hydro::cmd_gibbs_check(cfg, out);
    } catch (const hydro::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
