#include "hydro/commands.hpp"

#include "hydro/gibbs.hpp"
#include "hydro/kmc.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <set>
#include <stdexcept>
#include <thread>

namespace hydro {

namespace fs = std::filesystem;
using nlohmann::json;

void parallel_for(long count, long threads, const std::function<void(long)>& job) {
    const long workers = std::clamp(threads, 1L, std::max(1L, count));
    if (workers == 1) {
        for (long i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (long i = next++; i < count; i = next++) {
            try {
                job(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::thread> pool;
    for (long w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

Configuration initial_configuration(const RunConfig& cfg, Rng& rng) {
    const ModelParams params = cfg.model();
    if (cfg.initial.preset == InitialProfile::Preset::Gibbs) return sample_full_lattice(params, cfg.initial.lambda, rng);
    const auto rho0 = cfg.initial.resolve(params);
    const long n = params.n();
    Configuration out(n);
    for (Site x = -n; x <= 2 * n; ++x)
        out.set(x, rng.bernoulli(rho0(static_cast<double>(x) / static_cast<double>(n), region_of(x, n))));
    return out;
}

namespace {

struct ReplicaRun {
    std::vector<std::vector<std::uint8_t>> occupancy;  // per snapshot
    std::vector<std::array<double, 4>> traces;
    long count = 0;
    std::uint64_t events = 0;
    std::uint64_t violations = 0;
};

std::array<double, 4> trace_array(const InterfaceTraces& t) {
    return {t.left_of_0, t.right_of_0, t.left_of_1, t.right_of_1};
}

/// Seed of the dynamics stream, distinct from the initial-condition stream.
std::uint64_t dynamics_seed(std::uint64_t replica_stream) { return mix64(replica_stream ^ 0xd1b54a32d192ed03ULL); }

}  // namespace

SimulationResult run_simulation(const RunConfig& cfg) {
    cfg.validate();
    const ModelParams params = cfg.model();
    const EnsembleTable table(params);
    const auto& sim = cfg.simulation;
    const long replicas = sim.replicas;
    std::vector<ReplicaRun> runs(static_cast<std::size_t>(replicas));

    parallel_for(replicas, sim.threads, [&](long r) {
        const std::uint64_t seed = replica_seed(sim.seed, static_cast<std::uint64_t>(r));
        Rng rng(seed);
        SimState state(params, initial_configuration(cfg, rng), dynamics_seed(seed));
        ReplicaRun& run = runs[static_cast<std::size_t>(r)];
        run.count = state.particle_count();
        state.run_until(sim.t_end, sim.snapshots, [&](double, const Configuration& c) {
            const auto occ = c.occupancy();
            run.occupancy.emplace_back(occ.begin(), occ.end());
            run.traces.push_back(trace_array(interface_traces(c, sim.block_l)));
        });
        run.events = state.events();
        run.violations = state.count_violations();
    });

    SimulationResult out;
    const long n = params.n();
    const std::size_t sites = static_cast<std::size_t>(params.site_count());
    const double rcount = static_cast<double>(replicas);
    double count_sum = 0.0;
    for (const auto& run : runs) {
        count_sum += static_cast<double>(run.count);
        out.total_events += run.events;
        out.count_violations += run.violations;
    }
    for (std::size_t s = 0; s < sim.snapshots.size(); ++s) {
        DensityProfile p;
        p.kind = DensityProfile::Kind::Lattice;
        p.t = sim.snapshots[s];
        p.meta["N"] = std::to_string(n);
        p.meta["k"] = std::to_string(sim.average_k);
        p.meta["l"] = std::to_string(sim.block_l);
        p.meta["replicas"] = std::to_string(replicas);
        p.meta["seed"] = std::to_string(sim.seed);
        std::vector<long> counts(sites, 0);
        for (const auto& run : runs)
            for (std::size_t i = 0; i < sites; ++i) counts[i] += run.occupancy[s][i];
        p.u.resize(sites);
        p.value.resize(sites);
        p.se.resize(sites);
        for (std::size_t i = 0; i < sites; ++i) {
            const double m = static_cast<double>(counts[i]) / rcount;
            p.u[i] = static_cast<double>(static_cast<long>(i) - n) / static_cast<double>(n);
            p.value[i] = m;
            p.se[i] = replicas > 1 ? std::sqrt(m * (1.0 - m) / (rcount - 1.0)) : 0.0;
        }
        out.profiles.push_back(std::move(p));

        TraceSummary ts;
        for (const auto& run : runs)
            for (int j = 0; j < 4; ++j) ts.mean[j] += run.traces[s][j];
        for (double& m : ts.mean) m /= rcount;
        if (replicas > 1) {
            for (const auto& run : runs)
                for (int j = 0; j < 4; ++j) ts.se[j] += (run.traces[s][j] - ts.mean[j]) * (run.traces[s][j] - ts.mean[j]);
            for (double& v : ts.se) v = std::sqrt(v / (rcount - 1.0) / rcount);
        }
        ts.gaps = two_block_potential_gap({ts.mean[0], ts.mean[1], ts.mean[2], ts.mean[3]}, table);
        ts.mean_count = count_sum / rcount;
        out.traces.push_back(ts);
    }
    return out;
}

std::function<double(double)> initial_density_function(const RunConfig& cfg) {
    const auto rho0 = cfg.initial.resolve(cfg.model());
    return [rho0](double u) {
        const Region region = u < 0.0 ? Region::LeftReservoir : (u <= 1.0 ? Region::Bulk : Region::RightReservoir);
        return rho0(u, region);
    };
}

namespace {

/// Snapshot times merged with a uniform grid of `pieces` intervals.
std::vector<double> dense_times(const std::vector<double>& snapshots, double t_end, long pieces) {
    std::vector<double> t = t_end > 0.0 ? uniform_times(t_end, pieces + 1) : std::vector<double>{0.0};
    t.insert(t.end(), snapshots.begin(), snapshots.end());
    std::sort(t.begin(), t.end());
    std::vector<double> out;
    for (double v : t)
        if (out.empty() || v > out.back() + 1e-12) out.push_back(v);
    return out;
}

/// Time resolution of the residual quadrature: the interface traces relax
/// on the diffusive scale, so the snapshot spacing must shrink with du.
long residual_pieces(double t_end, long cells) {
    return std::max(1L, static_cast<long>(std::ceil(16.0 * static_cast<double>(cells) * t_end)));
}

}  // namespace

PdeResult run_pde(const RunConfig& cfg, long cells) {
    const EnsembleTable table(cfg.model());
    const PdeSolver solver(table, cfg.pde.safety);
    PdeState state = initial_state(initial_density_function(cfg), cells);
    PdeResult out;
    out.cells = cells;
    const auto& snaps = cfg.simulation.snapshots;
    solver.run(state, cfg.simulation.t_end, snaps, [&](const PdeState& s) { out.snapshots.push_back(s); });
    return out;
}

CompareReport compare_profiles(const std::vector<DensityProfile>& sim, const std::vector<DensityProfile>& pde,
                               long k) {
    if (sim.size() != pde.size() || sim.empty()) throw std::invalid_argument("compare: snapshot counts differ");
    std::vector<double> times;
    for (std::size_t i = 0; i < sim.size(); ++i) {
        if (std::abs(sim[i].t - pde[i].t) > 1e-9) throw std::invalid_argument("compare: snapshot times differ");
        times.push_back(sim[i].t);
    }
    CompareReport report;
    for (const TestFunction& g : comparison_battery()) {
        std::vector<double> diff;
        for (std::size_t i = 0; i < sim.size(); ++i)
            diff.push_back(std::abs(pair_profile(sim[i], g, k) - pair_profile(pde[i], g, k)));
        // a single snapshot has no time extent; report the pointwise gap
        const double d = times.size() > 1 ? trapezoid(times, diff) : diff.front();
        report.entries.push_back({g.name(), d});
        report.max_distance = std::max(report.max_distance, d);
    }
    return report;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string profile_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "profile_%04zu.csv", i);
    return buf;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void write_json(const fs::path& path, const json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

json config_json(const RunConfig& cfg) {
    const auto& ini = cfg.initial;
    json initial = {{"description", ini.describe()}};
    switch (ini.preset) {
    case InitialProfile::Preset::Step:
        initial["preset"] = "step";
        initial["values"] = ini.step_values;
        break;
    case InitialProfile::Preset::Constant:
        initial["preset"] = "constant";
        initial["value"] = ini.constant;
        break;
    case InitialProfile::Preset::PiecewiseLinear: {
        initial["preset"] = "piecewise_linear";
        json bp = json::array();
        for (const auto& [u, r] : ini.breakpoints) bp.push_back({u, r});
        initial["breakpoints"] = bp;
        break;
    }
    case InitialProfile::Preset::Stationary:
        initial["preset"] = "stationary";
        initial["mass"] = ini.total_mass;
        break;
    case InitialProfile::Preset::Gibbs:
        initial["preset"] = "gibbs";
        initial["lambda"] = ini.lambda;
        break;
    }
    const auto& sim = cfg.simulation;
    return {
        {"model", {{"theta", cfg.theta}, {"alpha", cfg.alpha}, {"beta", cfg.beta}, {"N", cfg.n}, {"q", cfg.model().q()}}},
        {"initial", initial},
        {"simulation",
         {{"t_end", sim.t_end},
          {"snapshots", sim.snapshots},
          {"replicas", sim.replicas},
          {"seed", sim.seed},
          {"block_l", sim.block_l},
          {"average_k", sim.average_k}}},
        {"pde", {{"cells", cfg.pde.cells}, {"safety", cfg.pde.safety}, {"refine", cfg.pde.refine}}},
    };
}

json manifest_base(const std::string& command, const RunConfig& cfg) {
    json j = {{"schema", 1}, {"command", command}, {"code_version", kCodeVersion}, {"rng", kRngName}};
    j.update(config_json(cfg));
    return j;
}

std::vector<DensityProfile> read_profiles(const fs::path& dir, json& manifest) {
    manifest = read_json(dir / "manifest.json");
    if (!manifest.contains("profiles")) throw ValidationError(dir.string() + "/manifest.json lists no profiles");
    std::vector<DensityProfile> out;
    for (const auto& name : manifest["profiles"]) {
        const fs::path path = dir / name.get<std::string>();
        std::ifstream in(path);
        if (!in) throw ValidationError("cannot read " + path.string());
        out.push_back(read_profile_csv(in));
    }
    return out;
}

}  // namespace

int cmd_simulate(const RunConfig& cfg, const fs::path& out) {
    ensure_dir(out);
    const SimulationResult res = run_simulation(cfg);
    json manifest = manifest_base("simulate", cfg);
    json files = json::array();
    for (std::size_t i = 0; i < res.profiles.size(); ++i) {
        auto f = open_out(out / profile_name(i));
        write_profile_csv(f, res.profiles[i]);
        files.push_back(profile_name(i));
    }
    {
        auto f = open_out(out / "traces.csv");
        f << "t,rho_0m,rho_0p,rho_1m,rho_1p,se_0m,se_0p,se_1m,se_1p,gap0,gap1,clamped,mean_count\n";
        for (std::size_t s = 0; s < res.traces.size(); ++s) {
            const auto& t = res.traces[s];
            f << fmt(cfg.simulation.snapshots[s]);
            for (double v : t.mean) f << ',' << fmt(v);
            for (double v : t.se) f << ',' << fmt(v);
            f << ',' << fmt(t.gaps.gap0) << ',' << fmt(t.gaps.gap1) << ',' << (t.gaps.clamped ? 1 : 0) << ','
              << fmt(t.mean_count) << '\n';
        }
    }
    manifest["profiles"] = files;
    manifest["traces"] = "traces.csv";
    const auto& last = res.traces.back();
    manifest["final_gaps"] = {{"gap0", last.gaps.gap0}, {"gap1", last.gaps.gap1}, {"clamped", last.gaps.clamped}};
    manifest["events"] = res.total_events;
    manifest["count_violations"] = res.count_violations;
    write_json(out / "manifest.json", manifest);
    std::cout << "simulate: " << res.profiles.size() << " snapshots, " << res.total_events << " events -> "
              << out.string() << '\n';
    return res.count_violations == 0 ? 0 : 1;
}

int cmd_pde(const RunConfig& cfg, const fs::path& out) {
    ensure_dir(out);
    const EnsembleTable table(cfg.model());
    const PdeSolver solver(table, cfg.pde.safety);
    const double t_end = cfg.simulation.t_end;
    const std::vector<TestFunction> residual_fns{TestFunction::sine(1), TestFunction::sine(2), TestFunction::sine(3)};

    struct Solve {
        long cells;
        std::vector<PdeState> dense;
        std::vector<PdeState> snaps;
    };
    auto solve = [&](long cells) {
        Solve s{cells, {}, {}};
        const auto times = dense_times(cfg.simulation.snapshots, t_end, residual_pieces(t_end, cells));
        PdeState state = initial_state(initial_density_function(cfg), cells);
        std::size_t next_snap = 0;
        const auto& snaps = cfg.simulation.snapshots;
        solver.run(state, t_end, times, [&](const PdeState& st) {
            s.dense.push_back(st);
            while (next_snap < snaps.size() && std::abs(snaps[next_snap] - st.t) <= 1e-12) {
                s.snaps.push_back(st);
                ++next_snap;
            }
        });
        return s;
    };

    std::vector<Solve> solves;
    solves.push_back(solve(cfg.pde.cells));
    if (cfg.pde.refine) {
        solves.push_back(solve(2 * cfg.pde.cells));
        solves.push_back(solve(4 * cfg.pde.cells));
    }
    const Solve& base = solves.front();

    json manifest = manifest_base("pde", cfg);
    json files = json::array();
    for (std::size_t i = 0; i < base.snaps.size(); ++i) {
        auto f = open_out(out / profile_name(i));
        write_profile_csv(f, base.snaps[i].profile());
        files.push_back(profile_name(i));
    }
    {
        auto f = open_out(out / "mass.csv");
        f << "t,mass\n";
        for (const auto& s : base.snaps) f << fmt(s.t) << ',' << fmt(s.mass()) << '\n';
    }

    json report = {{"schema", 1}, {"t", t_end}};
    json per_grid = json::array();
    for (const Solve& s : solves) {
        json entry = {{"cells", s.cells}, {"time_points", s.dense.size()}};
        json residuals = json::object();
        for (const auto& g : residual_fns) residuals[g.name()] = weak_residual(s.dense, g, table, t_end);
        entry["weak_residual"] = residuals;
        per_grid.push_back(entry);
    }
    report["grids"] = per_grid;
    if (solves.size() == 3) {
        const double d1 = l1_distance(solves[0].dense.back(), solves[1].dense.back());
        const double d2 = l1_distance(solves[1].dense.back(), solves[2].dense.back());
        report["self_convergence"] = {{"l1_coarse", d1},
                                      {"l1_fine", d2},
                                      {"ratio", d2 > 0.0 ? d1 / d2 : 0.0},
                                      {"order", d1 > 0.0 && d2 > 0.0 ? std::log2(d1 / d2) : 0.0}};
    }
    write_json(out / "residual.json", report);
    manifest["profiles"] = files;
    manifest["mass"] = "mass.csv";
    manifest["residual_report"] = "residual.json";
    write_json(out / "manifest.json", manifest);
    std::cout << "pde: " << base.snaps.size() << " snapshots, M = " << base.cells << " -> " << out.string() << '\n';
    return 0;
}

int cmd_compare(const fs::path& sim_dir, const fs::path& pde_dir, const RunConfig& cfg, const fs::path& out) {
    json sim_manifest, pde_manifest;
    const auto sim = read_profiles(sim_dir, sim_manifest);
    const auto pde = read_profiles(pde_dir, pde_manifest);
    CompareReport report;
    try {
        report = compare_profiles(sim, pde, cfg.compare.k);
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
    bool pass = report.max_distance <= cfg.compare.tolerance;
    json j = {{"schema", 1},
              {"sim_dir", sim_dir.string()},
              {"pde_dir", pde_dir.string()},
              {"k", cfg.compare.k},
              {"tolerance", cfg.compare.tolerance},
              {"gap_tolerance", cfg.compare.gap_tolerance},
              {"max_distance", report.max_distance}};
    json entries = json::array();
    for (const auto& e : report.entries) entries.push_back({{"G", e.name}, {"distance", e.distance}});
    j["distances"] = entries;
    if (sim_manifest.contains("final_gaps")) {
        const auto& g = sim_manifest["final_gaps"];
        const double gap0 = g["gap0"].get<double>();
        const double gap1 = g["gap1"].get<double>();
        j["final_gaps"] = g;
        pass = pass && gap0 <= cfg.compare.gap_tolerance && gap1 <= cfg.compare.gap_tolerance;
    }
    j["pass"] = pass;
    ensure_dir(out);
    write_json(out / "compare.json", j);
    std::cout << "compare: max distance " << report.max_distance << (pass ? " PASS" : " FAIL") << '\n';
    return pass ? 0 : 1;
}

int cmd_ensembles(const RunConfig& cfg, const fs::path& out) {
    ensure_dir(out);
    const EnsembleTable table(cfg.model());
    const auto& e = cfg.ensembles;
    {
        auto f = open_out(out / "rho_table.csv");
        f << "rho,lambda_minus,lambda_plus,phi,q_minus,q_plus\n";
        for (long i = 1; i <= e.rho_points; ++i) {
            const double rho = static_cast<double>(i) / static_cast<double>(e.rho_points + 1);
            f << fmt(rho) << ',' << fmt(table.lambda_minus(rho)) << ',' << fmt(table.lambda_plus(rho)) << ','
              << fmt(table.phi(rho)) << ',' << fmt(table.q_minus(rho)) << ',' << fmt(table.q_plus(rho)) << '\n';
        }
    }
    {
        auto f = open_out(out / "lambda_table.csv");
        f << "lambda,p_minus,p_plus,rho_minus,rho_plus\n";
        for (double lam : uniform_times(e.lambda_max - e.lambda_min, e.lambda_points)) {
            lam += e.lambda_min;
            f << fmt(lam) << ',' << fmt(table.p_minus(lam)) << ',' << fmt(table.p_plus(lam)) << ','
              << fmt(table.rho_minus(lam)) << ',' << fmt(table.rho_plus(lam)) << '\n';
        }
    }
    json manifest = manifest_base("ensembles", cfg);
    manifest["tables"] = {"rho_table.csv", "lambda_table.csv"};
    manifest["grids"] = {{"rho_points", e.rho_points},
                         {"lambda_min", e.lambda_min},
                         {"lambda_max", e.lambda_max},
                         {"lambda_points", e.lambda_points}};
    write_json(out / "manifest.json", manifest);
    std::cout << "ensembles: tables -> " << out.string() << '\n';
    return 0;
}

namespace {

double tv(const std::vector<double>& exact, const std::vector<long>& counts, long samples) {
    double sum = 0.0;
    for (std::size_t s = 0; s < exact.size(); ++s)
        sum += std::abs(exact[s] - static_cast<double>(counts[s]) / static_cast<double>(samples));
    return 0.5 * sum;
}

}  // namespace

double chain_tv_distance(const GibbsSpec& spec, long samples, Rng& rng) {
    const auto exact = enumerate_distribution(spec);
    std::vector<long> counts(exact.size(), 0);
    for (long i = 0; i < samples; ++i) {
        const auto occ = sample_chain(spec, rng);
        std::size_t index = 0;
        for (std::size_t b = 0; b < occ.size(); ++b) index |= static_cast<std::size_t>(occ[b]) << b;
        ++counts[index];
    }
    return tv(exact, counts, samples);
}

double full_lattice_tv_distance(const ModelParams& params, double lambda, long samples, Rng& rng) {
    const auto exact = enumerate_full_lattice(params, lambda);
    std::vector<long> counts(exact.size(), 0);
    for (long i = 0; i < samples; ++i) {
        const Configuration cfg = sample_full_lattice(params, lambda, rng);
        const auto occ = cfg.occupancy();
        std::size_t index = 0;
        for (std::size_t b = 0; b < occ.size(); ++b) index |= static_cast<std::size_t>(occ[b]) << b;
        ++counts[index];
    }
    return tv(exact, counts, samples);
}

double lln_exceedance(Family family, double q, double rho, long l, double eps, long samples, Rng& rng) {
    const double lambda = lambda_of_rho(rho, family, q);
    const int size = static_cast<int>(2 * l + 1);
    const GibbsSpec spec{size, family, lambda, q, std::nullopt};
    long hits = 0;
    for (long i = 0; i < samples; ++i) {
        const auto occ = sample_chain(spec, rng);
        long count = 0;
        for (auto v : occ) count += v;
        // integer comparison avoids rounding at the threshold
        const double dev = std::abs(static_cast<double>(count) - rho * size);
        if (dev >= eps * size - 1e-9) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(samples);
}

int cmd_gibbs_check(const RunConfig& cfg, const fs::path& out) {
    ensure_dir(out);
    const ModelParams params = cfg.model();
    const auto& g = cfg.gibbs;
    Rng rng(replica_seed(cfg.simulation.seed, 0));
    json report = {{"schema", 1}, {"seed", cfg.simulation.seed}, {"rng", kRngName}};
    bool pass = true;

    const GibbsSpec spec{static_cast<int>(g.interval), Family::Plus, g.lambda, params.q(), std::nullopt};
    const double chain_tv = chain_tv_distance(spec, g.samples, rng);
    const auto enumerated = enumerate_distribution(spec);
    const auto marginals = exact_marginals(spec);
    double marginal_error = 0.0;
    for (int i = 0; i < spec.size; ++i) {
        double m = 0.0;
        for (std::size_t s = 0; s < enumerated.size(); ++s)
            if ((s >> i) & 1U) m += enumerated[s];
        marginal_error = std::max(marginal_error, std::abs(m - marginals[static_cast<std::size_t>(i)]));
    }
    report["chain"] = {{"interval", g.interval},     {"lambda", g.lambda},
                       {"samples", g.samples},       {"tv", chain_tv},
                       {"tv_pass", chain_tv <= 0.01}, {"marginal_error", marginal_error},
                       {"marginal_pass", marginal_error <= 1e-12}};
    pass = pass && chain_tv <= 0.01 && marginal_error <= 1e-12;

    const ModelParams small(cfg.theta, cfg.alpha, cfg.beta, g.lattice_n);
    const double lattice_tv = full_lattice_tv_distance(small, g.lattice_lambda, g.lattice_samples, rng);
    report["full_lattice"] = {{"N", g.lattice_n},
                              {"lambda", g.lattice_lambda},
                              {"samples", g.lattice_samples},
                              {"tv", lattice_tv},
                              {"tv_pass", lattice_tv <= 0.01}};
    pass = pass && lattice_tv <= 0.01;

    json lln = json::array();
    for (Family family : {Family::Minus, Family::Plus}) {
        for (double rho : {0.3, 0.5, 0.7}) {
            std::vector<double> p;
            for (long l : {50L, 100L, 200L}) p.push_back(lln_exceedance(family, params.q(), rho, l, 0.1, g.lln_samples, rng));
            const bool decreasing = p[0] > p[1] && p[1] > p[2];
            pass = pass && decreasing;
            lln.push_back({{"family", family == Family::Plus ? "plus" : "minus"},
                           {"rho", rho},
                           {"l", {50, 100, 200}},
                           {"exceedance", p},
                           {"strictly_decreasing", decreasing}});
        }
    }
    report["lln"] = lln;
    report["pass"] = pass;
    write_json(out / "gibbs_check.json", report);
    std::cout << "gibbs-check: " << (pass ? "PASS" : "FAIL") << " -> " << out.string() << '\n';
    return pass ? 0 : 1;
}

}  // namespace hydro
