// Acceptance run: prints one PASS/FAIL line per criterion A1..A9 and exits
// nonzero if any fails. Pass criterion names (e.g. `acceptance A3 A7`) to
// run a subset.

#include "hydro/commands.hpp"
#include "hydro/ensembles.hpp"
#include "hydro/gibbs.hpp"
#include "hydro/kmc.hpp"
#include "hydro/model.hpp"
#include "hydro/observables.hpp"
#include "hydro/pde.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace hydro;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::vector<double> grid(double lo, double hi, int count) {
    std::vector<double> g;
    for (int i = 0; i < count; ++i) g.push_back(lo + (hi - lo) * i / (count - 1));
    return g;
}

Configuration from_bits(long n, std::uint64_t bits) {
    std::vector<std::uint8_t> occ(static_cast<std::size_t>(3 * n + 1));
    for (std::size_t i = 0; i < occ.size(); ++i) occ[i] = (bits >> i) & 1U;
    return Configuration(n, occ);
}

// A1: every bond of an N = 4 lattice under every configuration (2^13), and
// every 8-site window around each bond class on N = 16 inside empty and full
// backgrounds.
Outcome a1() {
    double worst = 0.0;
    long checked = 0;
    auto check = [&](const Configuration& c, Site x, const ModelParams& p) {
        const Configuration s = swap(c, x);
        const double dh = hamiltonian(s, p) - hamiltonian(c, p);
        const double lhs = bond_rate(c, x, p) * std::exp(dh);
        const double rhs = bond_rate(s, x, p);
        const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
        if (lhs != 0.0 || rhs != 0.0) worst = std::max(worst, std::abs(lhs - rhs) / scale);
        ++checked;
    };
    for (auto [theta, alpha, beta] : {std::tuple{1.0, 2.0, 0.0}, std::tuple{1.0, 1.0, 1.0}}) {
        const ModelParams small(theta, alpha, beta, 4);
        for (std::uint64_t bits = 0; bits < (1U << 13); ++bits) {
            const Configuration c = from_bits(4, bits);
            for (Site x = -4; x < 8; ++x) check(c, x, small);
        }
        const long n = 16;
        const ModelParams p(theta, alpha, beta, n);
        for (Site x : {Site{-5}, Site{-1}, Site{0}, Site{1}, Site{2}, Site{7}, Site{n - 2}, Site{n - 1}, Site{n}, Site{n + 5}}) {
            for (int background = 0; background < 2; ++background) {
                for (unsigned w = 0; w < 256; ++w) {
                    Configuration c = from_bits(n, background ? ~std::uint64_t{0} : 0);
                    for (int j = 0; j < 8; ++j) {
                        const Site y = x - 3 + j;
                        if (y >= -n && y <= 2 * n) c.set(y, (w >> j) & 1U);
                    }
                    check(c, x, p);
                }
            }
        }
    }
    return {worst <= 1e-12, std::to_string(checked) + " bond/configuration pairs, max relative error " + fmt("%.3g", worst)};
}

// A2: transfer-matrix pressure against the closed form, q = 0 limit, round trips.
Outcome a2() {
    auto closed = [](double lambda, double q) {
        const double e = std::exp(lambda - q);
        return std::log(e + 1.0 + std::sqrt((e + 1.0) * (e + 1.0) - 4.0 * (e - std::exp(lambda)))) - std::log(2.0);
    };
    double p_err = 0.0, free_err = 0.0, trip = 0.0;
    for (double lambda : grid(-5.0, 5.0, 21)) {
        for (double q : grid(-2.0, 2.0, 9)) p_err = std::max(p_err, std::abs(pressure_plus(lambda, q) - closed(lambda, q)));
        free_err = std::max(free_err, std::abs(pressure_plus(lambda, 0.0) - std::log1p(std::exp(lambda))));
    }
    for (double q : grid(-2.0, 2.0, 9)) {
        for (Family f : {Family::Plus, Family::Minus}) {
            for (double rho : grid(0.01, 0.99, 99)) trip = std::max(trip, std::abs(rho_of_lambda(lambda_of_rho(rho, f, q), f, q) - rho));
            for (double lambda : grid(-5.0, 5.0, 21))
                trip = std::max(trip, std::abs(lambda_of_rho(rho_of_lambda(lambda, f, q), f, q) - lambda));
        }
    }
    const bool pass = p_err <= 1e-12 && free_err <= 1e-12 && trip <= 1e-9;
    return {pass, "pressure " + fmt("%.3g", p_err) + ", q=0 " + fmt("%.3g", free_err) + ", round trip " + fmt("%.3g", trip)};
}

// A3: |K| = 8 chain sampler against enumeration.
Outcome a3() {
    const double q = std::log(3.0);
    Rng rng(replica_seed(3, 0));
    const GibbsSpec spec{8, Family::Plus, 0.0, q, std::nullopt};
    const double tv = chain_tv_distance(spec, 1'000'000, rng);
    double marg = 0.0;
    for (const auto& s : {spec, GibbsSpec{8, Family::Plus, -1.0, q, BoundaryCondition{1, 0}}, GibbsSpec{8, Family::Plus, 0.5, -1.0, BoundaryCondition{1, 1}}}) {
        const auto exact = enumerate_distribution(s);
        const auto m = exact_marginals(s);
        for (int i = 0; i < s.size; ++i) {
            double e = 0.0;
            for (std::size_t b = 0; b < exact.size(); ++b)
                if ((b >> i) & 1U) e += exact[b];
            marg = std::max(marg, std::abs(e - m[static_cast<std::size_t>(i)]));
        }
    }
    return {tv <= 0.01 && marg <= 1e-12, "TV " + fmt("%.4f", tv) + ", marginal error " + fmt("%.3g", marg)};
}

/// Asymptotic two-sample Kolmogorov-Smirnov p-value with Stephens' correction.
double ks_p_value(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
    }
    const double ne = static_cast<double>(a.size() * b.size()) / static_cast<double>(a.size() + b.size());
    const double x = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    if (x < 0.2) return 1.0;
    double p = 0.0;
    for (int k = 1; k <= 100; ++k) p += 2.0 * (k % 2 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * x * x);
    return std::clamp(p, 0.0, 1.0);
}

// A4: dynamics started from the full-lattice Gibbs measure stay there.
Outcome a4() {
    const long n = 32, replicas = 1000, l = 4;
    const ModelParams params(1.0, 2.0, 0.0, n);
    const std::vector<double> snaps{0.0, 0.5, 1.0};
    bool pass = true;
    std::ostringstream detail;
    for (double lambda : {-0.5, 0.0, 0.5}) {
        std::vector<long> counts(static_cast<std::size_t>(params.site_count()), 0);
        std::vector<double> block0, block_half;
        for (long r = 0; r < replicas; ++r) {
            const std::uint64_t seed = replica_seed(404, static_cast<std::uint64_t>(r));
            Rng rng(seed);
            SimState state(params, sample_full_lattice(params, lambda, rng), mix64(seed));
            state.run_until(1.0, snaps, [&](double t, const Configuration& c) {
                if (t == 0.0) block0.push_back(block_density(c, n / 2, l));
                if (t == 0.5) block_half.push_back(block_density(c, n / 2, l));
                if (t == 1.0) {
                    const auto occ = c.occupancy();
                    for (std::size_t i = 0; i < occ.size(); ++i) counts[i] += occ[i];
                }
            });
        }
        const auto exact = full_lattice_marginals(params, lambda);
        long inside = 0;
        for (std::size_t i = 0; i < exact.size(); ++i) {
            const double mean = static_cast<double>(counts[i]) / replicas;
            const double se = std::sqrt(exact[i] * (1.0 - exact[i]) / replicas);
            if (std::abs(mean - exact[i]) <= 3.0 * se) ++inside;
        }
        const double frac = static_cast<double>(inside) / static_cast<double>(exact.size());
        const double p = ks_p_value(block0, block_half);
        pass = pass && frac >= 0.95 && p >= 0.01;
        detail << "lambda=" << lambda << ": " << fmt("%.3f", frac) << " sites within 3SE, KS p=" << fmt("%.3f", p) << "; ";
    }
    return {pass, detail.str()};
}

RunConfig headline(long n, long replicas) {
    RunConfig cfg;
    cfg.theta = 1.0;
    cfg.alpha = 2.0;
    cfg.beta = 0.0;
    cfg.n = n;
    cfg.initial.preset = InitialProfile::Preset::Step;
    cfg.initial.step_values = {0.8, 0.2, 0.2};
    cfg.simulation.t_end = 0.5;
    cfg.simulation.snapshots = uniform_times(0.5, 11);
    cfg.simulation.replicas = replicas;
    cfg.simulation.seed = 2024;
    cfg.simulation.block_l = 8;
    cfg.simulation.average_k = 16;
    cfg.simulation.threads = default_thread_count();
    cfg.pde.cells = 200;
    cfg.validate();
    return cfg;
}

std::uint64_t g_violations = 0;
std::uint64_t g_events = 0;

// A5: replica-mean profiles against the PDE, and the trend in N.
Outcome a5() {
    std::vector<double> dist;
    std::ostringstream detail;
    for (long n : {128L, 256L}) {
        const RunConfig cfg = headline(n, 200);
        const auto sim = run_simulation(cfg);
        g_violations += sim.count_violations;
        g_events += sim.total_events;
        const auto pde = run_pde(cfg, cfg.pde.cells);
        std::vector<DensityProfile> pde_profiles;
        for (const auto& s : pde.snapshots) pde_profiles.push_back(s.profile());
        const auto report = compare_profiles(sim.profiles, pde_profiles, 16);
        dist.push_back(report.max_distance);
        detail << "N=" << n << " distance " << fmt("%.5f", report.max_distance) << " (";
        for (const auto& e : report.entries) detail << e.name << ' ' << fmt("%.4f", e.distance) << ' ';
        detail << "); ";
    }
    const double reduction = 1.0 - dist[1] / dist[0];
    detail << "reduction " << fmt("%.1f%%", 100.0 * reduction);
    return {dist[0] <= 0.05 && reduction >= 0.25, detail.str()};
}

// A6: interface traces near stationarity.
Outcome a6() {
    RunConfig cfg = headline(96, 400);
    cfg.simulation.t_end = 5.0;
    cfg.simulation.snapshots = {0.0, 5.0};
    const auto sim = run_simulation(cfg);
    g_violations += sim.count_violations;
    g_events += sim.total_events;
    const auto& tr = sim.traces.back();
    const EnsembleTable table(cfg.model());
    const auto target = stationary_profile(tr.mean_count / static_cast<double>(cfg.n), table);
    const double expected[4] = {target.rho_reservoir, target.rho_bulk, target.rho_bulk, target.rho_reservoir};
    bool traces_ok = true;
    std::ostringstream detail;
    detail << "gaps " << fmt("%.4f", tr.gaps.gap0) << ", " << fmt("%.4f", tr.gaps.gap1) << "; traces";
    for (int j = 0; j < 4; ++j) {
        const double z = (tr.mean[j] - expected[j]) / tr.se[j];
        traces_ok = traces_ok && std::abs(z) <= 3.0;
        detail << ' ' << fmt("%.4f", tr.mean[j]) << " vs " << fmt("%.4f", expected[j]) << " (z=" << fmt("%.2f", z) << ")";
    }
    const double jump = tr.mean[0] - tr.mean[1];
    const double jump_se = std::hypot(tr.se[0], tr.se[1]);
    const bool jump_ok = std::abs(jump) > 3.0 * jump_se;
    detail << "; jump at 0 " << fmt("%.4f", jump) << " +- " << fmt("%.4f", jump_se);
    const bool pass = tr.gaps.gap0 <= 0.1 && tr.gaps.gap1 <= 0.1 && !tr.gaps.clamped && traces_ok && jump_ok;
    return {pass, detail.str()};
}

bool g_pde_walls_closed = true;

// A7: PDE solver checks.
Outcome a7() {
    const EnsembleTable table(ModelParams(1.0, 2.0, 0.0, 64));
    const PdeSolver solver(table);
    auto step0 = [](double u) { return u < 0.0 ? 0.8 : 0.2; };
    std::ostringstream detail;
    bool pass = true;
    double lambda_mismatch = 0.0;

    {
        PdeState s = initial_state(step0, 50);
        const double m0 = s.mass();
        const double dt = solver.max_dt(50);
        for (int i = 0; i < 10000; ++i) {
            StepReport rep;
            solver.step_explicit(s, dt, &rep, true);
            lambda_mismatch = std::max(lambda_mismatch, rep.max_lambda_mismatch);
            g_pde_walls_closed = g_pde_walls_closed && rep.external_flux_left == 0.0 && rep.external_flux_right == 0.0;
        }
        const double drift = std::abs(s.mass() - m0);
        pass = pass && drift <= 1e-12;
        detail << "mass drift " << fmt("%.3g", drift);
    }
    {
        const auto st = stationary_profile(1.2, table);
        PdeState s = initial_state([&](double u) { return st.at(u); }, 50);
        const PdeState start = s;
        const double dt = solver.max_dt(50);
        for (int i = 0; i < 10000; ++i) solver.step_explicit(s, dt);
        double dev = 0.0;
        for (std::size_t i = 0; i < s.rho.size(); ++i) dev = std::max(dev, std::abs(s.rho[i] - start.rho[i]));
        pass = pass && dev <= 1e-10;
        detail << ", stationary drift " << fmt("%.3g", dev);
    }
    {
        const EnsembleTable heat(ModelParams(1.0, 0.0, 0.0, 64));
        const PdeSolver hs(heat);
        auto mode = [](double u) { return std::cos(std::numbers::pi * (u + 1.0) / 3.0); };
        PdeState s = initial_state([&](double u) { return 0.5 + 0.2 * mode(u); }, 200);
        auto amp = [&](const PdeState& st) {
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < st.rho.size(); ++i) {
                num += (st.rho[i] - 0.5) * mode(st.center(i));
                den += mode(st.center(i)) * mode(st.center(i));
            }
            return num / den;
        };
        const double a0 = amp(s);
        const std::vector<double> snaps{0.2};
        hs.run(s, 0.2, snaps, [](const PdeState&) {});
        const double rate = -std::log(amp(s) / a0) / 0.2;
        const double oracle = std::pow(std::numbers::pi / 3.0, 2);
        const double rel = std::abs(rate - oracle) / oracle;
        pass = pass && rel <= 0.01;
        detail << ", heat decay rate error " << fmt("%.2e", rel);
    }
    {
        const double t = 0.1;
        std::vector<std::vector<double>> res;
        for (long m : {50L, 100L, 200L, 400L}) {
            PdeState s = initial_state(step0, m);
            const long pieces = static_cast<long>(std::ceil(16.0 * static_cast<double>(m) * t));
            const auto times = uniform_times(t, pieces + 1);
            std::vector<PdeState> series;
            // the run itself steps with check_lambda off; verify the match on every stored state
            solver.run(s, t, times, [&](const PdeState& st) { series.push_back(st); });
            for (const auto& st : series) {
                const auto f0 = interface_flux(st.rho[static_cast<std::size_t>(m - 1)], st.rho[static_cast<std::size_t>(m)], kCouplerAtZero, table, st.du());
                const auto f1 = interface_flux(st.rho[static_cast<std::size_t>(2 * m - 1)], st.rho[static_cast<std::size_t>(2 * m)], kCouplerAtOne, table, st.du());
                lambda_mismatch = std::max({lambda_mismatch,
                                            std::abs(table.lambda_minus(f0.trace_left) - table.lambda_plus(f0.trace_right)),
                                            std::abs(table.lambda_plus(f1.trace_left) - table.lambda_minus(f1.trace_right))});
            }
            std::vector<double> r;
            for (int k = 1; k <= 3; ++k) r.push_back(std::abs(weak_residual(series, TestFunction::sine(k), table, t)));
            res.push_back(r);
        }
        double worst_ratio = 1e300;
        for (std::size_t i = 0; i + 1 < res.size(); ++i)
            for (int k = 0; k < 3; ++k) worst_ratio = std::min(worst_ratio, res[i][k] / res[i + 1][k]);
        pass = pass && worst_ratio >= 1.8;
        detail << ", weak residual min halving ratio " << fmt("%.3f", worst_ratio) << " (sin1 at M=400 "
               << fmt("%.2e", res.back()[0]) << ")";
    }
    pass = pass && lambda_mismatch <= 1e-10;
    detail << ", lambda mismatch " << fmt("%.2e", lambda_mismatch);
    return {pass, detail.str()};
}

// A8: particle conservation over 1e8 events and closed PDE walls.
Outcome a8() {
    const long n = 128;
    const ModelParams params(1.0, 2.0, 0.0, n);
    Rng rng(replica_seed(808, 0));
    Configuration c(n);
    for (Site x = -n; x <= 2 * n; ++x) c.set(x, rng.bernoulli(x < 0 ? 0.8 : 0.2));
    const long count0 = c.count();
    SimState state(params, c, 808);
    const std::uint64_t target = 100'000'000;
    while (state.events() < target)
        if (!state.step()) break;
    const bool conserved = state.count_violations() == 0 && state.cfg().count() == count0 && state.events() == target;
    const double rate_err = state.rate_table_error();

    const EnsembleTable table(params);
    const PdeSolver solver(table);
    PdeState pde = initial_state([](double u) { return u < 0.0 ? 0.8 : 0.2; }, 40);
    for (int i = 0; i < 5000; ++i) {
        StepReport rep;
        solver.step_explicit(pde, solver.max_dt(40), &rep);
        g_pde_walls_closed = g_pde_walls_closed && rep.external_flux_left == 0.0 && rep.external_flux_right == 0.0;
    }
    const bool pass = conserved && rate_err <= 1e-12 && g_violations == 0 && g_pde_walls_closed;
    std::ostringstream detail;
    detail << state.events() << " events, " << state.count_violations() << " violations (plus " << g_violations
           << " in " << g_events << " events of the other runs), rate table error " << fmt("%.2g", rate_err)
           << ", PDE wall flux " << (g_pde_walls_closed ? "zero" : "NONZERO");
    return {pass, detail.str()};
}

// A9: block-density concentration under both reference families.
Outcome a9() {
    const double q = std::log(3.0);
    Rng rng(replica_seed(909, 0));
    bool pass = true;
    std::ostringstream detail;
    for (Family f : {Family::Minus, Family::Plus}) {
        for (double rho : {0.3, 0.5, 0.7}) {
            std::vector<long> hits;
            for (long l : {50L, 100L, 200L})
                hits.push_back(std::lround(1e4 * lln_exceedance(f, q, rho, l, 0.1, 10'000, rng)));
            const bool dec = hits[0] > hits[1] && hits[1] > hits[2];
            pass = pass && dec;
            detail << (f == Family::Plus ? '+' : '-') << rho << ":" << hits[0] << "/" << hits[1] << "/" << hits[2]
                   << (dec ? "" : "*") << ' ';
        }
    }
    detail << "(exceedances per 1e4 at l=50/100/200; * not strictly decreasing)";
    return {pass, detail.str()};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5}, {"A6", a6}, {"A7", a7}, {"A8", a8}, {"A9", a9}};
    std::set<std::string> selected(argv + 1, argv + argc);
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        if (!selected.empty() && !selected.contains(name)) continue;
        const auto start = std::chrono::steady_clock::now();
        const Outcome o = run();
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %s  %s  [%.1f s]\n", name.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
