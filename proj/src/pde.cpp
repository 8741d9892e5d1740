#include "hydro/pde.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hydro {

double PdeState::mass() const {
    double sum = 0.0;
    for (double r : rho) sum += r;
    return sum * du();
}

Family PdeState::family_of(std::size_t cell) const {
    const auto m = static_cast<std::size_t>(cells_per_region);
    return cell >= m && cell < 2 * m ? Family::Plus : Family::Minus;
}

DensityProfile PdeState::profile() const {
    DensityProfile p;
    p.kind = DensityProfile::Kind::Cells;
    p.t = t;
    p.meta["M"] = std::to_string(cells_per_region);
    p.value = rho;
    p.se.assign(rho.size(), 0.0);
    p.u.resize(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) p.u[i] = center(i);
    return p;
}

PdeState initial_state(const std::function<double(double)>& rho0, long cells_per_region) {
    if (cells_per_region < 2) throw std::invalid_argument("need at least two cells per region");
    PdeState s;
    s.cells_per_region = cells_per_region;
    s.rho.resize(static_cast<std::size_t>(3 * cells_per_region));
    const double du = s.du();
    for (std::size_t i = 0; i < s.rho.size(); ++i) {
        const double a = -1.0 + static_cast<double>(i) * du;
        const double avg = boost::math::quadrature::gauss<double, 5>::integrate(rho0, a, a + du) / du;
        if (!(avg >= 0.0 && avg <= 1.0)) throw std::domain_error("initial density outside [0,1]");
        s.rho[i] = avg;
    }
    return s;
}

namespace {

double clamp_density(double rho) { return std::clamp(rho, kDensityClamp, 1.0 - kDensityClamp); }

}  // namespace

InterfaceFlux interface_flux(double rho_left_cell, double rho_right_cell, const InterfaceCoupler& coupler,
                             const EnsembleTable& table, double du) {
    const double rl = clamp_density(rho_left_cell);
    const double rr = clamp_density(rho_right_cell);
    const double phi_l = table.flux_map(rl, coupler.left);
    const double phi_r = table.flux_map(rr, coupler.right);

    // Increasing in lambda; zero where the half-cell fluxes agree.
    auto balance = [&](double lambda) {
        return table.flux_map(table.rho(lambda, coupler.left), coupler.left) - phi_l +
               table.flux_map(table.rho(lambda, coupler.right), coupler.right) - phi_r;
    };

    const double lam_l = table.lambda(rl, coupler.left);
    const double lam_r = table.lambda(rr, coupler.right);
    double lo = std::min(lam_l, lam_r);
    double hi = std::max(lam_l, lam_r);
    double lambda_star = lo;
    if (hi > lo) {
        double f_lo = balance(lo);
        double f_hi = balance(hi);
        // Near equilibrium lo and hi differ by rounding only and so can the
        // signs of the endpoint residuals.
        const double tol = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(phi_l) + std::abs(phi_r));
        if (f_lo > 0.0 && f_lo <= tol) f_lo = 0.0;
        if (f_hi < 0.0 && f_hi >= -tol) f_hi = 0.0;
        if (f_lo > 0.0 || f_hi < 0.0) throw std::logic_error("interface flux root is not bracketed");
        if (f_lo == 0.0) {
            lambda_star = lo;
        } else if (f_hi == 0.0) {
            lambda_star = hi;
        } else {
            std::uintmax_t iters = 200;
            const auto [a, b] = boost::math::tools::toms748_solve(
                balance, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(), iters);
            lambda_star = 0.5 * (a + b);
        }
    }
    InterfaceFlux out{};
    out.lambda_star = lambda_star;
    out.trace_left = table.rho(lambda_star, coupler.left);
    out.trace_right = table.rho(lambda_star, coupler.right);
    const double left_flux = -2.0 * (table.flux_map(out.trace_left, coupler.left) - phi_l) / du;
    const double right_flux = -2.0 * (phi_r - table.flux_map(out.trace_right, coupler.right)) / du;
    out.flux = 0.5 * (left_flux + right_flux);
    out.flux_mismatch = std::abs(left_flux - right_flux);
    return out;
}

PdeSolver::PdeSolver(const EnsembleTable& table, double safety) : table_(table), safety_(safety) {
    if (!(safety > 0.0 && safety <= 0.5)) throw std::invalid_argument("CFL safety factor must lie in (0, 0.5]");
}

double PdeSolver::max_dt(long cells_per_region) const {
    const double du = 1.0 / static_cast<double>(cells_per_region);
    const double slope = std::max(1.0, table_.max_phi_slope());
    return safety_ * du * du / (2.0 * slope);
}

void PdeSolver::step_explicit(PdeState& state, double dt, StepReport* report, bool check_lambda) const {
    const double limit = max_dt(state.cells_per_region);
    if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12))
        throw std::invalid_argument("time step " + std::to_string(dt) + " violates the CFL bound " +
                                    std::to_string(limit));
    const std::size_t cells = state.rho.size();
    const auto m = static_cast<std::size_t>(state.cells_per_region);
    const double du = state.du();

    // potentials[i] = flux map of cell i in its own region
    std::vector<double> potential(cells);
    for (std::size_t i = 0; i < cells; ++i) potential[i] = table_.flux_map(state.rho[i], state.family_of(i));

    // flux[e] through the edge between cells e-1 and e; edges 0 and 3M are walls
    std::vector<double> flux(cells + 1, 0.0);
    StepReport local;
    for (std::size_t e = 1; e < cells; ++e) {
        if (e == m || e == 2 * m) {
            const auto& coupler = e == m ? kCouplerAtZero : kCouplerAtOne;
            const InterfaceFlux f = interface_flux(state.rho[e - 1], state.rho[e], coupler, table_, du);
            flux[e] = f.flux;
            local.max_flux_mismatch = std::max(local.max_flux_mismatch, f.flux_mismatch);
            if (check_lambda) {
                const double gap = std::abs(table_.lambda(clamp_density(f.trace_left), coupler.left) -
                                            table_.lambda(clamp_density(f.trace_right), coupler.right));
                local.max_lambda_mismatch = std::max(local.max_lambda_mismatch, gap);
            }
        } else {
            flux[e] = -(potential[e] - potential[e - 1]) / du;
        }
    }
    local.external_flux_left = flux.front();
    local.external_flux_right = flux.back();

    const double ratio = dt / du;
    for (std::size_t i = 0; i < cells; ++i) state.rho[i] -= ratio * (flux[i + 1] - flux[i]);
    state.t += dt;
    if (report) *report = local;
}

void PdeSolver::run(PdeState& state, double t_end, std::span<const double> snapshots,
                    const std::function<void(const PdeState&)>& observe) const {
    if (!std::is_sorted(snapshots.begin(), snapshots.end()))
        throw std::invalid_argument("snapshot times must be sorted");
    const double dt_max = max_dt(state.cells_per_region);
    std::size_t next = 0;
    auto emit_due = [&] {
        while (next < snapshots.size() && snapshots[next] <= state.t + 1e-12) {
            if (snapshots[next] < state.t - 1e-12) throw std::invalid_argument("snapshot time already passed");
            observe(state);
            ++next;
        }
    };
    emit_due();
    while (state.t < t_end - 1e-12) {
        double target = t_end;
        if (next < snapshots.size()) target = std::min(target, snapshots[next]);
        const double remaining = target - state.t;
        // equal sub-steps so the last one does not degenerate
        const double pieces = std::ceil(remaining / dt_max);
        const double dt = remaining / std::max(1.0, pieces);
        step_explicit(state, std::min(dt, dt_max));
        if (std::abs(state.t - target) < 1e-12) state.t = target;
        emit_due();
    }
}

StationaryProfile stationary_profile(double total_mass, const EnsembleTable& table) {
    if (!(total_mass > 0.0 && total_mass < 3.0))
        throw std::domain_error("stationary_profile: total mass must lie in (0, 3)");
    auto excess = [&](double lambda) {
        return 2.0 * table.rho_minus(lambda) + table.rho_plus(lambda) - total_mass;
    };
    double lo = -40.0;
    double hi = 40.0;
    while (excess(lo) > 0.0) lo *= 2.0;
    while (excess(hi) < 0.0) hi *= 2.0;
    const auto [a, b] = boost::math::tools::bisect(
        excess, lo, hi, [](double l, double r) { return std::abs(r - l) <= 1e-13; });
    const double lambda = 0.5 * (a + b);
    return {lambda, table.rho_minus(lambda), table.rho_plus(lambda)};
}

double weak_residual(std::span<const PdeState> series, const TestFunction& g, const EnsembleTable& table,
                     double t) {
    if (series.empty()) throw std::invalid_argument("weak_residual: empty series");
    const long m = series.front().cells_per_region;
    const auto ml = static_cast<std::size_t>(m);
    const double du = series.front().du();

    std::vector<double> times;
    std::vector<double> integrand;
    const PdeState* at_t = nullptr;
    for (const PdeState& s : series) {
        if (s.cells_per_region != m) throw std::invalid_argument("weak_residual: mixed grids");
        if (s.t > t + 1e-12) break;
        // sum over cells of flux potential * int_cell G'' plus the trace terms
        double r = 0.0;
        for (std::size_t i = 0; i < s.rho.size(); ++i) {
            const double a = -1.0 + static_cast<double>(i) * du;
            const double pot = table.flux_map(s.rho[i], s.family_of(i));
            r += pot * (g.d1(a + du) - g.d1(a));
        }
        r += g.d1(-1.0) * s.rho.front();
        r += g.d1(0.0) * (table.phi(s.rho[ml]) - s.rho[ml - 1]);
        r += g.d1(1.0) * (s.rho[2 * ml] - table.phi(s.rho[2 * ml - 1]));
        r -= g.d1(2.0) * s.rho.back();
        times.push_back(s.t);
        integrand.push_back(r);
        at_t = &s;
    }
    if (!at_t || std::abs(at_t->t - t) > 1e-12)
        throw std::invalid_argument("weak_residual: t must be one of the snapshot times");
    if (std::abs(series.front().t) > 1e-15) throw std::invalid_argument("weak_residual: series must start at t = 0");

    auto pairing = [&](const PdeState& s) {
        double sum = 0.0;
        for (std::size_t i = 0; i < s.rho.size(); ++i) {
            const double a = -1.0 + static_cast<double>(i) * du;
            sum += s.rho[i] * boost::math::quadrature::gauss<double, 5>::integrate(
                                  [&](double u) { return g(u); }, a, a + du);
        }
        return sum;
    };
    return pairing(*at_t) - pairing(series.front()) - trapezoid(times, integrand);
}

double l1_distance(const PdeState& a, const PdeState& b) {
    const PdeState& coarse = a.cells_per_region <= b.cells_per_region ? a : b;
    const PdeState& fine = a.cells_per_region <= b.cells_per_region ? b : a;
    if (fine.cells_per_region % coarse.cells_per_region != 0)
        throw std::invalid_argument("l1_distance: grids are not nested");
    const auto ratio = static_cast<std::size_t>(fine.cells_per_region / coarse.cells_per_region);
    double sum = 0.0;
    for (std::size_t i = 0; i < coarse.rho.size(); ++i) {
        double avg = 0.0;
        for (std::size_t j = 0; j < ratio; ++j) avg += fine.rho[i * ratio + j];
        avg /= static_cast<double>(ratio);
        sum += std::abs(avg - coarse.rho[i]);
    }
    return sum * coarse.du();
}

}  // namespace hydro
