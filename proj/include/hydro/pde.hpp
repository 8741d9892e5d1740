#pragma once

#include "hydro/ensembles.hpp"
#include "hydro/observables.hpp"

#include <functional>
#include <span>
#include <vector>

namespace hydro {

/// Cell-averaged densities on [-1, 2]: M cells per unit interval, cells
/// 0..M-1 on (-1,0), M..2M-1 on (0,1), 2M..3M-1 on (1,2).
struct PdeState {
    long cells_per_region = 0;
    std::vector<double> rho;
    double t = 0.0;

    double du() const { return 1.0 / static_cast<double>(cells_per_region); }
    double center(std::size_t i) const { return -1.0 + (static_cast<double>(i) + 0.5) * du(); }
    /// sum rho_i du
    double mass() const;
    Family family_of(std::size_t cell) const;

    DensityProfile profile() const;
};

/// Cell averages of rho0 by 5-point Gauss quadrature on each cell.
PdeState initial_state(const std::function<double(double)>& rho0, long cells_per_region);

/// Families on either side of an interface: (-|+) at u = 0, (+|-) at u = 1.
struct InterfaceCoupler {
    Family left;
    Family right;
};

inline constexpr InterfaceCoupler kCouplerAtZero{Family::Minus, Family::Plus};
inline constexpr InterfaceCoupler kCouplerAtOne{Family::Plus, Family::Minus};

struct InterfaceFlux {
    double flux;          // rightward flux through the interface
    double lambda_star;   // common chemical potential of the two traces
    double trace_left;    // rho_L(lambda_star)
    double trace_right;   // rho_R(lambda_star)
    double flux_mismatch; // |left half-cell flux - right half-cell flux|
};

/// Solves for the common chemical potential of the interface traces so
/// that the two half-cell fluxes agree.
InterfaceFlux interface_flux(double rho_left_cell, double rho_right_cell, const InterfaceCoupler& coupler,
                             const EnsembleTable& table, double du);

struct StepReport {
    double max_lambda_mismatch = 0.0;  // |lambda_L(trace_L) - lambda_R(trace_R)|
    double max_flux_mismatch = 0.0;
    double external_flux_left = 0.0;
    double external_flux_right = 0.0;
};

class PdeSolver {
public:
    explicit PdeSolver(const EnsembleTable& table, double safety = 0.4);

    const EnsembleTable& table() const { return table_; }
    double safety() const { return safety_; }

    /// safety * du^2 / (2 * max slope of the region flux maps)
    double max_dt(long cells_per_region) const;

    /// One forward-Euler step of the conservative scheme. Throws
    /// std::invalid_argument, leaving `state` untouched, if dt exceeds max_dt.
    /// Fills `report` (when given) with interface diagnostics; the lambda
    /// mismatch is only evaluated when `check_lambda` is set.
    void step_explicit(PdeState& state, double dt, StepReport* report = nullptr, bool check_lambda = false) const;

    /// Steps with dt <= max_dt to t_end, landing exactly on each snapshot
    /// time and calling `observe` there.
    void run(PdeState& state, double t_end, std::span<const double> snapshots,
             const std::function<void(const PdeState&)>& observe) const;

private:
    EnsembleTable table_;
    double safety_;
};

struct StationaryProfile {
    double lambda;
    double rho_reservoir;
    double rho_bulk;

    double at(double u) const { return u > 0.0 && u < 1.0 ? rho_bulk : rho_reservoir; }
};

/// Flat-lambda profile with 2 rho-(lambda) + rho+(lambda) = total_mass.
/// Throws std::domain_error unless 0 < total_mass < 3.
StationaryProfile stationary_profile(double total_mass, const EnsembleTable& table);

/// Signed residual of the weak formulation at time t (one of the snapshot
/// times): int rho(t) G - int rho0 G - int_0^t R(s) ds, the time integral by
/// the trapezoid rule over the snapshots and traces from the cells next to
/// u = -1, 0, 1, 2. series.front() is the initial state.
double weak_residual(std::span<const PdeState> series, const TestFunction& g, const EnsembleTable& table, double t);

/// sum_i |a_i - b_i| du after averaging the finer grid onto the coarser one.
double l1_distance(const PdeState& a, const PdeState& b);

}  // namespace hydro
