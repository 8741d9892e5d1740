#pragma once

#include "hydro/model.hpp"

#include <array>

namespace hydro {

/// Reference Gibbs families: Plus carries the nearest-neighbour
/// Hamiltonian q * sum eta_x eta_{x+1}, Minus is the free (product) family.
enum class Family { Plus, Minus };

/// Symmetric 2x2 transfer matrix T(a, b) = exp(-q a b + lambda (a + b) / 2).
/// Entries are stored rescaled by exp(-shift) so that large |lambda| does
/// not overflow; log_leading_eigenvalue() adds the shift back.
class TransferMatrix {
public:
    TransferMatrix(double lambda, double q);

    double lambda() const { return lambda_; }
    double q() const { return q_; }

    /// Scaled entries: entry(a, b) * exp(shift()) == T(a, b).
    double entry(int a, int b) const { return t_[a][b]; }
    double shift() const { return shift_; }

    double log_leading_eigenvalue() const;
    /// Ratio of the subleading to the leading eigenvalue, in (-1, 1).
    double eigenvalue_ratio() const;
    /// Squared weight of the occupied state in the normalised Perron vector.
    double occupied_weight() const;

private:
    double lambda_;
    double q_;
    double shift_;
    std::array<std::array<double, 2>, 2> t_{};
    double disc_;  // sqrt((t00 - t11)^2 + 4 t01^2)
};

double pressure_minus(double lambda);
double pressure_plus(double lambda, double q);
double pressure(double lambda, Family family, double q);

/// Density p'(lambda) of the infinite-volume family.
double rho_of_lambda(double lambda, Family family, double q);
/// Compressibility d rho / d lambda.
double compressibility(double lambda, Family family, double q);

/// Inverse of rho_of_lambda. Throws std::domain_error unless 0 < rho < 1.
double lambda_of_rho(double rho, Family family, double q);

/// Legendre dual p(lambda_rho) - rho * lambda_rho.
double q_of_rho(double rho, Family family, double q);

/// Bulk flux function, gauge Phi(0) = 0. Throws std::domain_error outside [0, 1].
double phi(double rho, const ModelParams& params);
double phi_slope(double rho, const ModelParams& params);

/// Exact log of sum over eta in {0,1}^size with n particles of exp(-H(eta)),
/// H the free-boundary chain Hamiltonian (zero for Minus). size <= 24.
double canonical_log_partition(int size, int n, Family family, double q);

/// Densities below this distance from {0, 1} are clamped before inverting.
inline constexpr double kDensityClamp = 1e-9;

/// Thermodynamic maps of one parameter set, shared by the PDE solver and
/// the observables.
class EnsembleTable {
public:
    explicit EnsembleTable(const ModelParams& params);

    const ModelParams& params() const { return params_; }
    double q() const { return params_.q(); }

    double p_plus(double lambda) const { return pressure_plus(lambda, q()); }
    double p_minus(double lambda) const { return pressure_minus(lambda); }
    double rho_plus(double lambda) const { return rho_of_lambda(lambda, Family::Plus, q()); }
    double rho_minus(double lambda) const { return rho_of_lambda(lambda, Family::Minus, q()); }
    double lambda_plus(double rho) const { return lambda_of_rho(rho, Family::Plus, q()); }
    double lambda_minus(double rho) const { return lambda_of_rho(rho, Family::Minus, q()); }
    double q_plus(double rho) const { return q_of_rho(rho, Family::Plus, q()); }
    double q_minus(double rho) const { return q_of_rho(rho, Family::Minus, q()); }
    double phi(double rho) const { return hydro::phi(rho, params_); }

    double rho(double lambda, Family f) const { return rho_of_lambda(lambda, f, q()); }
    double lambda(double rho, Family f) const { return lambda_of_rho(rho, f, q()); }
    double chi(double lambda, Family f) const { return compressibility(lambda, f, q()); }

    /// Macroscopic flux map of a region: identity for reservoirs, Phi in the bulk.
    double flux_map(double rho, Family f) const;
    double flux_map_slope(double rho, Family f) const;

    /// Upper bound of phi_slope on [0, 1] (sampled on a fine grid).
    double max_phi_slope() const { return max_phi_slope_; }

private:
    ModelParams params_;
    double max_phi_slope_;
};

}  // namespace hydro
