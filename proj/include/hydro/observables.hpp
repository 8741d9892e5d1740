#pragma once

#include "hydro/ensembles.hpp"
#include "hydro/model.hpp"

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace hydro {

/// Test function on [-1, 2] with its first two derivatives. Construction
/// checks G(-1) = G(0) = G(1) = G(2) = 0 to 1e-12.
class TestFunction {
public:
    using Fn = std::function<double(double)>;

    TestFunction(std::string name, Fn g, Fn d1, Fn d2);

    double operator()(double u) const { return g_(u); }
    double d1(double u) const { return d1_(u); }
    double d2(double u) const { return d2_(u); }
    const std::string& name() const { return name_; }
    /// max |G| sampled on a fine grid of [-1, 2].
    double sup_norm() const { return sup_; }

    /// sin(m pi u).
    static TestFunction sine(int m);
    /// ((u - a)(b - u))^3 on [a, b], scaled to unit maximum, zero elsewhere.
    static TestFunction bump(double a, double b);
    /// sin(m pi u) + sin(m' pi u) style combinations for linearity checks.
    static TestFunction combine(double a, const TestFunction& f, double b, const TestFunction& g);

private:
    std::string name_;
    Fn g_, d1_, d2_;
    double sup_ = 0.0;
};

/// Battery used when comparing particle and PDE profiles: sin(m pi u) for
/// m = 1..4 and two bumps inside each of (-1,0), (0,1), (1,2).
std::vector<TestFunction> comparison_battery();

/// (1/N) sum_x G(x/N) eta_x over the whole lattice.
double pair_empirical(const Configuration& cfg, const TestFunction& g);

/// Pairing restricted to x in [-N+k, -k] u [k, N-k] u [N+k, 2N-k].
double truncated_empirical(const Configuration& cfg, const TestFunction& g, long k);

/// (1/k) sum_{m=1}^{k-1} (1/m) sum_{j=1}^{m-1} truncated_empirical(j).
double averaged_empirical(const Configuration& cfg, const TestFunction& g, long k);

/// Per-site weight of the averaged empirical density: averaged_empirical
/// equals (1/N) sum_x w[x] G(x/N) eta_x. Index is x + N.
std::vector<double> cesaro_site_weights(long n, long k);

/// (1/k) sum_{m=1}^{k-1} (m-1)/m, the weight a site far from every
/// anchor point receives.
double cesaro_total_weight(long k);

/// Density of the block of 2l+1 sites centred at `center`.
double block_density(const Configuration& cfg, Site center, long l);

struct InterfaceTraces {
    double left_of_0;   // left reservoir next to u = 0
    double right_of_0;  // bulk next to u = 0
    double left_of_1;   // bulk next to u = 1
    double right_of_1;  // right reservoir next to u = 1
};

/// Block densities centred at -l-1, l+1, N-l-1 and N+l+1.
InterfaceTraces interface_traces(const Configuration& cfg, long l);

struct PotentialGaps {
    double gap0;
    double gap1;
    bool clamped;  // some trace was moved into [clamp, 1 - clamp]
};

/// |lambda-(rho(0-)) - lambda+(rho(0+))| and |lambda+(rho(1-)) - lambda-(rho(1+))|.
PotentialGaps two_block_potential_gap(const InterfaceTraces& traces, const EnsembleTable& table);

/// Samples of a pointwise-indexed quantity, one inner vector per replica.
struct ReplicaStats {
    std::vector<double> mean;
    std::vector<double> se;
};

/// Pointwise mean and standard error; throws if fewer than two replicas or
/// if the replicas have different lengths.
ReplicaStats replica_mean_profile(const std::vector<std::vector<double>>& replicas);

/// A profile on a spatial grid: lattice sites (u = x/N) or PDE cells
/// (u = cell centre, width `du`).
struct DensityProfile {
    enum class Kind { Lattice, Cells };

    Kind kind = Kind::Lattice;
    std::vector<double> u;
    std::vector<double> value;
    std::vector<double> se;
    double t = 0.0;
    /// Free-form metadata written as `# key = value` lines.
    std::map<std::string, std::string> meta;

    /// N for lattice profiles, cells per unit length for cell profiles.
    long resolution() const;
};

void write_profile_csv(std::ostream& out, const DensityProfile& profile);
DensityProfile read_profile_csv(std::istream& in);

/// <profile, G>. Lattice profiles use the averaged-empirical site weights
/// for averaging parameter k (k = 0: plain empirical pairing), divided by
/// cesaro_total_weight(k) when `normalise` is set; cell profiles integrate
/// the piecewise-constant density exactly against 5-point Gauss rules.
double pair_profile(const DensityProfile& profile, const TestFunction& g, long k = 0, bool normalise = true);

/// Trapezoid rule over (t_i, y_i).
double trapezoid(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace hydro
