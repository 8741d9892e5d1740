#include "hydro/observables.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hydro {

TestFunction::TestFunction(std::string name, Fn g, Fn d1, Fn d2)
    : name_(std::move(name)), g_(std::move(g)), d1_(std::move(d1)), d2_(std::move(d2)) {
    for (double anchor : {-1.0, 0.0, 1.0, 2.0})
        if (std::abs(g_(anchor)) > 1e-12)
            throw std::invalid_argument("test function " + name_ + " does not vanish at u = " +
                                        std::to_string(anchor));
    constexpr int kGrid = 6000;
    for (int i = 0; i <= kGrid; ++i) sup_ = std::max(sup_, std::abs(g_(-1.0 + 3.0 * i / kGrid)));
}

TestFunction TestFunction::sine(int m) {
    const double w = m * std::numbers::pi;
    return TestFunction(
        "sin" + std::to_string(m), [w](double u) { return std::sin(w * u); },
        [w](double u) { return w * std::cos(w * u); }, [w](double u) { return -w * w * std::sin(w * u); });
}

TestFunction TestFunction::bump(double a, double b) {
    if (!(a < b)) throw std::invalid_argument("bump needs a < b");
    const double half = 0.5 * (b - a);
    const double scale = 1.0 / std::pow(half * half, 3);
    // p(u) = (u-a)(b-u), G = scale * p^3
    auto p = [a, b](double u) { return (u - a) * (b - u); };
    auto dp = [a, b](double u) { return a + b - 2.0 * u; };
    auto inside = [a, b](double u) { return u > a && u < b; };
    std::ostringstream name;
    name << "bump[" << a << "," << b << "]";
    return TestFunction(
        name.str(), [=](double u) { return inside(u) ? scale * std::pow(p(u), 3) : 0.0; },
        [=](double u) { return inside(u) ? scale * 3.0 * p(u) * p(u) * dp(u) : 0.0; },
        [=](double u) {
            return inside(u) ? scale * (6.0 * p(u) * dp(u) * dp(u) - 6.0 * p(u) * p(u)) : 0.0;
        });
}

TestFunction TestFunction::combine(double a, const TestFunction& f, double b, const TestFunction& g) {
    return TestFunction(
        f.name() + "+" + g.name(), [=](double u) { return a * f(u) + b * g(u); },
        [=](double u) { return a * f.d1(u) + b * g.d1(u); }, [=](double u) { return a * f.d2(u) + b * g.d2(u); });
}

std::vector<TestFunction> comparison_battery() {
    std::vector<TestFunction> out;
    for (int m = 1; m <= 4; ++m) out.push_back(TestFunction::sine(m));
    for (double left : {-1.0, 0.0, 1.0}) {
        out.push_back(TestFunction::bump(left, left + 0.5));
        out.push_back(TestFunction::bump(left + 0.5, left + 1.0));
    }
    return out;
}

double pair_empirical(const Configuration& cfg, const TestFunction& g) {
    const double n = static_cast<double>(cfg.n());
    double sum = 0.0;
    for (Site x = cfg.first_site(); x <= cfg.last_site(); ++x)
        if (cfg(x)) sum += g(static_cast<double>(x) / n);
    return sum / n;
}

double truncated_empirical(const Configuration& cfg, const TestFunction& g, long k) {
    const long n = cfg.n();
    if (k < 1 || 2 * k > n) throw std::out_of_range("truncated_empirical: need 1 <= k <= N/2");
    const double nd = static_cast<double>(n);
    double sum = 0.0;
    auto window = [&](Site from, Site to) {
        for (Site x = from; x <= to; ++x)
            if (cfg(x)) sum += g(static_cast<double>(x) / nd);
    };
    window(-n + k, -k);
    window(k, n - k);
    window(n + k, 2 * n - k);
    return sum / nd;
}

double averaged_empirical(const Configuration& cfg, const TestFunction& g, long k) {
    if (k < 3) throw std::out_of_range("averaged_empirical: need k >= 3");
    if (2 * (k - 2) > cfg.n()) throw std::out_of_range("averaged_empirical: k too large for N");
    double outer = 0.0;
    for (long m = 1; m <= k - 1; ++m) {
        double inner = 0.0;
        for (long j = 1; j <= m - 1; ++j) inner += truncated_empirical(cfg, g, j);
        outer += inner / static_cast<double>(m);
    }
    return outer / static_cast<double>(k);
}

namespace {

/// Largest j with x inside the truncated windows of pi^{N,j}.
long anchor_distance(Site x, long n) {
    if (x < 0) return std::min(x + n, -x);
    if (x <= n) return std::min(x, n - x);
    return std::min(x - n, 2 * n - x);
}

}  // namespace

std::vector<double> cesaro_site_weights(long n, long k) {
    std::vector<double> w(static_cast<std::size_t>(3 * n + 1));
    for (Site x = -n; x <= 2 * n; ++x) {
        const long d = anchor_distance(x, n);
        double sum = 0.0;
        for (long m = 1; m <= k - 1; ++m) sum += static_cast<double>(std::min(m - 1, d)) / static_cast<double>(m);
        w[static_cast<std::size_t>(x + n)] = sum / static_cast<double>(k);
    }
    return w;
}

double cesaro_total_weight(long k) {
    double sum = 0.0;
    for (long m = 1; m <= k - 1; ++m) sum += static_cast<double>(m - 1) / static_cast<double>(m);
    return sum / static_cast<double>(k);
}

double block_density(const Configuration& cfg, Site center, long l) {
    if (l < 0 || center - l < cfg.first_site() || center + l > cfg.last_site())
        throw std::out_of_range("block B_l(center) leaves the lattice");
    long count = 0;
    for (Site x = center - l; x <= center + l; ++x) count += cfg(x);
    return static_cast<double>(count) / static_cast<double>(2 * l + 1);
}

InterfaceTraces interface_traces(const Configuration& cfg, long l) {
    const long n = cfg.n();
    if (l < 0 || 4 * l > n) throw std::out_of_range("interface_traces: need 0 <= l <= N/4");
    return {block_density(cfg, -l - 1, l), block_density(cfg, l + 1, l), block_density(cfg, n - l - 1, l),
            block_density(cfg, n + l + 1, l)};
}

PotentialGaps two_block_potential_gap(const InterfaceTraces& traces, const EnsembleTable& table) {
    bool clamped = false;
    auto clamp = [&](double rho) {
        const double c = std::clamp(rho, kDensityClamp, 1.0 - kDensityClamp);
        if (c != rho) clamped = true;
        return c;
    };
    const double l0 = table.lambda_minus(clamp(traces.left_of_0));
    const double r0 = table.lambda_plus(clamp(traces.right_of_0));
    const double l1 = table.lambda_plus(clamp(traces.left_of_1));
    const double r1 = table.lambda_minus(clamp(traces.right_of_1));
    return {std::abs(l0 - r0), std::abs(l1 - r1), clamped};
}

ReplicaStats replica_mean_profile(const std::vector<std::vector<double>>& replicas) {
    if (replicas.size() < 2) throw std::invalid_argument("replica statistics need at least two replicas");
    const std::size_t len = replicas.front().size();
    for (const auto& r : replicas)
        if (r.size() != len) throw std::invalid_argument("replica profiles are not aligned");
    const double count = static_cast<double>(replicas.size());
    ReplicaStats out{std::vector<double>(len, 0.0), std::vector<double>(len, 0.0)};
    for (const auto& r : replicas)
        for (std::size_t i = 0; i < len; ++i) out.mean[i] += r[i];
    for (double& m : out.mean) m /= count;
    for (const auto& r : replicas)
        for (std::size_t i = 0; i < len; ++i) out.se[i] += (r[i] - out.mean[i]) * (r[i] - out.mean[i]);
    for (double& s : out.se) s = std::sqrt(s / (count - 1.0) / count);
    return out;
}

long DensityProfile::resolution() const {
    const auto it = meta.find(kind == Kind::Lattice ? "N" : "M");
    if (it == meta.end()) throw std::invalid_argument("profile lacks its resolution metadata");
    return std::stol(it->second);
}

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

void write_profile_csv(std::ostream& out, const DensityProfile& profile) {
    out << "# kind = " << (profile.kind == DensityProfile::Kind::Lattice ? "lattice" : "cells") << '\n';
    out << "# t = " << format_double(profile.t) << '\n';
    for (const auto& [key, value] : profile.meta)
        if (key != "kind" && key != "t") out << "# " << key << " = " << value << '\n';
    out << "u,rho_mean,rho_se\n";
    for (std::size_t i = 0; i < profile.u.size(); ++i)
        out << format_double(profile.u[i]) << ',' << format_double(profile.value[i]) << ','
            << format_double(profile.se[i]) << '\n';
}

DensityProfile read_profile_csv(std::istream& in) {
    DensityProfile p;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            p.meta[trim(line.substr(1, eq - 1))] = trim(line.substr(eq + 1));
            continue;
        }
        if (!header_seen) {
            if (trim(line) != "u,rho_mean,rho_se") throw std::runtime_error("unexpected profile CSV header: " + line);
            header_seen = true;
            continue;
        }
        std::istringstream row(line);
        std::string a, b, c;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c))
            throw std::runtime_error("malformed profile CSV row: " + line);
        p.u.push_back(std::stod(a));
        p.value.push_back(std::stod(b));
        p.se.push_back(std::stod(c));
    }
    const auto kind = p.meta.find("kind");
    if (kind == p.meta.end()) throw std::runtime_error("profile CSV lacks '# kind' metadata");
    if (kind->second == "lattice") p.kind = DensityProfile::Kind::Lattice;
    else if (kind->second == "cells") p.kind = DensityProfile::Kind::Cells;
    else throw std::runtime_error("unknown profile kind " + kind->second);
    if (auto t = p.meta.find("t"); t != p.meta.end()) p.t = std::stod(t->second);
    return p;
}

double pair_profile(const DensityProfile& profile, const TestFunction& g, long k, bool normalise) {
    const long res = profile.resolution();
    if (profile.kind == DensityProfile::Kind::Cells) {
        const double du = 1.0 / static_cast<double>(res);
        double sum = 0.0;
        for (std::size_t i = 0; i < profile.u.size(); ++i) {
            const double a = profile.u[i] - 0.5 * du;
            const double cell = boost::math::quadrature::gauss<double, 5>::integrate(g, a, a + du);
            sum += profile.value[i] * cell;
        }
        return sum;
    }
    const double n = static_cast<double>(res);
    std::vector<double> weights;
    if (k > 0) weights = cesaro_site_weights(res, k);
    double sum = 0.0;
    for (std::size_t i = 0; i < profile.u.size(); ++i) {
        const long x = std::lround(profile.u[i] * n);
        const double w = k > 0 ? weights[static_cast<std::size_t>(x + res)] : 1.0;
        sum += w * profile.value[i] * g(static_cast<double>(x) / n);
    }
    sum /= n;
    if (k > 0 && normalise) sum /= cesaro_total_weight(k);
    return sum;
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size()) throw std::invalid_argument("trapezoid: length mismatch");
    double sum = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) sum += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
    return sum;
}

}  // namespace hydro
