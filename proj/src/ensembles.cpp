#include "hydro/ensembles.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace hydro {

TransferMatrix::TransferMatrix(double lambda, double q) : lambda_(lambda), q_(q) {
    if (!std::isfinite(lambda) || !std::isfinite(q))
        throw std::domain_error("transfer matrix needs finite lambda and q");
    shift_ = std::max({0.0, 0.5 * lambda, lambda - q});
    t_[0][0] = std::exp(-shift_);
    t_[0][1] = t_[1][0] = std::exp(0.5 * lambda - shift_);
    t_[1][1] = std::exp(lambda - q - shift_);
    disc_ = std::hypot(t_[0][0] - t_[1][1], 2.0 * t_[0][1]);
}

double TransferMatrix::log_leading_eigenvalue() const {
    return shift_ + std::log(0.5 * (t_[0][0] + t_[1][1] + disc_));
}

double TransferMatrix::eigenvalue_ratio() const {
    const double mu = 0.5 * (t_[0][0] + t_[1][1] + disc_);
    const double det = t_[0][0] * t_[1][1] - t_[0][1] * t_[0][1];
    return det / (mu * mu);
}

double TransferMatrix::occupied_weight() const {
    const double a = t_[0][0];
    const double c = t_[1][1];
    const double b2 = t_[0][1] * t_[0][1];
    // mu - a, written without cancellation on either side of a == c.
    const double gap = a > c ? 2.0 * b2 / (disc_ + a - c) : 0.5 * (c - a + disc_);
    const double g2 = gap * gap;
    return g2 / (b2 + g2);
}

double pressure_minus(double lambda) {
    // log(1 + e^lambda) without overflow
    return lambda > 0.0 ? lambda + std::log1p(std::exp(-lambda)) : std::log1p(std::exp(lambda));
}

double pressure_plus(double lambda, double q) {
    return TransferMatrix(lambda, q).log_leading_eigenvalue();
}

double pressure(double lambda, Family family, double q) {
    return family == Family::Minus ? pressure_minus(lambda) : pressure_plus(lambda, q);
}

double rho_of_lambda(double lambda, Family family, double q) {
    if (family == Family::Minus) return 1.0 / (1.0 + std::exp(-lambda));
    return TransferMatrix(lambda, q).occupied_weight();
}

double compressibility(double lambda, Family family, double q) {
    const double rho = rho_of_lambda(lambda, family, q);
    const double base = rho * (1.0 - rho);
    if (family == Family::Minus) return base;
    const double kappa = TransferMatrix(lambda, q).eigenvalue_ratio();
    return base * (1.0 + kappa) / (1.0 - kappa);
}

double lambda_of_rho(double rho, Family family, double q) {
    if (!(rho > 0.0 && rho < 1.0))
        throw std::domain_error("lambda_of_rho: density " + std::to_string(rho) + " not in (0,1)");
    const double logit = std::log(rho / (1.0 - rho));
    if (family == Family::Minus) return logit;

    double lo = -40.0;
    double hi = 40.0;
    while (rho_of_lambda(lo, family, q) > rho) lo *= 2.0;
    while (rho_of_lambda(hi, family, q) < rho) hi *= 2.0;

    auto residual = [&](double lambda) {
        return std::pair{rho_of_lambda(lambda, family, q) - rho, compressibility(lambda, family, q)};
    };
    std::uintmax_t max_iter = 200;
    const double guess = std::clamp(logit + 0.5 * q, lo, hi);
    const double lambda = boost::math::tools::newton_raphson_iterate(
        residual, guess, lo, hi, std::numeric_limits<double>::digits - 4, max_iter);
    if (std::abs(rho_of_lambda(lambda, family, q) - rho) > 1e-10)
        throw std::runtime_error("lambda_of_rho did not converge for rho=" + std::to_string(rho));
    return lambda;
}

double q_of_rho(double rho, Family family, double q) {
    const double lambda = lambda_of_rho(rho, family, q);
    return pressure(lambda, family, q) - rho * lambda;
}

namespace {

void check_density(double rho) {
    if (!(rho >= 0.0 && rho <= 1.0))
        throw std::domain_error("phi: density " + std::to_string(rho) + " not in [0,1]");
}

struct PhiParts {
    double a, r;
};

PhiParts reduced(const ModelParams& p) {
    const double a = p.alpha() / p.theta();
    const double b = p.beta() / p.theta();
    return {a, (a - b) / (1.0 + a)};
}

}  // namespace

// With theta normalised to one, the closed form
//   -(1/(2 r^2)) (a/rho + b/(1-rho)) (1 - sqrt(1 - 4 r rho (1-rho))) + a/r
// equals [2(1+a) rho - 4 a rho (1-rho) / g] / g with g = 1 + sqrt(1 - s),
// s = 4 r rho (1-rho); the latter has no 1/r and covers r = 0.
double phi(double rho, const ModelParams& params) {
    check_density(rho);
    const auto [a, r] = reduced(params);
    const double s = 4.0 * r * rho * (1.0 - rho);
    const double g = 1.0 + std::sqrt(1.0 - s);
    const double num = 2.0 * (1.0 + a) * rho - 4.0 * a * rho * (1.0 - rho) / g;
    return params.theta() * num / g;
}

double phi_slope(double rho, const ModelParams& params) {
    check_density(rho);
    const auto [a, r] = reduced(params);
    const double s = 4.0 * r * rho * (1.0 - rho);
    const double ds = 4.0 * r * (1.0 - 2.0 * rho);
    const double root = std::sqrt(1.0 - s);
    const double g = 1.0 + root;
    const double dg = -ds / (2.0 * root);
    const double w = rho * (1.0 - rho);
    const double num = 2.0 * (1.0 + a) * rho - 4.0 * a * w / g;
    const double dnum = 2.0 * (1.0 + a) - 4.0 * a * (1.0 - 2.0 * rho) / g + 4.0 * a * w * dg / (g * g);
    return params.theta() * (dnum * g - num * dg) / (g * g);
}

double canonical_log_partition(int size, int n, Family family, double q) {
    if (size < 1 || size > 24) throw std::invalid_argument("canonical_log_partition: size must be in [1, 24]");
    if (n < 0 || n > size) throw std::out_of_range("canonical_log_partition: n out of range");
    const double pair_weight = family == Family::Plus ? std::exp(-q) : 1.0;
    // z[count][last occupancy]
    std::vector<std::array<double, 2>> z(static_cast<std::size_t>(n) + 1, {0.0, 0.0});
    z[0][0] = 1.0;
    if (n >= 1) z[1][1] = 1.0;
    for (int site = 1; site < size; ++site) {
        std::vector<std::array<double, 2>> next(z.size(), {0.0, 0.0});
        for (std::size_t c = 0; c < z.size(); ++c) {
            next[c][0] = z[c][0] + z[c][1];
            if (c >= 1) next[c][1] = z[c - 1][0] + pair_weight * z[c - 1][1];
        }
        z = std::move(next);
    }
    const auto& last = z[static_cast<std::size_t>(n)];
    return std::log(last[0] + last[1]);
}

EnsembleTable::EnsembleTable(const ModelParams& params) : params_(params), max_phi_slope_(0.0) {
    constexpr int kSamples = 4000;
    for (int i = 0; i <= kSamples; ++i)
        max_phi_slope_ = std::max(max_phi_slope_, phi_slope(static_cast<double>(i) / kSamples, params_));
}

double EnsembleTable::flux_map(double rho, Family f) const {
    return f == Family::Minus ? rho : phi(rho);
}

double EnsembleTable::flux_map_slope(double rho, Family f) const {
    return f == Family::Minus ? 1.0 : phi_slope(rho, params_);
}

}  // namespace hydro
