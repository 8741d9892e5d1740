#include "hydro/gibbs.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace hydro {

namespace {

using Pair = std::array<double, 2>;

double logistic(double lambda) { return 1.0 / (1.0 + std::exp(-lambda)); }

/// Factorised weights of a GibbsSpec: per-site potentials and the pair factor.
struct ChainWeights {
    std::vector<Pair> site;
    std::array<Pair, 2> pair;
};

ChainWeights chain_weights(const GibbsSpec& spec) {
    if (spec.size < 1) throw std::invalid_argument("Gibbs interval must contain at least one site");
    const bool interacting = spec.family == Family::Plus && spec.q != 0.0;
    const double p1 = logistic(spec.lambda);
    ChainWeights w;
    w.site.assign(static_cast<std::size_t>(spec.size), Pair{1.0 - p1, p1});
    const double bond = interacting ? std::exp(-spec.q) : 1.0;
    w.pair = {Pair{1.0, 1.0}, Pair{1.0, bond}};
    if (interacting && spec.boundary) {
        if (spec.boundary->left) w.site.front()[1] *= bond;
        if (spec.boundary->right) w.site.back()[1] *= bond;
    }
    return w;
}

std::vector<Pair> forward_pass(const ChainWeights& w) {
    std::vector<Pair> f(w.site.size());
    f[0] = w.site[0];
    for (std::size_t i = 1; i < f.size(); ++i) {
        for (int b = 0; b < 2; ++b)
            f[i][b] = w.site[i][b] * (f[i - 1][0] * w.pair[0][b] + f[i - 1][1] * w.pair[1][b]);
        const double norm = f[i][0] + f[i][1];
        f[i][0] /= norm;
        f[i][1] /= norm;
    }
    return f;
}

}  // namespace

std::vector<std::uint8_t> sample_chain(const GibbsSpec& spec, Rng& rng) {
    const ChainWeights w = chain_weights(spec);
    const std::vector<Pair> f = forward_pass(w);
    std::vector<std::uint8_t> out(f.size());
    const std::size_t last = f.size() - 1;
    out[last] = rng.uniform() * (f[last][0] + f[last][1]) < f[last][1];
    for (std::size_t i = last; i-- > 0;) {
        const int next = out[i + 1];
        const double w0 = f[i][0] * w.pair[0][next];
        const double w1 = f[i][1] * w.pair[1][next];
        out[i] = rng.uniform() * (w0 + w1) < w1;
    }
    return out;
}

Configuration sample_full_lattice(const ModelParams& params, double lambda, Rng& rng) {
    const long n = params.n();
    Configuration cfg(n);
    const double p = logistic(lambda);
    for (Site x = -n; x < 0; ++x) cfg.set(x, rng.bernoulli(p));
    GibbsSpec bulk{static_cast<int>(n + 1), Family::Plus, lambda, params.q(), std::nullopt};
    const auto occ = sample_chain(bulk, rng);
    for (Site x = 0; x <= n; ++x) cfg.set(x, occ[static_cast<std::size_t>(x)]);
    for (Site x = n + 1; x <= 2 * n; ++x) cfg.set(x, rng.bernoulli(p));
    return cfg;
}

std::vector<double> exact_marginals(const GibbsSpec& spec) {
    const ChainWeights w = chain_weights(spec);
    const std::vector<Pair> f = forward_pass(w);
    const std::size_t n = f.size();
    std::vector<double> out(n);
    Pair g{1.0, 1.0};
    for (std::size_t i = n; i-- > 0;) {
        const double m0 = f[i][0] * g[0];
        const double m1 = f[i][1] * g[1];
        out[i] = m1 / (m0 + m1);
        if (i == 0) break;
        Pair prev;
        for (int a = 0; a < 2; ++a)
            prev[a] = w.pair[a][0] * w.site[i][0] * g[0] + w.pair[a][1] * w.site[i][1] * g[1];
        const double norm = prev[0] + prev[1];
        g = {prev[0] / norm, prev[1] / norm};
    }
    return out;
}

std::vector<double> full_lattice_marginals(const ModelParams& params, double lambda) {
    const long n = params.n();
    std::vector<double> out(static_cast<std::size_t>(params.site_count()), logistic(lambda));
    GibbsSpec bulk{static_cast<int>(n + 1), Family::Plus, lambda, params.q(), std::nullopt};
    const auto inner = exact_marginals(bulk);
    for (long x = 0; x <= n; ++x) out[static_cast<std::size_t>(x + n)] = inner[static_cast<std::size_t>(x)];
    return out;
}

namespace {

std::vector<double> normalise(std::vector<double> weights) {
    double total = 0.0;
    for (double v : weights) total += v;
    for (double& v : weights) v /= total;
    return weights;
}

}  // namespace

std::vector<double> enumerate_distribution(const GibbsSpec& spec) {
    if (spec.size < 1 || spec.size > 20) throw std::invalid_argument("enumeration limited to 1..20 sites");
    const double q = spec.family == Family::Plus ? spec.q : 0.0;
    const std::size_t states = std::size_t{1} << spec.size;
    std::vector<double> weights(states);
    for (std::size_t s = 0; s < states; ++s) {
        auto bit = [&](int i) { return static_cast<int>((s >> i) & 1U); };
        int particles = 0;
        int pairs = 0;
        for (int i = 0; i < spec.size; ++i) {
            particles += bit(i);
            if (i + 1 < spec.size) pairs += bit(i) * bit(i + 1);
        }
        if (spec.boundary) pairs += spec.boundary->left * bit(0) + bit(spec.size - 1) * spec.boundary->right;
        weights[s] = std::exp(spec.lambda * particles - q * pairs);
    }
    return normalise(std::move(weights));
}

std::vector<double> enumerate_full_lattice(const ModelParams& params, double lambda) {
    const long sites = params.site_count();
    if (sites > 20) throw std::invalid_argument("full-lattice enumeration limited to 20 sites");
    const long n = params.n();
    const std::size_t states = std::size_t{1} << sites;
    std::vector<double> weights(states);
    for (std::size_t s = 0; s < states; ++s) {
        std::vector<std::uint8_t> occ(static_cast<std::size_t>(sites));
        for (long i = 0; i < sites; ++i) occ[static_cast<std::size_t>(i)] = (s >> i) & 1U;
        Configuration cfg(n, std::move(occ));
        weights[s] = std::exp(lambda * static_cast<double>(cfg.count()) - hamiltonian(cfg, params));
    }
    return normalise(std::move(weights));
}

}  // namespace hydro
