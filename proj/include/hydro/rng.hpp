#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hydro {

/// Name recorded in run manifests.
inline constexpr const char* kRngName = "mt19937_64";

/// splitmix64 finaliser; used to derive independent replica seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t replica_seed(std::uint64_t base_seed, std::uint64_t replica) {
    return mix64(mix64(base_seed) ^ mix64(replica + 0x632be59bd9b4e019ULL));
}

/// Engine plus the two variates the project needs. The conversions are
/// spelled out (not std distributions) so streams are identical across
/// standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Unit-rate exponential. 1 - u is exact for u on the 2^-53 grid, so
    /// plain log loses nothing against log1p and is much cheaper.
    double exponential() { return -std::log(1.0 - uniform()); }

    bool bernoulli(double p) { return uniform() < p; }

    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace hydro
