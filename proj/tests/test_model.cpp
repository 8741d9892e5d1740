#include "hydro/model.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace hydro;

namespace {

Configuration from_bits(long n, std::uint64_t bits) {
    std::vector<std::uint8_t> occ(static_cast<std::size_t>(3 * n + 1));
    for (std::size_t i = 0; i < occ.size(); ++i) occ[i] = (bits >> i) & 1U;
    return Configuration(n, occ);
}

/// Rates written out case by case from the definition, independent of
/// bond_rate.
double reference_rate(const Configuration& c, Site x, const ModelParams& p) {
    const long n = p.n();
    auto eta = [&](Site y) { return y < -n || y > 2 * n ? 0 : c(y); };
    if (eta(x) == eta(x + 1)) return 0.0;
    if (x >= 1 && x <= n - 2) {
        const bool right = eta(x) == 1;
        const int behind = right ? eta(x - 1) : eta(x + 2);
        const int ahead = right ? eta(x + 2) : eta(x - 1);
        return p.theta() + p.alpha() * behind + p.beta() * ahead;
    }
    if (x == -1 || x == 0 || x == n - 1 || x == n) {
        const double dh = hamiltonian(swap(c, x), p) - hamiltonian(c, p);
        return std::exp(-dh / 2.0);
    }
    return 1.0;
}

}  // namespace

TEST_CASE("model parameters are validated") {
    CHECK_THROWS_AS(ModelParams(0.0, 1.0, 1.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(1.0, -1.0, 0.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(1.0, 0.0, -1.5, 8), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(1.0, 2.0, 0.0, 3), std::invalid_argument);
    CHECK_NOTHROW(ModelParams(1.0, 2.0, 0.0, 4));
    CHECK(ModelParams(1.0, 2.0, 0.0, 8).q() == doctest::Approx(std::log(3.0)).epsilon(1e-15));
    CHECK(ModelParams(1.0, 1.0, 1.0, 8).q() == 0.0);
    CHECK(ModelParams(2.0, 0.5, 0.5, 8).q() == 0.0);
    const ModelParams p(1.0, 2.0, 0.0, 10);
    CHECK(p.site_count() == 31);
    CHECK(p.bond_count() == 30);
}

TEST_CASE("bond classes and regions") {
    const long n = 8;
    CHECK(classify_bond(-1, n) == BondClass::Boundary);
    CHECK(classify_bond(0, n) == BondClass::Boundary);
    CHECK(classify_bond(n - 1, n) == BondClass::Boundary);
    CHECK(classify_bond(n, n) == BondClass::Boundary);
    for (Site x = 1; x <= n - 2; ++x) CHECK(classify_bond(x, n) == BondClass::FiniteRange);
    CHECK(classify_bond(-n, n) == BondClass::Ssep);
    CHECK(classify_bond(-2, n) == BondClass::Ssep);
    CHECK(classify_bond(n + 1, n) == BondClass::Ssep);
    CHECK(classify_bond(2 * n - 1, n) == BondClass::Ssep);
    CHECK(region_of(-1, n) == Region::LeftReservoir);
    CHECK(region_of(0, n) == Region::Bulk);
    CHECK(region_of(n, n) == Region::Bulk);
    CHECK(region_of(n + 1, n) == Region::RightReservoir);
}

TEST_CASE("configuration validation and accessors") {
    CHECK_THROWS(Configuration(4, std::vector<std::uint8_t>(12, 0)));
    std::vector<std::uint8_t> bad(13, 0);
    bad[3] = 2;
    CHECK_THROWS(Configuration(4, bad));
    Configuration c(4);
    CHECK(c.count() == 0);
    c.set(-4, 1);
    c.set(8, 1);
    CHECK(c.count() == 2);
    CHECK(c.at_or_empty(-5) == 0);
    CHECK(c.at_or_empty(9) == 0);
    CHECK_THROWS_AS(c.set(9, 1), std::out_of_range);
    CHECK_THROWS_AS(c.swap_bond(8), std::out_of_range);
}

TEST_CASE("hamiltonian counts bulk neighbour pairs only") {
    const ModelParams p(1.0, 2.0, 0.0, 4);
    Configuration c(4);
    for (Site x = -4; x <= 8; ++x) c.set(x, 1);
    // pairs (0,1),(1,2),(2,3),(3,4)
    CHECK(hamiltonian(c, p) == doctest::Approx(4.0 * std::log(3.0)));
    Configuration d(4);
    d.set(-1, 1);
    d.set(0, 1);
    d.set(4, 1);
    d.set(5, 1);
    CHECK(hamiltonian(d, p) == 0.0);
}

TEST_CASE("single particle in a reservoir has two unit rates") {
    const ModelParams p(1.0, 2.0, 0.0, 8);
    Configuration c(8);
    c.set(-4, 1);
    double total = 0.0;
    int nonzero = 0;
    for (Site x = -8; x < 16; ++x) {
        const double r = bond_rate(c, x, p);
        total += r;
        nonzero += r > 0.0;
    }
    CHECK(nonzero == 2);
    CHECK(total == 2.0);
    CHECK(bond_rate(c, -5, p) == 1.0);
    CHECK(bond_rate(c, -4, p) == 1.0);
}

TEST_CASE("finite-range rate examples") {
    const ModelParams p(1.0, 2.0, 0.5, 8);
    Configuration c(8);
    // particle at 3 with a particle behind it at 2: jump 3 -> 4
    c.set(2, 1);
    c.set(3, 1);
    CHECK(bond_rate(c, 3, p) == doctest::Approx(1.0 + 2.0));
    c.set(5, 1);
    CHECK(bond_rate(c, 3, p) == doctest::Approx(1.0 + 2.0 + 0.5));
    // leftward jump 2 -> 1: behind is site 3, ahead is site 0
    CHECK(bond_rate(c, 1, p) == doctest::Approx(1.0 + 2.0));
    CHECK(bond_rate(c, 2, p) == 0.0);
}

TEST_CASE("rates agree with the case-by-case definition on every configuration") {
    for (const auto& p : {ModelParams(1.0, 2.0, 0.0, 4), ModelParams(1.0, 1.0, 1.0, 4), ModelParams(0.7, 0.4, 1.3, 4)}) {
        const long n = p.n();
        for (std::uint64_t bits = 0; bits < (1ULL << (3 * n + 1)); ++bits) {
            const Configuration c = from_bits(n, bits);
            for (Site x = -n; x < 2 * n; ++x) {
                REQUIRE(bond_rate(c, x, p) == doctest::Approx(reference_rate(c, x, p)).epsilon(1e-14));
                REQUIRE(delta_h_swap(c, x, p) ==
                        doctest::Approx(hamiltonian(swap(c, x), p) - hamiltonian(c, p)).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("detailed balance holds on every bond of a small lattice") {
    for (const auto& p : {ModelParams(1.0, 2.0, 0.0, 4), ModelParams(1.0, 1.0, 1.0, 4), ModelParams(1.0, 0.0, 3.0, 4)}) {
        const long n = p.n();
        double worst = 0.0;
        for (std::uint64_t bits = 0; bits < (1ULL << (3 * n + 1)); ++bits) {
            const Configuration c = from_bits(n, bits);
            const double h = hamiltonian(c, p);
            for (Site x = -n; x < 2 * n; ++x) {
                const Configuration s = swap(c, x);
                const double lhs = bond_rate(c, x, p) * std::exp(hamiltonian(s, p) - h);
                const double rhs = bond_rate(s, x, p);
                if (rhs > 0.0) worst = std::max(worst, std::abs(lhs - rhs) / rhs);
                else REQUIRE(lhs == 0.0);
            }
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("rates are positive exactly on bonds with differing sites") {
    const ModelParams p(1.0, 2.0, 0.0, 4);
    for (std::uint64_t bits = 0; bits < (1ULL << 13); bits += 7) {
        const Configuration c = from_bits(4, bits);
        for (Site x = -4; x < 8; ++x) CHECK((bond_rate(c, x, p) > 0.0) == (c(x) != c(x + 1)));
    }
}

TEST_CASE("swap is an involution and conserves particles") {
    const Configuration c = from_bits(5, 0b1011001110010110ULL);
    for (Site x = -5; x < 10; ++x) {
        const Configuration s = swap(c, x);
        CHECK(s.count() == c.count());
        CHECK(swap(s, x) == c);
    }
    CHECK_THROWS_AS(swap(c, 10), std::out_of_range);
    CHECK_THROWS_AS(swap(c, -6), std::out_of_range);
    CHECK_THROWS_AS(bond_rate(c, 10, ModelParams(1.0, 2.0, 0.0, 5)), std::out_of_range);
}
