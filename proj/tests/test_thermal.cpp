#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hybridbec/bdg.hpp"
#include "hybridbec/errors.hpp"
#include "hybridbec/thermal.hpp"

using namespace hybridbec;

namespace {

PhysicalParams weak_params() {
    PhysicalParams p;
    p.omega_m = 1.4;
    p.lambda_a = 0.01;
    p.lambda_m = 0.005;
    p.N_a = 1000;
    p.N_m = 100;
    return p;
}

struct Fixture {
    PhysicalParams p = weak_params();
    RadialGrid g = build_grid(8, 200);
    CondensateState st = solve_coupled_gpe(p, g);
    BdgOptions opts = [] {
        BdgOptions o;
        o.levels = LevelConvention::oscillator;
        return o;
    }();
};

Fixture& fixture() {
    static Fixture f;
    return f;
}

PhysicalParams at_temperature(PhysicalParams p, double T) {
    p.temperature = T;
    return p;
}

}  // namespace

TEST_SUITE("thermal") {

TEST_CASE("Bose occupation") {
    CHECK(bose_occupation(std::log(2.0), 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(bose_occupation(3.0, std::numeric_limits<double>::infinity()) == 0.0);
    const double x = 1e-3;
    CHECK(bose_occupation(x, 1.0) == doctest::Approx(1.0 / x - 0.5).epsilon(1e-3));
    // Series 1/x - 1/2 + x/12 is accurate to O(x^3).
    CHECK(bose_occupation(x, 1.0) == doctest::Approx(1.0 / x - 0.5 + x / 12.0).epsilon(1e-12));
    CHECK_THROWS_AS(bose_occupation(0.0, 1.0), NonPositiveEnergy);
    CHECK_THROWS_AS(bose_occupation(-1.0, 1.0), NonPositiveEnergy);
    CHECK_THROWS_AS(bose_occupation(-1.0, 1.0), DomainError);
}

TEST_CASE("occupation decreases with energy and increases with temperature") {
    double prev = bose_occupation(0.1, 1.0);
    for (double e = 0.2; e < 10.0; e += 0.1) {
        const double f = bose_occupation(e, 1.0);
        CHECK(f < prev);
        prev = f;
    }
    CHECK(bose_occupation(1.0, 0.5) > bose_occupation(1.0, 1.0));
}

TEST_CASE("active-mode filter") {
    Mode m;
    m.energy = {1.0, 0.0};
    CHECK(thermally_active(m));
    m.zero_mode = true;
    CHECK_FALSE(thermally_active(m));
    m = {};
    m.energy = {-1.0, 0.0};
    CHECK_FALSE(thermally_active(m));
    m = {};
    m.energy = {1.0, 0.0};
    m.normalizable = false;
    CHECK_FALSE(thermally_active(m));
    m = {};
    m.energy = {0.0, 0.5};
    m.unstable = true;
    CHECK_FALSE(thermally_active(m));
}

TEST_CASE("zero temperature without v leaves only the condensate") {
    PhysicalParams p;
    p.omega_m = 1.4;
    p.N_a = 1000;
    p.N_m = 100;
    const auto g = build_grid(8, 200);
    const auto st = gaussian_ansatz(p, g);
    BdgOptions o;
    o.levels = LevelConvention::oscillator;
    const auto [a, m] = block_2x2_spectrum(st, p, g, 8, o);
    for (const auto& mode : a.modes)
        for (double v : mode.v) REQUIRE(v == 0.0);
    const auto d = density_profile(st, a, m, p, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(d.rho_a_thermal[i] == 0.0);
        CHECK(d.rho_m_thermal[i] == 0.0);
        CHECK(d.rho_a_cond[i] == st.phi_a[i] * st.phi_a[i]);
    }
    const auto t = total_numbers(d, g);
    CHECK(t.N_a == doctest::Approx(p.N_a).epsilon(1e-6));
    CHECK(t.N_m == doctest::Approx(p.N_m).epsilon(1e-6));
    CHECK(t.atom_equivalent == doctest::Approx(p.N_a + 2 * p.N_m).epsilon(1e-6));
}

TEST_CASE("zero temperature: quantum depletion is the sum of |v|^2") {
    auto& f = fixture();
    const auto [a, m] = block_2x2_spectrum(f.st, f.p, f.g, 16, f.opts);
    const auto d = density_profile(f.st, a, m, f.p, f.g);
    std::vector<double> expected(f.g.size(), 0.0);
    bool some_v = false;
    for (const auto& mode : a.modes) {
        if (!thermally_active(mode)) continue;
        for (std::size_t i = 0; i < f.g.size(); ++i) {
            expected[i] += mode.v[i] * mode.v[i];
            some_v = some_v || mode.v[i] != 0.0;
        }
    }
    REQUIRE(some_v);
    for (std::size_t i = 0; i < f.g.size(); ++i)
        CHECK(d.rho_a_thermal[i] == doctest::Approx(expected[i]).epsilon(1e-12).scale(1e-300));

    ThermalOptions off;
    off.quantum_depletion = false;
    const auto d0 = density_profile(f.st, a, m, f.p, f.g, off);
    for (std::size_t i = 0; i < f.g.size(); ++i) {
        CHECK(d0.rho_a_thermal[i] == 0.0);
        CHECK(d0.rho_m_thermal[i] == 0.0);
    }
}

TEST_CASE("densities are nonnegative and the total adds molecules twice") {
    auto& f = fixture();
    const auto [a, m] = block_2x2_spectrum(f.st, f.p, f.g, 16, f.opts);
    const auto d = density_profile(f.st, a, m, at_temperature(f.p, 0.7), f.g);
    for (std::size_t i = 0; i < f.g.size(); ++i) {
        CHECK(d.rho_a_cond[i] >= 0.0);
        CHECK(d.rho_a_thermal[i] >= 0.0);
        CHECK(d.rho_m_cond[i] >= 0.0);
        CHECK(d.rho_m_thermal[i] >= 0.0);
        CHECK(d.rho_total[i] ==
              d.rho_a_cond[i] + d.rho_a_thermal[i] + 2.0 * (d.rho_m_cond[i] + d.rho_m_thermal[i]));
    }
    CHECK(d.T == 0.7);
}

TEST_CASE("thermal density grows with temperature at every node") {
    auto& f = fixture();
    const auto [a, m] = block_2x2_spectrum(f.st, f.p, f.g, 16, f.opts);
    std::vector<DensityProfile> ds;
    for (double T : {0.1, 0.5, 1.0}) ds.push_back(density_profile(f.st, a, m, at_temperature(f.p, T), f.g));
    for (std::size_t k = 1; k < ds.size(); ++k) {
        for (std::size_t i = 0; i < f.g.size(); ++i) {
            CHECK(ds[k].rho_a_thermal[i] >= ds[k - 1].rho_a_thermal[i]);
            CHECK(ds[k].rho_m_thermal[i] >= ds[k - 1].rho_m_thermal[i]);
        }
        CHECK(f.g.integrate(ds[k].rho_a_thermal) > f.g.integrate(ds[k - 1].rho_a_thermal));
    }
}

TEST_CASE("totals are linear in the densities") {
    auto& f = fixture();
    const auto [a, m] = block_2x2_spectrum(f.st, f.p, f.g, 16, f.opts);
    auto d = density_profile(f.st, a, m, at_temperature(f.p, 0.5), f.g);
    const auto t1 = total_numbers(d, f.g);
    for (auto* v : {&d.rho_a_cond, &d.rho_a_thermal, &d.rho_m_cond, &d.rho_m_thermal, &d.rho_total})
        for (double& x : *v) x *= 2.0;
    const auto t2 = total_numbers(d, f.g);
    CHECK(t2.N_a == doctest::Approx(2.0 * t1.N_a).epsilon(1e-14));
    CHECK(t2.N_m == doctest::Approx(2.0 * t1.N_m).epsilon(1e-14));
    CHECK(t2.atom_equivalent == doctest::Approx(2.0 * t1.atom_equivalent).epsilon(1e-14));
    CHECK(std::isfinite(f.g.integrate(d.rho_total)));
}

TEST_CASE("doubling the truncation barely moves the totals at beta = 1") {
    auto& f = fixture();
    const auto p = at_temperature(f.p, 1.0);
    const auto [a16, m16] = block_2x2_spectrum(f.st, p, f.g, 16, f.opts);
    const auto [a32, m32] = block_2x2_spectrum(f.st, p, f.g, 32, f.opts);
    const auto t16 = total_numbers(density_profile(f.st, a16, m16, p, f.g), f.g);
    const auto t32 = total_numbers(density_profile(f.st, a32, m32, p, f.g), f.g);
    CHECK(std::abs(t32.N_a / t16.N_a - 1.0) < 1e-3);
    CHECK(std::abs(t32.N_m / t16.N_m - 1.0) < 1e-3);
    CHECK(std::abs(t32.atom_equivalent / t16.atom_equivalent - 1.0) < 1e-3);
}

TEST_CASE("grid modes enter with degeneracy and unit norm") {
    auto& f = fixture();
    const auto p = at_temperature(f.p, 0.5);
    const auto a = direct_grid_modes(f.st, p, f.g, Species::atom, 1, 6, f.opts);
    const auto m = direct_grid_modes(f.st, p, f.g, Species::molecule, 1, 6, f.opts);
    ThermalReport rep;
    const auto d = density_profile(f.st, a, m, p, f.g, {}, &rep);
    CHECK(rep.included == 12);
    CHECK(rep.max_norm_deviation < 1e-6);

    ModeSet one = a;
    one.modes.resize(1);
    ModeSet none;
    none.species = Species::molecule;
    const auto d1 = density_profile(f.st, one, none, p, f.g);
    const auto& md = one.modes[0];
    const double F = bose_occupation(md.energy.real(), p.beta());
    for (std::size_t i = 0; i < f.g.size(); i += 17)
        CHECK(d1.rho_a_thermal[i] ==
              doctest::Approx(3.0 * (md.u[i] * md.u[i] * F + md.v[i] * md.v[i] * (1.0 + F))).epsilon(1e-12));
}

TEST_CASE("zero modes and negative energies are excluded and counted") {
    auto& f = fixture();
    const auto a = direct_grid_modes(f.st, f.p, f.g, Species::atom, 0, 4, f.opts);
    REQUIRE(a.modes[0].zero_mode);
    ModeSet none;
    none.species = Species::molecule;
    ThermalReport rep;
    density_profile(f.st, a, none, at_temperature(f.p, 0.5), f.g, {}, &rep);
    CHECK(rep.excluded >= 1);
    CHECK(rep.included + rep.excluded == a.modes.size());
}

TEST_CASE("badly normalized modes are rejected") {
    auto& f = fixture();
    auto [a, m] = block_2x2_spectrum(f.st, f.p, f.g, 8, f.opts);
    for (auto& mode : a.modes)
        if (thermally_active(mode)) {
            for (double& x : mode.u) x *= 1.01;
            break;
        }
    CHECK_THROWS_AS(density_profile(f.st, a, m, f.p, f.g), NormalizationError);
}

TEST_CASE("swapping atom and molecule inputs swaps the output blocks") {
    auto& f = fixture();
    const auto p = at_temperature(f.p, 0.5);
    const auto [a, m] = block_2x2_spectrum(f.st, p, f.g, 8, f.opts);
    CondensateState swapped = f.st;
    std::swap(swapped.phi_a, swapped.phi_m);
    const auto d = density_profile(f.st, a, m, p, f.g);
    const auto s = density_profile(swapped, m, a, p, f.g);
    CHECK(d.rho_a_cond == s.rho_m_cond);
    CHECK(d.rho_m_cond == s.rho_a_cond);
    CHECK(d.rho_a_thermal == s.rho_m_thermal);
    CHECK(d.rho_m_thermal == s.rho_a_thermal);
}

TEST_CASE("mode order does not change the result") {
    auto& f = fixture();
    const auto p = at_temperature(f.p, 1.0);
    auto [a, m] = block_2x2_spectrum(f.st, p, f.g, 32, f.opts);
    const auto d = density_profile(f.st, a, m, p, f.g);
    std::reverse(a.modes.begin(), a.modes.end());
    std::rotate(m.modes.begin(), m.modes.begin() + 5, m.modes.end());
    const auto r = density_profile(f.st, a, m, p, f.g);
    for (std::size_t i = 0; i < f.g.size(); ++i) {
        CHECK(r.rho_a_thermal[i] == doctest::Approx(d.rho_a_thermal[i]).epsilon(1e-12).scale(1e-300));
        CHECK(r.rho_m_thermal[i] == doctest::Approx(d.rho_m_thermal[i]).epsilon(1e-12).scale(1e-300));
    }
}

}
