#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hybridbec/errors.hpp"
#include "hybridbec/uniform_gas.hpp"

using namespace hybridbec;

namespace {

constexpr double pi = std::numbers::pi;

PhysicalParams fig3_params() {
    PhysicalParams p;
    p.resonance = {5e-7, 15.5, 0.01, 16.5};
    return p;
}

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_SUITE("uniform_gas") {

TEST_CASE("uniform chemical potential") {
    PhysicalParams p;
    CHECK(uniform_mu(p, 0.0, 0.0) == 0.0);
    p.lambda_a = 0.1;
    CHECK(uniform_mu(p, 4.0, 0.0) == doctest::Approx(0.4));
    p.lambda_am = 0.2;
    p.alpha = 0.5;
    CHECK(uniform_mu(p, 4.0, 1.0) == doctest::Approx(-0.4).epsilon(1e-14));
    CHECK_THROWS_AS(uniform_mu(p, -1.0, 0.0), DomainError);
}

TEST_CASE("free-particle dispersion at zero scattering length") {
    PhysicalParams p;
    p.mass = 2.0;
    p.hbar = 1.5;
    for (double k : {0.0, 0.3, 2.0, 17.0}) {
        const auto e = dispersion(k, 1.0, 0.0, p);
        CHECK(e.real() == doctest::Approx(p.hbar * p.hbar * k * k / (2 * p.mass)).epsilon(1e-15));
        CHECK(e.imag() == 0.0);
    }
}

TEST_CASE("phonon slope at small momentum") {
    PhysicalParams p;
    const double n = 0.3, a = 0.05;
    const double slope = 0.5 * std::sqrt(16 * pi * n * a);
    const double s1 = dispersion(1e-4, n, a, p).real() / 1e-4;
    const double s2 = dispersion(2e-4, n, a, p).real() / 2e-4;
    CHECK(std::abs(s1 / slope - 1.0) < 1e-3);
    CHECK(std::abs(s2 / slope - 1.0) < 1e-3);
    CHECK(std::abs(s2 / s1 - 1.0) < 1e-3);
}

TEST_CASE("stability boundary is exactly zero") {
    PhysicalParams p;
    const double n = 0.7, a = -0.02;
    // Walk to the floating-point momentum where p^2 + 16 pi n a evaluates to exactly zero.
    double k = std::sqrt(16 * pi * n * std::abs(a));
    for (int it = 0; it < 64 && k * k + 16 * pi * n * a != 0.0; ++it)
        k = std::nextafter(k, k * k + 16 * pi * n * a < 0.0 ? 1e300 : 0.0);
    REQUIRE(k * k + 16 * pi * n * a == 0.0);
    CHECK(dispersion(k, n, a, p) == std::complex<double>(0.0, 0.0));
    CHECK(dispersion(0.5 * k, n, a, p).real() == 0.0);
    CHECK(dispersion(0.5 * k, n, a, p).imag() > 0.0);
    CHECK(dispersion(2.0 * k, n, a, p).imag() == 0.0);
}

TEST_CASE("dispersion squared reproduces the closed form") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> up(0.0, 5.0), un(0.0, 3.0), ua(-0.2, 0.2);
    PhysicalParams p;
    p.mass = 1.3;
    p.hbar = 0.9;
    const double c = p.hbar * p.hbar / (2 * p.mass);
    for (int k = 0; k < 100; ++k) {
        const double q = up(rng), n = un(rng), a = ua(rng);
        const auto e = dispersion(q, n, a, p);
        const double rhs = c * c * q * q * (q * q + 16 * pi * n * a);
        CHECK((e * e).real() == doctest::Approx(rhs).epsilon(1e-13).scale(1e-300));
        CHECK(std::abs((e * e).imag()) <= 1e-13 * std::abs(rhs));
    }
    CHECK_THROWS_AS(dispersion(-1.0, 1.0, 0.1, p), DomainError);
}

TEST_CASE("critical number") {
    CHECK(critical_number(1e4, -1.0) == doctest::Approx(1963.495408493621).epsilon(1e-14));
    CHECK(critical_number(2.0, -0.5) == doctest::Approx(2.0 * critical_number(2.0, -1.0)).epsilon(1e-15));
    CHECK_THROWS_AS(critical_number(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(critical_number(1.0, 0.1), DomainError);
    CHECK_THROWS_AS(critical_number(0.0, -0.1), DomainError);
}

TEST_CASE("critical number sits on the stability boundary for a cubic density estimate") {
    PhysicalParams p;
    for (double R0 : {0.1, 1.0, 3.0, 250.0})
        for (double a : {-1e-3, -0.1}) {
            const double N0 = critical_number(R0, a);
            const double n = N0 / (R0 * R0 * R0);
            const double k = pi / R0;
            CHECK(k * k == doctest::Approx(16 * pi * n * std::abs(a)).epsilon(1e-12));
            CHECK(std::abs(dispersion(k, n, a, p)) < 1e-6 * std::abs(dispersion(k, 0.0, 0.0, p)));
        }
}

TEST_CASE("with the planar density estimate the boundary differs by a factor R0") {
    for (double R0 : {0.5, 1.0, 4.0}) {
        const double a = -0.01;
        const double N0 = critical_number(R0, a);
        const double n = N0 / (R0 * R0);
        CHECK(16 * pi * n * std::abs(a) / (pi * pi / (R0 * R0)) == doctest::Approx(R0).epsilon(1e-12));
    }
}

TEST_CASE("depletion number") {
    CHECK(depletion_number(1e6, 1e-9, 0.0) == 1e6);
    const double N0 = depletion_number(1e6, 1e6 / 1e15, 5e-7);
    CHECK(std::abs(N0 - 983200.0) <= 50.0);
    // Independent arithmetic: N a^3 / (pi V) = 3.979e-5.
    const double x = 1e6 * std::pow(5e-7, 3) / (pi * 1e-9);
    CHECK(x == doctest::Approx(3.979e-5).epsilon(1e-3));
    CHECK(N0 == doctest::Approx(1e6 * (1.0 - 8.0 / 3.0 * std::sqrt(x))).epsilon(1e-14));
    CHECK(N0 < 1e6);
    CHECK(N0 > 0.0);
}

TEST_CASE("depletion fraction depends only on the density") {
    const double f1 = depletion_number(1e6, 1e-9, 5e-7) / 1e6;
    const double f2 = depletion_number(3e6, 3e-9, 5e-7) / 3e6;
    const double f3 = depletion_number(1e3, 1e-12, 5e-7) / 1e3;
    CHECK(f1 == doctest::Approx(f2).epsilon(1e-14));
    CHECK(f1 == doctest::Approx(f3).epsilon(1e-14));
}

TEST_CASE("depletion domain errors") {
    CHECK_THROWS_AS(depletion_number(1e6, 1e-9, -1e-7), DomainError);
    CHECK_THROWS_AS(depletion_number(1e6, 1e-9, 1e-4), DomainError);  // bracket negative
    CHECK_THROWS_AS(depletion_number(0.0, 1e-9, 1e-7), DomainError);
}

TEST_CASE("figure 3 curve: off-resonant limit, zero crossing and branches") {
    const auto p = fig3_params();
    const UniformGasSettings s;
    const auto far = figure3_curve(p, s, {15.5 - 1e4, 15.51, 15.505});
    CHECK(far[0].source == Branch::depletion);
    CHECK(far[0].N0 == doctest::Approx(depletion_number(1e6, 1e-9, 5e-7)).epsilon(1e-5));
    CHECK(far[1].a_eff == 0.0);
    CHECK(far[1].N0 == 1e6);
    CHECK(far[2].source == Branch::critical);
    CHECK(far[2].a_eff < 0.0);
    CHECK(far[2].unstable == (1e6 > far[2].N0));
    for (const auto& pt : far) {
        CHECK(pt.N0 > 0.0);
        CHECK(pt.N0 <= 1e6);
        CHECK(pt.n == 1e15);
    }
}

TEST_CASE("figure 3 curve: attractive side vanishes linearly at the resonance") {
    const auto p = fig3_params();
    std::vector<double> d{1e-5, 2e-5, 5e-5, 1e-4, 2e-4, 5e-4, 1e-3}, Bs;
    for (double x : d) Bs.push_back(15.5 + x);
    const auto pts = figure3_curve(p, {}, Bs);
    std::vector<double> n0;
    for (const auto& pt : pts) {
        REQUIRE(pt.source == Branch::critical);
        n0.push_back(pt.N0);
    }
    CHECK(std::abs(loglog_slope(d, n0) - 1.0) < 0.05);
}

TEST_CASE("figure 3 curve: repulsive side decreases toward the resonance") {
    const auto p = fig3_params();
    const auto below = figure3_curve(p, {}, {15.3, 15.4, 15.45, 15.48, 15.49});
    for (std::size_t k = 1; k < below.size(); ++k) CHECK(below[k].N0 < below[k - 1].N0);
    const auto above = figure3_curve(p, {}, {15.51, 15.52, 15.6, 16.5});
    for (std::size_t k = 1; k < above.size(); ++k) CHECK(above[k].N0 < above[k - 1].N0);
}

TEST_CASE("figure 3 curve: equal a_eff gives equal N0") {
    auto p = fig3_params();
    auto q = p;
    q.resonance.B0 = 20.0;  // shift the whole curve; a_eff depends only on B - B0
    const auto a = figure3_curve(p, {}, {15.49, 15.505});
    const auto b = figure3_curve(q, {}, {19.99, 20.005});
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].a_eff == doctest::Approx(b[k].a_eff).epsilon(1e-9));
        CHECK(a[k].N0 == doctest::Approx(b[k].N0).epsilon(1e-9));
        CHECK(a[k].source == b[k].source);
    }
}

TEST_CASE("figure 3 curve: density model and explicit R0") {
    const auto p = fig3_params();
    UniformGasSettings paper, cubic, explicit_r;
    cubic.model = DensityModel::cubic;
    explicit_r.R0 = 1e-3;
    const double B = 15.505;
    const double a = figure3_curve(p, paper, {B})[0].a_eff;
    CHECK(figure3_curve(p, paper, {B})[0].N0 == doctest::Approx(critical_number(std::sqrt(1e-9), a)));
    CHECK(figure3_curve(p, cubic, {B})[0].N0 == doctest::Approx(critical_number(1e-3, a)));
    CHECK(figure3_curve(p, explicit_r, {B})[0].N0 == doctest::Approx(critical_number(1e-3, a)));
    CHECK(parse_density_model("cubic") == DensityModel::cubic);
    CHECK_THROWS_AS(parse_density_model("cylindrical"), ConfigError);
}

TEST_CASE("figure 3 curve: errors name the field") {
    const auto p = fig3_params();
    CHECK_THROWS_AS(figure3_curve(p, {}, {15.5}), ResonanceSingularity);
    CHECK_THROWS_WITH(figure3_curve(p, {}, {15.5}), doctest::Contains("B = 15.5"));
    CHECK_THROWS_WITH_AS(figure3_curve(p, {}, {15.4995}), doctest::Contains("B = 15.4995"), DomainError);
}

}
