#include "hybridbec/condensate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "hybridbec/errors.hpp"

namespace hybridbec {

namespace {

constexpr double kPi = std::numbers::pi;

double sign_of_molecule_field(const PhysicalParams& p) { return p.alpha > 0.0 ? -1.0 : 1.0; }

std::vector<double> atom_mean_field(const PhysicalParams& p, const RadialGrid& grid, std::span<const double> phi_a,
                                    std::span<const double> phi_m) {
    std::vector<double> u = atom_trap(p, grid);
    for (std::size_t i = 0; i < u.size(); ++i)
        u[i] += p.lambda_a * phi_a[i] * phi_a[i] + p.lambda_am * phi_m[i] * phi_m[i] + 2.0 * p.alpha * phi_m[i];
    return u;
}

std::vector<double> molecule_mean_field(const PhysicalParams& p, const RadialGrid& grid,
                                        std::span<const double> phi_a, std::span<const double> phi_m) {
    std::vector<double> u = molecule_trap(p, grid);
    for (std::size_t i = 0; i < u.size(); ++i)
        u[i] += p.epsilon + p.lambda_m * phi_m[i] * phi_m[i] + p.lambda_am * phi_a[i] * phi_a[i];
    return u;
}

/// <chi|A|chi> with the 4 pi h measure of reduced functions.
double reduced_expectation(const RadialGrid& grid, const Tridiagonal& a, std::span<const double> chi) {
    const auto y = a.apply(chi);
    CompensatedAccumulator acc;
    for (std::size_t i = 0; i < chi.size(); ++i) acc.add(chi[i] * y[i]);
    return 4.0 * kPi * grid.spacing() * acc.value();
}

double reduced_norm2(const RadialGrid& grid, std::span<const double> chi) {
    CompensatedAccumulator acc;
    for (double c : chi) acc.add(c * c);
    return 4.0 * kPi * grid.spacing() * acc.value();
}

void normalize_reduced(const RadialGrid& grid, std::vector<double>& chi, double target) {
    const double n2 = reduced_norm2(grid, chi);
    if (!(n2 > 0.0) || !std::isfinite(n2)) return;
    const double s = std::sqrt(target / n2);
    for (double& c : chi) c *= s;
}

/// ||H chi + src - mu chi|| / (||chi|| max(|mu|, hbar omega)) in reduced form.
double reduced_defect(const Tridiagonal& h, std::span<const double> chi,
                      std::span<const double> src, double mu, double energy_unit) {
    const auto y = h.apply(chi);
    CompensatedAccumulator res, nrm;
    for (std::size_t i = 0; i < chi.size(); ++i) {
        const double d = y[i] + (src.empty() ? 0.0 : src[i]) - mu * chi[i];
        res.add(d * d);
        nrm.add(chi[i] * chi[i]);
    }
    if (!(nrm.value() > 0.0)) return 0.0;
    return std::sqrt(res.value() / nrm.value()) / std::max(std::abs(mu), energy_unit);
}

/// Gaussian overlap integrals for the oscillator ground states
/// psi(r) = (k/pi)^{3/4} exp(-k r^2 / 2), with k = m omega / hbar.
struct GaussianOverlaps {
    double self_a;   ///< \int psi_a^4
    double self_m;   ///< \int psi_m^4
    double cross;    ///< \int psi_a^2 psi_m^2
    double convert;  ///< \int psi_m psi_a^2
};

GaussianOverlaps gaussian_overlaps(double ka, double km) {
    GaussianOverlaps g{};
    g.self_a = std::pow(ka / (2.0 * kPi), 1.5);
    g.self_m = std::pow(km / (2.0 * kPi), 1.5);
    g.cross = std::pow(ka * km / (kPi * (ka + km)), 1.5);
    g.convert = std::pow(km / kPi, 0.75) * std::pow(ka / kPi, 1.5) * std::pow(kPi / (0.5 * km + ka), 1.5);
    return g;
}

}  // namespace

std::vector<double> atom_trap(const PhysicalParams& p, const RadialGrid& grid) {
    return harmonic_potential(grid, p.mass, p.omega_a);
}

std::vector<double> molecule_trap(const PhysicalParams& p, const RadialGrid& grid) {
    return harmonic_potential(grid, 2.0 * p.mass, p.omega_m);
}

double rms_radius(std::span<const double> phi, const RadialGrid& grid) {
    const double n2 = grid.norm2(phi);
    if (!(n2 > 0.0)) return 0.0;
    std::vector<double> r2phi2(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) r2phi2[i] = grid.r(i) * grid.r(i) * phi[i] * phi[i];
    return std::sqrt(grid.integrate(r2phi2) / n2);
}

CondensateState gaussian_ansatz(const PhysicalParams& p, const RadialGrid& grid) {
    p.validate();
    const double ka = p.mass * p.omega_a / p.hbar;
    const double km = 2.0 * p.mass * p.omega_m / p.hbar;
    const double sgn = sign_of_molecule_field(p);

    CondensateState s;
    s.phi_a = grid.map([&](double r) { return std::pow(ka / kPi, 0.75) * std::exp(-0.5 * ka * r * r); });
    s.phi_m = grid.map([&](double r) { return std::pow(km / kPi, 0.75) * std::exp(-0.5 * km * r * r); });
    // Renormalize on the grid so the discrete norms match N exactly.
    const double na = grid.norm2(s.phi_a);
    const double nm = grid.norm2(s.phi_m);
    for (double& x : s.phi_a) x *= std::sqrt(p.N_a / na);
    for (double& x : s.phi_m) x *= sgn * std::sqrt(p.N_m / nm);

    const auto g = gaussian_overlaps(ka, km);
    const double amp_m = sgn * std::sqrt(p.N_m);
    s.mu_a = 1.5 * p.hbar * p.omega_a + p.lambda_a * p.N_a * g.self_a + p.lambda_am * p.N_m * g.cross +
             2.0 * p.alpha * amp_m * g.convert;
    s.mu_m = 1.5 * p.hbar * p.omega_m + p.epsilon + p.lambda_m * p.N_m * g.self_m + p.lambda_am * p.N_a * g.cross;
    if (p.N_m > 0.0) s.mu_m += p.alpha * p.N_a * g.convert / amp_m;

    const auto [da, dm] = gpe_defect(s, p, grid);
    s.residual = std::max(da, dm);
    return s;
}

std::pair<double, double> rayleigh_mu(const CondensateState& s, const PhysicalParams& p, const RadialGrid& grid) {
    const RadialOperator ha(grid, p.mass, 0, atom_mean_field(p, grid, s.phi_a, s.phi_m), p.hbar);
    const RadialOperator hm(grid, 2.0 * p.mass, 0, molecule_mean_field(p, grid, s.phi_a, s.phi_m), p.hbar);
    const auto chi_a = to_reduced(grid, s.phi_a);
    const auto chi_m = to_reduced(grid, s.phi_m);
    const double na = reduced_norm2(grid, chi_a);
    const double nm = reduced_norm2(grid, chi_m);
    double mu_a = na > 0.0 ? reduced_expectation(grid, ha.matrix(), chi_a) / na : 0.0;
    double mu_m = 0.0;
    if (nm > 0.0) {
        std::vector<double> src(chi_m.size());
        for (std::size_t i = 0; i < src.size(); ++i) src[i] = p.alpha * s.phi_a[i] * s.phi_a[i];
        mu_m = (reduced_expectation(grid, hm.matrix(), chi_m) + grid.inner(s.phi_m, src)) / nm;
    }
    return {mu_a, mu_m};
}

std::pair<double, double> gpe_defect(const CondensateState& s, const PhysicalParams& p, const RadialGrid& grid) {
    if (s.phi_a.size() != grid.size() || s.phi_m.size() != grid.size())
        throw DimensionMismatch("gpe_defect: state does not live on this grid");
    const double unit = p.hbar * p.omega_a;
    const RadialOperator ha(grid, p.mass, 0, atom_mean_field(p, grid, s.phi_a, s.phi_m), p.hbar);
    const RadialOperator hm(grid, 2.0 * p.mass, 0, molecule_mean_field(p, grid, s.phi_a, s.phi_m), p.hbar);
    const auto chi_a = to_reduced(grid, s.phi_a);
    const auto chi_m = to_reduced(grid, s.phi_m);
    std::vector<double> src(grid.size());
    for (std::size_t i = 0; i < src.size(); ++i) src[i] = grid.r(i) * p.alpha * s.phi_a[i] * s.phi_a[i];
    const double da = reduced_defect(ha.matrix(), chi_a, {}, s.mu_a, unit);
    const double dm = reduced_defect(hm.matrix(), chi_m, src, s.mu_m, unit);
    return {da, dm};
}

double condensate_energy(const CondensateState& s, const PhysicalParams& p, const RadialGrid& grid) {
    const auto va = atom_trap(p, grid);
    const auto vm = molecule_trap(p, grid);
    const RadialOperator ka(grid, p.mass, 0, std::vector<double>(grid.size(), 0.0), p.hbar);
    const RadialOperator km(grid, 2.0 * p.mass, 0, std::vector<double>(grid.size(), 0.0), p.hbar);
    const double kinetic = reduced_expectation(grid, ka.kinetic(), to_reduced(grid, s.phi_a)) +
                           reduced_expectation(grid, km.kinetic(), to_reduced(grid, s.phi_m));
    std::vector<double> density(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double a2 = s.phi_a[i] * s.phi_a[i];
        const double m2 = s.phi_m[i] * s.phi_m[i];
        density[i] = va[i] * a2 + 0.5 * p.lambda_a * a2 * a2 + (vm[i] + p.epsilon) * m2 +
                     0.5 * p.lambda_m * m2 * m2 + p.lambda_am * a2 * m2 + 2.0 * p.alpha * s.phi_m[i] * a2;
    }
    return kinetic + grid.integrate(density);
}

namespace {

/// One species in the propagation: a unit-norm reduced shape and its amplitude.
/// A species with zero particles is carried as a test particle so that its
/// chemical potential is still defined.
struct Component {
    std::vector<double> chi;  // unit norm
    double amplitude;         // sqrt(N)
    double mass;

    std::vector<double> field(const RadialGrid& grid) const {
        auto f = from_reduced(grid, chi);
        for (double& x : f) x *= amplitude;
        return f;
    }
};

struct StepMetrics {
    double mu_a, mu_m, defect_a, defect_m, energy;
};

StepMetrics evaluate(const PhysicalParams& p, const RadialGrid& grid, const Component& a, const Component& m) {
    const auto phi_a = a.field(grid);
    const auto phi_m = m.field(grid);
    const RadialOperator ha(grid, a.mass, 0, atom_mean_field(p, grid, phi_a, phi_m), p.hbar);
    const RadialOperator hm(grid, m.mass, 0, molecule_mean_field(p, grid, phi_a, phi_m), p.hbar);
    const auto ta = ha.matrix();
    const auto tm = hm.matrix();

    std::vector<double> src(grid.size(), 0.0);
    if (m.amplitude > 0.0)
        for (std::size_t i = 0; i < src.size(); ++i)
            src[i] = grid.r(i) * p.alpha * phi_a[i] * phi_a[i] / m.amplitude;

    StepMetrics out{};
    out.mu_a = reduced_expectation(grid, ta, a.chi);
    out.mu_m = reduced_expectation(grid, tm, m.chi);
    if (m.amplitude > 0.0) {
        CompensatedAccumulator acc;
        for (std::size_t i = 0; i < src.size(); ++i) acc.add(m.chi[i] * src[i]);
        out.mu_m += 4.0 * kPi * grid.spacing() * acc.value();
    }
    const double unit = p.hbar * p.omega_a;
    out.defect_a = reduced_defect(ta, a.chi, {}, out.mu_a, unit);
    out.defect_m = reduced_defect(tm, m.chi, src, out.mu_m, unit);

    CondensateState s;
    s.phi_a = phi_a;
    s.phi_m = phi_m;
    out.energy = condensate_energy(s, p, grid);
    // Test particles feel the other species but do not enter the functional.
    if (a.amplitude == 0.0) out.energy += out.mu_a;
    if (m.amplitude == 0.0) out.energy += out.mu_m;
    return out;
}

/// (I + dt (H - s)) chi' = (1 + dt (mu - s)) chi - dt src, with s = min(potential, 0)
/// keeping the left side positive definite. Fixed points satisfy H chi + src = mu chi.
std::vector<double> implicit_step(const Tridiagonal& h, std::span<const double> chi, std::span<const double> src,
                                  double mu, double dt) {
    const double shift = std::min(0.0, *std::min_element(h.diag.begin(), h.diag.end()));
    Tridiagonal a = h;
    for (double& d : a.diag) d = 1.0 + dt * (d - shift);
    for (double& o : a.off) o *= dt;
    std::vector<double> rhs(chi.size());
    const double scale = 1.0 + dt * (mu - shift);
    for (std::size_t i = 0; i < chi.size(); ++i) rhs[i] = scale * chi[i] - (src.empty() ? 0.0 : dt * src[i]);
    return solve_tridiagonal(a, rhs);
}

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

CondensateState solve_coupled_gpe(const PhysicalParams& p, const RadialGrid& grid, const SolverOptions& opts) {
    p.validate();
    if (!(opts.tol > 0.0) || !(opts.dt > 0.0)) throw DomainError("solve_coupled_gpe: tol and dt must be > 0");

    const double ka = p.mass * p.omega_a / p.hbar;
    const double km = 2.0 * p.mass * p.omega_m / p.hbar;
    Component a{to_reduced(grid, grid.map([&](double r) { return std::exp(-0.5 * ka * r * r); })),
                std::sqrt(p.N_a), p.mass};
    Component m{to_reduced(grid, grid.map([&](double r) { return std::exp(-0.5 * km * r * r); })),
                std::sqrt(p.N_m), 2.0 * p.mass};
    if (p.alpha > 0.0)
        for (double& c : m.chi) c = -c;
    normalize_reduced(grid, a.chi, 1.0);
    normalize_reduced(grid, m.chi, 1.0);

    StepMetrics cur = evaluate(p, grid, a, m);
    double dt = opts.dt;
    double dt_cap = opts.dt_max;
    const double width_floor = opts.collapse_width_cells * grid.spacing();
    const bool attractive = p.lambda_a < 0.0 || p.lambda_m < 0.0 || p.lambda_am < 0.0;

    std::size_t it = 0;
    double residual = std::max(cur.defect_a, cur.defect_m);
    while (residual >= opts.tol) {
        if (it >= opts.max_iters)
            throw NoConvergence(fmt::format("solve_coupled_gpe: no convergence after {} iterations (residual {:.3e})",
                                            opts.max_iters, residual),
                                residual);
        ++it;

        const auto phi_a = a.field(grid);
        const auto phi_m = m.field(grid);
        const RadialOperator ha(grid, a.mass, 0, atom_mean_field(p, grid, phi_a, phi_m), p.hbar);
        const RadialOperator hm(grid, m.mass, 0, molecule_mean_field(p, grid, phi_a, phi_m), p.hbar);
        std::vector<double> src;
        if (m.amplitude > 0.0) {
            src.resize(grid.size());
            for (std::size_t i = 0; i < src.size(); ++i)
                src[i] = grid.r(i) * p.alpha * phi_a[i] * phi_a[i] / m.amplitude;
        }

        Component na = a, nm = m;
        na.chi = implicit_step(ha.matrix(), a.chi, {}, cur.mu_a, dt);
        nm.chi = implicit_step(hm.matrix(), m.chi, src, cur.mu_m, dt);
        normalize_reduced(grid, na.chi, 1.0);
        normalize_reduced(grid, nm.chi, 1.0);

        if (!all_finite(na.chi) || !all_finite(nm.chi)) {
            if (attractive)
                throw CollapseDetected("solve_coupled_gpe: field diverged under attractive interactions", 0.0);
            dt *= 0.5;
            if (dt < opts.dt_min)
                throw NoConvergence("solve_coupled_gpe: step size underflow after non-finite update", residual);
            continue;
        }

        const StepMetrics next = evaluate(p, grid, na, nm);
        if (next.energy > cur.energy + opts.energy_slack * std::max(std::abs(cur.energy), 1.0)) {
            dt *= 0.5;
            if (dt < opts.dt_min)
                throw NoConvergence(
                    fmt::format("solve_coupled_gpe: step size underflow (residual {:.3e})", residual), residual);
            continue;
        }
        const bool energy_rose = next.energy > cur.energy;
        a = std::move(na);
        m = std::move(nm);
        cur = next;
        const double prev_residual = residual;
        residual = std::max(cur.defect_a, cur.defect_m);
        // An energy rise inside the slack together with a growing defect means the
        // step oscillates around the fixed point, so lower the step ceiling.
        if (energy_rose && residual > opts.residual_growth * prev_residual) dt_cap = std::max(0.5 * dt, opts.dt_min);
        dt = std::min(dt * opts.dt_growth, dt_cap);

        if (a.amplitude > 0.0 && attractive) {
            const double width = rms_radius(a.field(grid), grid);
            if (width < width_floor)
                throw CollapseDetected(
                    fmt::format("solve_coupled_gpe: atom cloud collapsed to rms radius {:.3e} (floor {:.3e})", width,
                                width_floor),
                    width);
        }
        if (opts.observer) opts.observer(it, cur.energy, residual);
    }

    CondensateState out;
    out.phi_a = a.field(grid);
    out.phi_m = m.field(grid);
    // Keep the sign convention even if propagation flipped a global phase.
    if (compensated_sum(out.phi_a) < 0.0)
        for (double& x : out.phi_a) x = -x;
    out.mu_a = cur.mu_a;
    out.mu_m = cur.mu_m;
    out.residual = residual;
    out.iterations = it;
    return out;
}

}  // namespace hybridbec
