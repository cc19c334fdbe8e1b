#include "hybridbec/thermal.hpp"

#include <cmath>
#include <span>

#include <fmt/format.h>

#include "hybridbec/errors.hpp"

namespace hybridbec {

double bose_occupation(double energy, double beta) {
    if (!(energy > 0.0)) throw NonPositiveEnergy(fmt::format("bose_occupation: energy {} is not positive", energy));
    if (std::isinf(beta)) return 0.0;
    return 1.0 / std::expm1(beta * energy);
}

bool thermally_active(const Mode& m) {
    return m.energy.real() > 0.0 && m.energy.imag() == 0.0 && !m.unstable && m.normalizable && !m.zero_mode;
}

namespace {

void accumulate(const ModeSet& set, const RadialGrid& grid, double beta, const ThermalOptions& opts,
                std::vector<double>& out, ThermalReport& rep) {
    const std::size_t n = grid.size();
    std::vector<CompensatedAccumulator> acc(n);
    for (const Mode& m : set.modes) {
        if (!thermally_active(m)) {
            ++rep.excluded;
            continue;
        }
        if (m.u.size() != n || m.v.size() != n)
            throw DimensionMismatch(fmt::format("density_profile: {} mode j={} has {} points, grid has {}",
                                                to_string(set.species), m.j, m.u.size(), n));
        const double dev = std::abs(mode_norm(m, grid) - 1.0);
        rep.max_norm_deviation = std::max(rep.max_norm_deviation, dev);
        if (dev > opts.norm_tol)
            throw NormalizationError(fmt::format("density_profile: {} mode j={} l={} has norm deviation {:.3e}",
                                                 to_string(set.species), m.j, m.l, dev));
        const double f = bose_occupation(m.energy.real(), beta);
        const double fv = opts.quantum_depletion ? 1.0 + f : f;
        const double deg = m.degeneracy;
        for (std::size_t i = 0; i < n; ++i) acc[i].add(deg * (m.u[i] * m.u[i] * f + m.v[i] * m.v[i] * fv));
        ++rep.included;
    }
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = acc[i].value();
}

std::vector<double> squared(std::span<const double> phi) {
    std::vector<double> out(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) out[i] = phi[i] * phi[i];
    return out;
}

}  // namespace

DensityProfile density_profile(const CondensateState& state, const ModeSet& atoms, const ModeSet& molecules,
                               const PhysicalParams& params, const RadialGrid& grid, const ThermalOptions& opts,
                               ThermalReport* report) {
    if (state.phi_a.size() != grid.size() || state.phi_m.size() != grid.size())
        throw DimensionMismatch("density_profile: condensate and grid sizes differ");
    const double beta = params.beta();
    ThermalReport rep;
    DensityProfile d;
    d.T = params.temperature;
    d.r.assign(grid.nodes().begin(), grid.nodes().end());
    d.rho_a_cond = squared(state.phi_a);
    d.rho_m_cond = squared(state.phi_m);
    accumulate(atoms, grid, beta, opts, d.rho_a_thermal, rep);
    accumulate(molecules, grid, beta, opts, d.rho_m_thermal, rep);
    d.rho_total.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        d.rho_total[i] = d.rho_a_cond[i] + d.rho_a_thermal[i] + 2.0 * (d.rho_m_cond[i] + d.rho_m_thermal[i]);
    if (report) *report = rep;
    return d;
}

TotalNumbers total_numbers(const DensityProfile& profile, const RadialGrid& grid) {
    TotalNumbers t;
    t.N_a = grid.integrate(profile.rho_a_cond) + grid.integrate(profile.rho_a_thermal);
    t.N_m = grid.integrate(profile.rho_m_cond) + grid.integrate(profile.rho_m_thermal);
    t.atom_equivalent = t.N_a + 2.0 * t.N_m;
    return t;
}

}  // namespace hybridbec
