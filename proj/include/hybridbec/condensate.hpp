#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "hybridbec/radial_grid.hpp"
#include "hybridbec/units.hpp"

namespace hybridbec {

/// Ground state of the coupled atom/molecule condensate equations.
///
/// phi_a, phi_m are real 3D field values on the grid nodes, normalized so that
/// \int |phi|^2 d^3r equals the particle number. phi_a >= 0; phi_m carries the
/// sign -sign(alpha), the branch on which the conversion term lowers the energy.
struct CondensateState {
    std::vector<double> phi_a;
    std::vector<double> phi_m;
    double mu_a = 0.0;
    double mu_m = 0.0;
    double residual = 0.0;
    std::size_t iterations = 0;
};

struct SolverOptions {
    double tol = 1e-8;
    std::size_t max_iters = 20000;
    double dt = 1e-3;  ///< initial imaginary-time step, units of 1/omega_a
    double dt_max = 1.0;
    double dt_growth = 1.1;
    double dt_min = 1e-12;
    /// Collapse is reported once the rms atom radius drops below this many grid steps.
    double collapse_width_cells = 3.0;
    /// Energy is allowed to rise by this relative amount before a step is rejected (round-off).
    double energy_slack = 1e-12;
    /// An accepted step that raises the energy (within the slack) and grows the
    /// defect by more than this factor halves the step ceiling.
    double residual_growth = 1.0;
    /// Called after each accepted step with (iteration, energy, residual); may be empty.
    std::function<void(std::size_t, double, double)> observer;
};

/// Trap potentials: atoms (1/2) M omega_a^2 r^2, molecules (1/2)(2M) omega_m^2 r^2.
std::vector<double> atom_trap(const PhysicalParams& p, const RadialGrid& grid);
std::vector<double> molecule_trap(const PhysicalParams& p, const RadialGrid& grid);

/// Oscillator Gaussians for both species with mu from a closed-form
/// Rayleigh quotient of the coupled equations (no grid discretization error).
CondensateState gaussian_ansatz(const PhysicalParams& p, const RadialGrid& grid);

/// Imaginary-time propagation (semi-implicit, per-step renormalization,
/// step halving on energy increase) started from the Gaussian ansatz.
///
/// Throws NoConvergence (carrying the last residual) after max_iters, and
/// CollapseDetected when the atom cloud shrinks to the grid floor.
CondensateState solve_coupled_gpe(const PhysicalParams& p, const RadialGrid& grid, const SolverOptions& opts = {});

/// Normalized defects ||H phi - mu phi|| / (||phi|| max(|mu|, hbar omega_a))
/// of the atom and molecule equations, using the state's mu values.
std::pair<double, double> gpe_defect(const CondensateState& s, const PhysicalParams& p, const RadialGrid& grid);

/// Mean-field energy functional (no chemical-potential terms).
double condensate_energy(const CondensateState& s, const PhysicalParams& p, const RadialGrid& grid);

/// Rayleigh-quotient chemical potentials of the current fields.
std::pair<double, double> rayleigh_mu(const CondensateState& s, const PhysicalParams& p, const RadialGrid& grid);

/// RMS radius sqrt(<r^2>) of a field; 0 for an empty field.
double rms_radius(std::span<const double> phi, const RadialGrid& grid);

}  // namespace hybridbec
