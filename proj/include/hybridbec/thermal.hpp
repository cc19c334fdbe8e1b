#pragma once

#include <cstddef>
#include <vector>

#include "hybridbec/bdg.hpp"
#include "hybridbec/condensate.hpp"
#include "hybridbec/radial_grid.hpp"
#include "hybridbec/units.hpp"

namespace hybridbec {

struct DensityProfile {
    std::vector<double> r;
    std::vector<double> rho_a_cond;
    std::vector<double> rho_a_thermal;
    std::vector<double> rho_m_cond;
    std::vector<double> rho_m_thermal;
    std::vector<double> rho_total;  ///< rho_a + 2 rho_m
    double T = 0.0;
};

struct ThermalOptions {
    /// Include the T = 0 |v|^2 term (the "1" in 1 + F). Off leaves only thermal occupation.
    bool quantum_depletion = true;
    double norm_tol = 1e-4;
};

/// Bookkeeping from density_profile.
struct ThermalReport {
    std::size_t included = 0;
    std::size_t excluded = 0;  ///< E <= 0, zero-mode, unstable or non-normalizable
    double max_norm_deviation = 0.0;
};

/// 1 / (exp(beta E) - 1); 0 for beta = +inf. Throws NonPositiveEnergy for E <= 0.
double bose_occupation(double energy, double beta);

/// Whether a mode enters the thermal sums.
bool thermally_active(const Mode& m);

/// Diagonal of the one-body density matrix at temperature params.temperature:
///   rho_a = |phi_a|^2 + sum_i deg_i [|u_i|^2 F_i + |v_i|^2 (1 + F_i)]
/// and the molecule analogue with (x, y). Throws NormalizationError when an
/// active mode's norm is off by more than opts.norm_tol.
DensityProfile density_profile(const CondensateState& state, const ModeSet& atoms, const ModeSet& molecules,
                               const PhysicalParams& params, const RadialGrid& grid, const ThermalOptions& opts = {},
                               ThermalReport* report = nullptr);

struct TotalNumbers {
    double N_a = 0.0;
    double N_m = 0.0;
    double atom_equivalent = 0.0;  ///< N_a + 2 N_m
};

TotalNumbers total_numbers(const DensityProfile& profile, const RadialGrid& grid);

}  // namespace hybridbec
