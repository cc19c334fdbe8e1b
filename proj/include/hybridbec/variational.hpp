#pragma once

#include <string_view>
#include <vector>

#include "hybridbec/units.hpp"

namespace hybridbec {

/// Trial excitation (n_r, l, m): (0,1,0) dipole-like or (1,0,0) breathing-like.
enum class TrialMode { m010, m100 };

/// How the molecule number follows the swept atom number.
enum class MoleculeCount { equal, fixed };

std::string_view to_string(TrialMode m);
TrialMode parse_trial_mode(std::string_view s);
MoleculeCount parse_molecule_count(std::string_view s);

/// Shape factor (3/2) s^{3/2} - 3 s^{5/2} + (5/2) s^{7/2}, s = x / (x + y).
double shape_factor(double x, double y);

/// Excitation functionals E[v, omega] of the two trial modes, evaluated
/// verbatim with N_a and N_m taken from p. Throw DomainError for omega <= 0.
double energy_010(double v, double omega, const PhysicalParams& p);
double energy_100(double v, double omega, const PhysicalParams& p);
double trial_energy(TrialMode mode, double v, double omega, const PhysicalParams& p);

struct VariationalOptions {
    double v_max = 5.0;
    double omega_lo = 0.2;  ///< units of omega_a
    double omega_hi = 5.0;
    int coarse = 64;        ///< scan points per axis (v linear, omega log-spaced)
    MoleculeCount molecules = MoleculeCount::equal;
    double polish_tol = 1e-10;
};

struct VariationalResult {
    TrialMode mode = TrialMode::m010;
    double n_atoms = 0.0;
    bool resonant = true;
    double v_opt = 0.0;
    double omega_opt = 1.0;
    double energy = 0.0;
    double grad_v = 0.0;      ///< central difference (forward at v = 0)
    double grad_omega = 0.0;
};

/// Same record with the resonant couplings alpha and lambda_am set to zero.
PhysicalParams nonresonant(const PhysicalParams& p);

/// Global minimum of the trial functional over the search box: coarse scan
/// then Nelder-Mead polish. Throws NoInteriorMinimum when the optimum sits at
/// v_max, omega_lo or omega_hi.
VariationalResult minimize_mode(TrialMode mode, const PhysicalParams& p, double n_atoms,
                                const VariationalOptions& opts = {});

/// For each N: resonant result then its alpha = lambda = 0 counterpart.
std::vector<VariationalResult> sweep_spectrum(TrialMode mode, const PhysicalParams& p,
                                              const std::vector<double>& n_list, const VariationalOptions& opts = {});

}  // namespace hybridbec
