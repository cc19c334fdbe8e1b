#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include "hybridbec/units.hpp"

namespace hybridbec {

/// mu_a = lambda n_m + lambda_a n_a - 2 alpha sqrt(n_m) for a homogeneous mixture.
double uniform_mu(const PhysicalParams& p, double n_a, double n_m);

/// E(p) = sqrt((hbar^2/2m)^2 p^2 (p^2 + 16 pi n a_eff)); purely imaginary when
/// the bracket is negative. m = p.mass.
std::complex<double> dispersion(double p_wave, double n, double a_eff, const PhysicalParams& params);

/// (pi / 16) R0 / |a_eff|. DomainError for a_eff >= 0 or R0 <= 0.
double critical_number(double R0, double a_eff);

/// N (1 - (8/3) sqrt(N a^3 / (pi V))). DomainError for a_eff < 0 or a bracket
/// that goes negative; warns when (n a^3)^{1/3} > 0.1.
double depletion_number(double N, double V, double a_eff);

/// Density-to-size relation for the attractive branch:
///   paper: n = N / R0^2 (as printed);  cubic: n = N / R0^3.
enum class DensityModel { paper, cubic };
DensityModel parse_density_model(std::string_view s);
std::string_view to_string(DensityModel m);

struct UniformGasSettings {
    double total_atoms = 1e6;
    double density = 1e15;   ///< N / V
    double R0 = 0.0;         ///< 0: derived from density and total_atoms via the density model
    DensityModel model = DensityModel::paper;
};

enum class Branch { critical, depletion };
std::string_view to_string(Branch b);

struct UniformGasPoint {
    double B = 0.0;
    double a_eff = 0.0;
    double n = 0.0;
    bool unstable = false;  ///< a_eff < 0 and N above the critical number
    double N0 = 0.0;
    Branch source = Branch::depletion;
};

/// N0(B): critical number where a_eff(B) < 0, depletion number otherwise.
/// Uses p.resonance (a0, B0, Delta) with B overridden by each list entry.
std::vector<UniformGasPoint> figure3_curve(const PhysicalParams& p, const UniformGasSettings& s,
                                           const std::vector<double>& B_list);

}  // namespace hybridbec
