#pragma once

#include <nlohmann/json.hpp>

namespace hybridbec {

/// Feshbach resonance description. Fields in mT; a0 in the record's length unit.
struct Resonance {
    double a0 = 0.0;
    double B0 = 0.0;
    double Delta = 1.0;
    double B = 1.0;

    bool operator==(const Resonance&) const = default;
};

/// Every physical input of the hybrid atom/molecule model in one record.
///
/// Units are whatever the caller chooses consistently; `to_natural` rescales
/// to hbar = M = omega_a = 1. Couplings follow the contact-interaction
/// convention lambda = 4 pi hbar^2 a / m with m = M (atoms) or 2M (molecules).
struct PhysicalParams {
    double mass = 1.0;
    double hbar = 1.0;
    double omega_a = 1.0;
    double omega_m = 1.0;
    double lambda_a = 0.0;   ///< atom-atom
    double lambda_m = 0.0;   ///< molecule-molecule
    double lambda_am = 0.0;  ///< atom-molecule
    double alpha = 0.0;      ///< pair <-> molecule conversion amplitude
    double epsilon = 0.0;    ///< molecular detuning
    double N_a = 0.0;
    double N_m = 0.0;
    double temperature = 0.0;  ///< k_B T, energy units
    Resonance resonance{};
    /// |B - B0| below singularity_floor * Delta is treated as on-resonance.
    double singularity_floor = 1e-9;

    bool operator==(const PhysicalParams&) const = default;

    /// Throws ConfigError naming the first offending field.
    void validate() const;

    /// 1 / (k_B T); +inf at T = 0.
    double beta() const;
};

/// The unit system a record was expressed in before going natural.
struct UnitScales {
    double hbar = 1.0;
    double mass = 1.0;
    double omega = 1.0;

    double energy() const { return hbar * omega; }
    double length() const;
};

/// a_eff = a0 (1 + Delta / (B0 - B)).
double effective_scattering_length(const PhysicalParams& p);

/// alpha(B) = sqrt(lambda_a Delta^2 / (2 |B - B0|)), prefactor taken as 1.
double conversion_amplitude(const PhysicalParams& p);

/// lambda = 4 pi hbar^2 a / m.
double coupling_from_scattering_length(double a, double mass, double hbar);

UnitScales unit_scales(const PhysicalParams& p);

/// Rescale to hbar = M = omega_a = 1 with lengths in sqrt(hbar / (M omega_a)).
/// Magnetic-field quantities and particle numbers are untouched.
PhysicalParams to_natural(const PhysicalParams& p);

/// Inverse of to_natural for a record that is already natural.
PhysicalParams from_natural(const PhysicalParams& natural, const UnitScales& scales);

/// Replace lambda_a and alpha by their field-derived values a_eff(B), alpha(B).
PhysicalParams with_field_couplings(const PhysicalParams& p);

/// mu_m - 2 mu_a, the chemical-equilibrium diagnostic.
inline double equilibrium_defect(double mu_a, double mu_m) { return mu_m - 2.0 * mu_a; }

void to_json(nlohmann::json& j, const PhysicalParams& p);
/// Strict: unknown keys are a ConfigError.
void from_json(const nlohmann::json& j, PhysicalParams& p);

}  // namespace hybridbec
