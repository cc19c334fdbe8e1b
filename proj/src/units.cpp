#include "hybridbec/units.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "hybridbec/errors.hpp"
#include "hybridbec/json_fields.hpp"

namespace hybridbec {

namespace {

void require(bool ok, const char* field, const char* what) {
    if (!ok) throw ConfigError(fmt::format("params.{}: {}", field, what));
}

/// B0 - B, guarded against the resonance.
double detuning_from_resonance(const PhysicalParams& p) {
    const auto& r = p.resonance;
    if (!(r.Delta > 0.0)) throw DomainError("resonance.Delta must be > 0");
    const double d = r.B0 - r.B;
    if (!(std::abs(d) >= p.singularity_floor * r.Delta))
        throw ResonanceSingularity(
            fmt::format("field B={} lies within {}*Delta of the resonance B0={}", r.B, p.singularity_floor, r.B0));
    return d;
}

}  // namespace

void PhysicalParams::validate() const {
    require(std::isfinite(mass) && mass > 0.0, "mass", "must be finite and > 0");
    require(std::isfinite(hbar) && hbar > 0.0, "hbar", "must be finite and > 0");
    require(std::isfinite(omega_a) && omega_a > 0.0, "omega_a", "must be finite and > 0");
    require(std::isfinite(omega_m) && omega_m > 0.0, "omega_m", "must be finite and > 0");
    require(std::isfinite(lambda_a), "lambda_a", "must be finite");
    require(std::isfinite(lambda_m), "lambda_m", "must be finite");
    require(std::isfinite(lambda_am), "lambda_am", "must be finite");
    require(std::isfinite(alpha), "alpha", "must be finite");
    require(std::isfinite(epsilon), "epsilon", "must be finite");
    require(std::isfinite(N_a) && N_a >= 0.0, "N_a", "must be finite and >= 0");
    require(std::isfinite(N_m) && N_m >= 0.0, "N_m", "must be finite and >= 0");
    require(std::isfinite(temperature) && temperature >= 0.0, "temperature", "must be finite and >= 0");
    require(std::isfinite(resonance.Delta) && resonance.Delta > 0.0, "resonance.Delta", "must be finite and > 0");
    require(std::isfinite(resonance.a0), "resonance.a0", "must be finite");
    require(std::isfinite(resonance.B0), "resonance.B0", "must be finite");
    require(std::isfinite(resonance.B), "resonance.B", "must be finite");
    require(singularity_floor > 0.0, "singularity_floor", "must be > 0");
}

double PhysicalParams::beta() const {
    if (temperature == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / temperature;
}

double UnitScales::length() const { return std::sqrt(hbar / (mass * omega)); }

double effective_scattering_length(const PhysicalParams& p) {
    const double d = detuning_from_resonance(p);
    const auto& r = p.resonance;
    // Numerator written as (B0 + Delta) - B so that B = B0 + Delta gives an exact zero.
    return r.a0 * (((r.B0 + r.Delta) - r.B) / d) + 0.0;  // +0.0 folds -0 into 0
}

double conversion_amplitude(const PhysicalParams& p) {
    const double d = detuning_from_resonance(p);
    if (p.lambda_a < 0.0) throw DomainError("conversion_amplitude: lambda_a must be >= 0");
    const double delta = p.resonance.Delta;
    return std::sqrt(p.lambda_a * delta * delta / (2.0 * std::abs(d)));
}

double coupling_from_scattering_length(double a, double mass, double hbar) {
    return 4.0 * std::numbers::pi * hbar * hbar * a / mass;
}

UnitScales unit_scales(const PhysicalParams& p) { return {p.hbar, p.mass, p.omega_a}; }

namespace {

/// Multiplies every dimensionful field by (energy unit)^e * (length unit)^l
/// with the exponents of that field's dimension.
PhysicalParams rescale(const PhysicalParams& p, double energy, double length, double omega) {
    PhysicalParams q = p;
    const double volume = length * length * length;
    q.omega_a = p.omega_a / omega;
    q.omega_m = p.omega_m / omega;
    q.lambda_a = p.lambda_a / (energy * volume);
    q.lambda_m = p.lambda_m / (energy * volume);
    q.lambda_am = p.lambda_am / (energy * volume);
    q.alpha = p.alpha / (energy * std::sqrt(volume));
    q.epsilon = p.epsilon / energy;
    q.temperature = p.temperature / energy;
    q.resonance.a0 = p.resonance.a0 / length;
    return q;
}

}  // namespace

PhysicalParams to_natural(const PhysicalParams& p) {
    const UnitScales s = unit_scales(p);
    PhysicalParams q = rescale(p, s.energy(), s.length(), s.omega);
    q.hbar = 1.0;
    q.mass = 1.0;
    q.omega_a = 1.0;
    return q;
}

PhysicalParams from_natural(const PhysicalParams& natural, const UnitScales& s) {
    PhysicalParams q = rescale(natural, 1.0 / s.energy(), 1.0 / s.length(), 1.0 / s.omega);
    q.hbar = s.hbar;
    q.mass = s.mass;
    q.omega_a = natural.omega_a * s.omega;
    return q;
}

PhysicalParams with_field_couplings(const PhysicalParams& p) {
    PhysicalParams q = p;
    q.lambda_a = coupling_from_scattering_length(effective_scattering_length(p), p.mass, p.hbar);
    // alpha(B) uses the off-resonant atom coupling as its strength scale.
    PhysicalParams bg = p;
    bg.lambda_a = coupling_from_scattering_length(std::abs(p.resonance.a0), p.mass, p.hbar);
    q.alpha = conversion_amplitude(bg);
    return q;
}

void to_json(nlohmann::json& j, const PhysicalParams& p) {
    j = nlohmann::json{{"mass", p.mass},
                       {"hbar", p.hbar},
                       {"omega_a", p.omega_a},
                       {"omega_m", p.omega_m},
                       {"lambda_a", p.lambda_a},
                       {"lambda_m", p.lambda_m},
                       {"lambda_am", p.lambda_am},
                       {"alpha", p.alpha},
                       {"epsilon", p.epsilon},
                       {"N_a", p.N_a},
                       {"N_m", p.N_m},
                       {"temperature", p.temperature},
                       {"singularity_floor", p.singularity_floor},
                       {"resonance",
                        {{"a0", p.resonance.a0},
                         {"B0", p.resonance.B0},
                         {"Delta", p.resonance.Delta},
                         {"B", p.resonance.B}}}};
}

void from_json(const nlohmann::json& j, PhysicalParams& p) {
    JsonFields f(j, "params",
                 {"mass", "hbar", "omega_a", "omega_m", "lambda_a", "lambda_m", "lambda_am", "alpha", "epsilon",
                  "N_a", "N_m", "temperature", "singularity_floor", "resonance"});
    f.read("mass", p.mass);
    f.read("hbar", p.hbar);
    f.read("omega_a", p.omega_a);
    f.read("omega_m", p.omega_m);
    f.read("lambda_a", p.lambda_a);
    f.read("lambda_m", p.lambda_m);
    f.read("lambda_am", p.lambda_am);
    f.read("alpha", p.alpha);
    f.read("epsilon", p.epsilon);
    f.read("N_a", p.N_a);
    f.read("N_m", p.N_m);
    f.read("temperature", p.temperature);
    f.read("singularity_floor", p.singularity_floor);
    if (f.has("resonance")) {
        JsonFields r(f.at("resonance"), f.child("resonance"), {"a0", "B0", "Delta", "B"});
        r.read("a0", p.resonance.a0);
        r.read("B0", p.resonance.B0);
        r.read("Delta", p.resonance.Delta);
        r.read("B", p.resonance.B);
    }
}

}  // namespace hybridbec
