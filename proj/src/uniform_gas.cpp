#include "hybridbec/uniform_gas.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "hybridbec/errors.hpp"

namespace hybridbec {

double uniform_mu(const PhysicalParams& p, double n_a, double n_m) {
    if (n_a < 0.0 || n_m < 0.0) throw DomainError("uniform_mu: densities must be >= 0");
    return p.lambda_am * n_m + p.lambda_a * n_a - 2.0 * p.alpha * std::sqrt(n_m);
}

std::complex<double> dispersion(double p_wave, double n, double a_eff, const PhysicalParams& params) {
    if (p_wave < 0.0) throw DomainError("dispersion: wavenumber must be >= 0");
    const double k = params.hbar * params.hbar / (2.0 * params.mass);
    const double bracket = p_wave * p_wave + 16.0 * std::numbers::pi * n * a_eff;
    const double root = k * p_wave * std::sqrt(std::abs(bracket));
    return bracket >= 0.0 ? std::complex<double>(root, 0.0) : std::complex<double>(0.0, root);
}

double critical_number(double R0, double a_eff) {
    if (!(a_eff < 0.0))
        throw DomainError(fmt::format("critical_number: a_eff = {} is not attractive; no critical number", a_eff));
    if (!(R0 > 0.0)) throw DomainError("critical_number: R0 must be > 0");
    return std::numbers::pi / 16.0 * R0 / std::abs(a_eff);
}

double depletion_number(double N, double V, double a_eff) {
    if (a_eff < 0.0) throw DomainError(fmt::format("depletion_number: a_eff = {} < 0", a_eff));
    if (!(N > 0.0) || !(V > 0.0)) throw DomainError("depletion_number: N and V must be > 0");
    const double na3 = N / V * a_eff * a_eff * a_eff;
    if (std::cbrt(na3) > 0.1)
        spdlog::warn("depletion_number: diluteness (n a^3)^(1/3) = {:.3g} exceeds 0.1", std::cbrt(na3));
    const double bracket = 1.0 - 8.0 / 3.0 * std::sqrt(na3 / std::numbers::pi);
    if (bracket < 0.0)
        throw DomainError(fmt::format("depletion_number: depletion exceeds N (bracket {:.4g}) at a_eff = {}", bracket, a_eff));
    return N * bracket;
}

DensityModel parse_density_model(std::string_view s) {
    if (s == "paper") return DensityModel::paper;
    if (s == "cubic") return DensityModel::cubic;
    throw ConfigError(fmt::format("unknown density_model '{}' (expected paper|cubic)", s));
}

std::string_view to_string(DensityModel m) { return m == DensityModel::paper ? "paper" : "cubic"; }
std::string_view to_string(Branch b) { return b == Branch::critical ? "critical" : "depletion"; }

std::vector<UniformGasPoint> figure3_curve(const PhysicalParams& p, const UniformGasSettings& s,
                                           const std::vector<double>& B_list) {
    if (!(s.total_atoms > 0.0) || !(s.density > 0.0)) throw ConfigError("uniform: total_atoms and density must be > 0");
    const double ratio = s.total_atoms / s.density;
    const double R0 = s.R0 > 0.0 ? s.R0 : (s.model == DensityModel::paper ? std::sqrt(ratio) : std::cbrt(ratio));
    std::vector<UniformGasPoint> out;
    out.reserve(B_list.size());
    for (double B : B_list) {
        PhysicalParams q = p;
        q.resonance.B = B;
        UniformGasPoint pt;
        pt.B = B;
        pt.n = s.density;
        try {
            pt.a_eff = effective_scattering_length(q);
            if (pt.a_eff < 0.0) {
                pt.source = Branch::critical;
                pt.N0 = critical_number(R0, pt.a_eff);
                pt.unstable = s.total_atoms > pt.N0;
            } else {
                pt.source = Branch::depletion;
                pt.N0 = depletion_number(s.total_atoms, ratio, pt.a_eff);
            }
        } catch (const DomainError& e) {
            throw DomainError(fmt::format("B = {}: {}", B, e.what()));
        } catch (const ResonanceSingularity& e) {
            throw ResonanceSingularity(fmt::format("B = {}: {}", B, e.what()));
        }
        out.push_back(pt);
    }
    return out;
}

}  // namespace hybridbec
