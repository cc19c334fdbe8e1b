#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hybridbec/bdg.hpp"
#include "hybridbec/condensate.hpp"
#include "hybridbec/thermal.hpp"
#include "hybridbec/uniform_gas.hpp"
#include "hybridbec/units.hpp"
#include "hybridbec/variational.hpp"

namespace hybridbec {

struct GridConfig {
    double r_max = 10.0;
    std::size_t n_points = 400;
};

struct BdgConfig {
    BdgMethod method = BdgMethod::block_2x2;
    std::size_t j_max = 32;
    int l_max = 0;
    std::size_t n_modes = 16;  ///< direct-grid modes kept per l
    BdgOptions options;
};

struct VariationalConfig {
    std::vector<TrialMode> modes{TrialMode::m010, TrialMode::m100};
    VariationalOptions options;
};

enum class SweepVariable { none, B, T, N };

struct SweepConfig {
    SweepVariable variable = SweepVariable::none;
    std::vector<double> values;
};

struct RunConfig {
    PhysicalParams params;
    /// Derive lambda_a and alpha from the resonance record (a_eff(B), alpha(B)).
    bool couplings_from_field = false;
    GridConfig grid;
    SolverOptions solver;
    BdgConfig bdg;
    ThermalOptions thermal;
    VariationalConfig variational;
    UniformGasSettings uniform;
    SweepConfig sweep;
    std::string output_dir = "out";
};

/// Strict parse: unknown keys and out-of-range values raise ConfigError
/// naming the field.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Fully resolved config (defaults filled in), excluding output_dir.
nlohmann::json resolved_json(const RunConfig& c);

/// FNV-1a 64 of the canonical resolved JSON, as 16 hex digits.
std::string config_hash(const RunConfig& c);
std::uint64_t fnv1a64(std::string_view bytes);

std::string_view to_string(SweepVariable v);

/// Params for sweep point `value` of variable `v` (B: field, T: temperature,
/// N: atom number with N_m following per variational.n_m_mode).
PhysicalParams params_at(const RunConfig& c, SweepVariable v, double value);

/// Natural-unit params used by the trap subcommands, with field couplings applied if requested.
PhysicalParams effective_params(const RunConfig& c, const PhysicalParams& p);

}  // namespace hybridbec
