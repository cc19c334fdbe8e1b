#include "hybridbec/config.hpp"

#include <fstream>

#include <fmt/format.h>

#include "hybridbec/errors.hpp"
#include "hybridbec/json_fields.hpp"

namespace hybridbec {

namespace {

void require(bool ok, const std::string& field, const std::string& msg) {
    if (!ok) throw ConfigError(field + ": " + msg);
}

template <class T, class Parse>
void read_enum(const JsonFields& f, const std::string& key, T& out, Parse parse) {
    if (!f.has(key)) return;
    std::string s;
    f.read(key, s);
    try {
        out = parse(s);
    } catch (const ConfigError& e) {
        throw ConfigError(f.where(key) + e.what());
    }
}

SweepVariable parse_sweep_variable(const std::string& s) {
    if (s == "B") return SweepVariable::B;
    if (s == "T") return SweepVariable::T;
    if (s == "N") return SweepVariable::N;
    throw ConfigError(fmt::format("unknown sweep variable '{}' (expected B|T|N)", s));
}

}  // namespace

std::string_view to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::none: return "none";
        case SweepVariable::B: return "B";
        case SweepVariable::T: return "T";
        case SweepVariable::N: return "N";
    }
    return "?";
}

RunConfig parse_config(const nlohmann::json& j) {
    RunConfig c;
    const JsonFields top(j, "",
                         {"params", "couplings_from_field", "grid", "solver", "bdg", "thermal", "variational",
                          "uniform", "sweep", "output_dir"});
    if (top.has("params")) {
        try {
            c.params = top.at("params").get<PhysicalParams>();
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("params: ") + e.what());
        }
    }
    c.params.validate();
    top.read("couplings_from_field", c.couplings_from_field);
    top.read("output_dir", c.output_dir);

    if (top.has("grid")) {
        const JsonFields g(top.at("grid"), "grid", {"r_max", "n_points"});
        g.read("r_max", c.grid.r_max);
        g.read("n_points", c.grid.n_points);
    }
    require(c.grid.r_max > 0.0, "grid.r_max", "must be > 0");
    require(c.grid.n_points >= 16, "grid.n_points", "must be >= 16");

    if (top.has("solver")) {
        const JsonFields s(top.at("solver"), "solver", {"tol", "max_iters", "dt", "dt_max"});
        s.read("tol", c.solver.tol);
        s.read("max_iters", c.solver.max_iters);
        s.read("dt", c.solver.dt);
        s.read("dt_max", c.solver.dt_max);
    }
    require(c.solver.tol > 0.0, "solver.tol", "must be > 0");
    require(c.solver.max_iters > 0, "solver.max_iters", "must be > 0");
    require(c.solver.dt > 0.0, "solver.dt", "must be > 0");
    require(c.solver.dt_max >= c.solver.dt, "solver.dt_max", "must be >= solver.dt");

    if (top.has("bdg")) {
        const JsonFields b(top.at("bdg"), "bdg",
                           {"method", "j_max", "l_max", "n_modes", "averaging", "levels", "strict_literal",
                            "zero_energy_tol"});
        read_enum(b, "method", c.bdg.method, parse_method);
        b.read("j_max", c.bdg.j_max);
        b.read("l_max", c.bdg.l_max);
        b.read("n_modes", c.bdg.n_modes);
        read_enum(b, "averaging", c.bdg.options.averaging, parse_averaging);
        read_enum(b, "levels", c.bdg.options.levels, parse_levels);
        b.read("strict_literal", c.bdg.options.strict_literal);
        b.read("zero_energy_tol", c.bdg.options.zero_energy_tol);
    }
    require(c.bdg.j_max >= 1, "bdg.j_max", "must be >= 1");
    require(c.bdg.l_max >= 0, "bdg.l_max", "must be >= 0");
    require(c.bdg.n_modes >= 1, "bdg.n_modes", "must be >= 1");
    require(c.bdg.options.zero_energy_tol >= 0.0, "bdg.zero_energy_tol", "must be >= 0");

    if (top.has("thermal")) {
        const JsonFields t(top.at("thermal"), "thermal", {"quantum_depletion", "norm_tol"});
        t.read("quantum_depletion", c.thermal.quantum_depletion);
        t.read("norm_tol", c.thermal.norm_tol);
    }
    require(c.thermal.norm_tol > 0.0, "thermal.norm_tol", "must be > 0");

    if (top.has("variational")) {
        const JsonFields v(top.at("variational"), "variational",
                           {"modes", "n_m_mode", "v_max", "omega_lo", "omega_hi", "coarse"});
        if (v.has("modes")) {
            std::vector<std::string> names;
            v.read("modes", names);
            c.variational.modes.clear();
            for (const auto& n : names) {
                try {
                    c.variational.modes.push_back(parse_trial_mode(n));
                } catch (const ConfigError& e) {
                    throw ConfigError(v.where("modes") + e.what());
                }
            }
        }
        read_enum(v, "n_m_mode", c.variational.options.molecules, parse_molecule_count);
        v.read("v_max", c.variational.options.v_max);
        v.read("omega_lo", c.variational.options.omega_lo);
        v.read("omega_hi", c.variational.options.omega_hi);
        v.read("coarse", c.variational.options.coarse);
    }
    const auto& vo = c.variational.options;
    require(!c.variational.modes.empty(), "variational.modes", "must not be empty");
    require(vo.v_max > 0.0, "variational.v_max", "must be > 0");
    require(vo.omega_lo > 0.0, "variational.omega_lo", "must be > 0");
    require(vo.omega_hi > vo.omega_lo, "variational.omega_hi", "must exceed omega_lo");
    require(vo.coarse >= 2, "variational.coarse", "must be >= 2");

    if (top.has("uniform")) {
        const JsonFields u(top.at("uniform"), "uniform", {"total_atoms", "density", "R0", "density_model"});
        u.read("total_atoms", c.uniform.total_atoms);
        u.read("density", c.uniform.density);
        u.read("R0", c.uniform.R0);
        read_enum(u, "density_model", c.uniform.model, parse_density_model);
    }
    require(c.uniform.total_atoms > 0.0, "uniform.total_atoms", "must be > 0");
    require(c.uniform.density > 0.0, "uniform.density", "must be > 0");
    require(c.uniform.R0 >= 0.0, "uniform.R0", "must be >= 0 (0 derives it from the density)");

    if (top.has("sweep")) {
        const JsonFields s(top.at("sweep"), "sweep", {"variable", "values"});
        read_enum(s, "variable", c.sweep.variable, parse_sweep_variable);
        s.read("values", c.sweep.values);
        require(c.sweep.variable != SweepVariable::none, "sweep.variable", "required when sweep is given");
        require(!c.sweep.values.empty(), "sweep.values", "must not be empty");
        for (double x : c.sweep.values) require(std::isfinite(x), "sweep.values", "must be finite");
        if (c.sweep.variable == SweepVariable::T)
            for (double x : c.sweep.values) require(x >= 0.0, "sweep.values", "temperatures must be >= 0");
        if (c.sweep.variable == SweepVariable::N)
            for (double x : c.sweep.values) require(x > 0.0, "sweep.values", "atom numbers must be > 0");
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(fmt::format("{}: invalid JSON ({})", path.string(), e.what()));
    }
    return parse_config(j);
}

nlohmann::json resolved_json(const RunConfig& c) {
    nlohmann::json modes = nlohmann::json::array();
    for (auto m : c.variational.modes) modes.push_back(std::string(to_string(m)));
    const auto& b = c.bdg;
    const auto& v = c.variational.options;
    nlohmann::json out = {
        {"params", c.params},
        {"couplings_from_field", c.couplings_from_field},
        {"grid", {{"r_max", c.grid.r_max}, {"n_points", c.grid.n_points}}},
        {"solver", {{"tol", c.solver.tol}, {"max_iters", c.solver.max_iters}, {"dt", c.solver.dt}, {"dt_max", c.solver.dt_max}}},
        {"bdg",
         {{"method", std::string(to_string(b.method))},
          {"j_max", b.j_max},
          {"l_max", b.l_max},
          {"n_modes", b.n_modes},
          {"averaging", std::string(to_string(b.options.averaging))},
          {"levels", std::string(to_string(b.options.levels))},
          {"strict_literal", b.options.strict_literal},
          {"zero_energy_tol", b.options.zero_energy_tol}}},
        {"thermal", {{"quantum_depletion", c.thermal.quantum_depletion}, {"norm_tol", c.thermal.norm_tol}}},
        {"variational",
         {{"modes", modes},
          {"n_m_mode", v.molecules == MoleculeCount::equal ? "equal" : "fixed"},
          {"v_max", v.v_max},
          {"omega_lo", v.omega_lo},
          {"omega_hi", v.omega_hi},
          {"coarse", v.coarse}}},
        {"uniform",
         {{"total_atoms", c.uniform.total_atoms},
          {"density", c.uniform.density},
          {"R0", c.uniform.R0},
          {"density_model", std::string(to_string(c.uniform.model))}}},
    };
    if (c.sweep.variable != SweepVariable::none)
        out["sweep"] = {{"variable", std::string(to_string(c.sweep.variable))}, {"values", c.sweep.values}};
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string config_hash(const RunConfig& c) { return fmt::format("{:016x}", fnv1a64(resolved_json(c).dump())); }

PhysicalParams params_at(const RunConfig& c, SweepVariable v, double value) {
    PhysicalParams p = c.params;
    switch (v) {
        case SweepVariable::none: break;
        case SweepVariable::B: p.resonance.B = value; break;
        case SweepVariable::T: p.temperature = value; break;
        case SweepVariable::N:
            p.N_a = value;
            if (c.variational.options.molecules == MoleculeCount::equal) p.N_m = value;
            break;
    }
    return p;
}

PhysicalParams effective_params(const RunConfig& c, const PhysicalParams& p) {
    const PhysicalParams q = c.couplings_from_field ? with_field_couplings(p) : p;
    return to_natural(q);
}

}  // namespace hybridbec
