#include "hybridbec/commands.hpp"

#include <cmath>
#include <map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "hybridbec/csv.hpp"
#include "hybridbec/errors.hpp"
#include "hybridbec/worker_pool.hpp"

namespace hybridbec {

namespace {

namespace fs = std::filesystem;
using S = std::vector<std::string>;

constexpr std::string_view natural_units = "natural (hbar = M = omega_a = 1; lengths in sqrt(hbar/(M omega_a)))";

fs::path output_dir(const RunConfig& c, const CommandOptions& o) {
    fs::path dir = o.out_dir.empty() ? fs::path(c.output_dir) : o.out_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(fmt::format("cannot create output directory '{}': {}", dir.string(), ec.message()));
    return dir;
}

struct Point {
    std::size_t index = 0;
    double value = 0.0;
};

std::vector<Point> sweep_points(const RunConfig& c) {
    std::vector<Point> pts;
    if (c.sweep.variable == SweepVariable::none) return {Point{}};
    for (std::size_t i = 0; i < c.sweep.values.size(); ++i) pts.push_back({i, c.sweep.values[i]});
    return pts;
}

std::string suffix(const RunConfig& c, const Point& p) {
    return c.sweep.variable == SweepVariable::none ? "" : fmt::format("_p{:03d}", p.index);
}

CsvWriter open_csv(const fs::path& path, const RunConfig& c, std::string_view units) {
    CsvWriter w(path);
    w.meta("config_hash", config_hash(c)).meta("units", units).timestamp();
    return w;
}

void require_sweep(const RunConfig& c, SweepVariable allowed, std::string_view command) {
    if (c.sweep.variable != SweepVariable::none && c.sweep.variable != allowed)
        throw ConfigError(fmt::format("sweep.variable: '{}' cannot sweep {} (use {})", command,
                                      to_string(c.sweep.variable), to_string(allowed)));
}

struct GroundPoint {
    PhysicalParams params;
    CondensateState state;
};

GroundPoint solve_point(const RunConfig& c, const Point& pt) {
    const PhysicalParams p = effective_params(c, params_at(c, c.sweep.variable, pt.value));
    const RadialGrid grid(c.grid.r_max, c.grid.n_points);
    return {p, solve_coupled_gpe(p, grid, c.solver)};
}

std::string method_flags(const RunConfig& c, BdgMethod m) {
    const auto& o = c.bdg.options;
    return fmt::format("method={} levels={} averaging={} strict_literal={} j_max={} l_max={} n_modes={}", to_string(m),
                       to_string(o.levels), to_string(o.averaging), o.strict_literal, c.bdg.j_max, c.bdg.l_max,
                       c.bdg.n_modes);
}

// Modes of both species for one method; direct-grid concatenates l = 0..l_max.
std::pair<ModeSet, ModeSet> run_method(const RunConfig& c, BdgMethod m, const CondensateState& st,
                                       const PhysicalParams& p, const RadialGrid& grid) {
    switch (m) {
        case BdgMethod::paper_literal: return paper_literal_spectrum(st, p, grid, c.bdg.j_max, c.bdg.options);
        case BdgMethod::block_2x2: return block_2x2_spectrum(st, p, grid, c.bdg.j_max, c.bdg.options);
        case BdgMethod::direct_grid: break;
    }
    auto all = direct_grid_spectrum(st, p, grid, 0, c.bdg.n_modes, c.bdg.options);
    for (int l = 1; l <= c.bdg.l_max; ++l) {
        auto [a, mo] = direct_grid_spectrum(st, p, grid, l, c.bdg.n_modes, c.bdg.options);
        all.first.modes.insert(all.first.modes.end(), a.modes.begin(), a.modes.end());
        all.second.modes.insert(all.second.modes.end(), mo.modes.begin(), mo.modes.end());
        all.first.skipped += a.skipped;
        all.second.skipped += mo.skipped;
    }
    return all;
}

void write_modes(const fs::path& path, const RunConfig& c, BdgMethod m, int l, const ModeSet& atoms,
                 const ModeSet& mols) {
    auto w = open_csv(path, c, natural_units);
    w.meta("method_flags", method_flags(c, m));
    if (m == BdgMethod::direct_grid) w.meta("l", std::to_string(l));
    w.meta("skipped_atom", std::to_string(atoms.skipped)).meta("skipped_molecule", std::to_string(mols.skipped));
    w.columns({"method", "species", "j", "branch", "re_E", "im_E", "norm"});
    for (const ModeSet* set : {&atoms, &mols})
        for (const Mode& md : set->modes) {
            if (m == BdgMethod::direct_grid && md.l != l) continue;
            w.row({std::string(to_string(m)), std::string(to_string(set->species)), std::to_string(md.j),
                   md.branch > 0 ? "+" : "-", CsvWriter::num(md.energy.real()), CsvWriter::num(md.energy.imag()),
                   CsvWriter::num(md.norm)});
        }
}

double rel_dev(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

void write_compare(const fs::path& path, const RunConfig& c, const std::map<BdgMethod, std::pair<ModeSet, ModeSet>>& r) {
    auto w = open_csv(path, c, natural_units);
    w.meta("method_flags", method_flags(c, BdgMethod::direct_grid) + " compare=all");
    // Deviation rows pair block index j with the j-th l = 0 grid mode; rows where
    // the grid mode is the zero (phase) mode are listed but left out of the maximum.
    double max_dev = 0.0;
    struct Row {
        S cells;
    };
    std::vector<Row> rows;
    for (int s = 0; s < 2; ++s) {
        const auto pick = [&](BdgMethod m) -> const ModeSet& {
            const auto& pr = r.at(m);
            return s == 0 ? pr.first : pr.second;
        };
        const ModeSet& lit = pick(BdgMethod::paper_literal);
        const ModeSet& blk = pick(BdgMethod::block_2x2);
        const ModeSet& grd = pick(BdgMethod::direct_grid);
        std::vector<const Mode*> grid_l0;
        for (const Mode& m : grd.modes)
            if (m.l == 0) grid_l0.push_back(&m);
        for (std::size_t j = 0; j < blk.modes.size(); ++j) {
            const double eb = blk.modes[j].energy.real();
            double ep = std::nan("");
            for (const Mode& m : lit.modes)
                if (m.j == static_cast<int>(j) && m.branch > 0) ep = std::abs(m.energy.real());
            const double eg = j < grid_l0.size() ? grid_l0[j]->energy.real() : std::nan("");
            const bool zero = j < grid_l0.size() && grid_l0[j]->zero_mode;
            const double d = std::isnan(eg) ? std::nan("") : rel_dev(eb, eg);
            if (!zero && std::isfinite(d)) max_dev = std::max(max_dev, d);
            rows.push_back({{s == 0 ? "atom" : "molecule", std::to_string(j), CsvWriter::num(ep), CsvWriter::num(eb),
                             CsvWriter::num(eg), zero ? "zero-mode" : CsvWriter::num(d)}});
        }
    }
    w.meta("max_rel_dev_block_grid", max_dev);
    w.columns({"species", "j", "E_paper_abs", "E_block", "E_grid", "rel_dev_block_grid"});
    for (const auto& row : rows) w.row(row.cells);
}

}  // namespace

Artifacts cmd_ground(const RunConfig& c, const CommandOptions& o) {
    const fs::path dir = output_dir(c, o);
    const auto pts = sweep_points(c);
    const auto results = parallel_map<GroundPoint>(pts.size(), o.jobs, [&](std::size_t i) { return solve_point(c, pts[i]); });
    const RadialGrid grid(c.grid.r_max, c.grid.n_points);

    Artifacts out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& s = results[i].state;
        const fs::path path = dir / fmt::format("condensate{}.csv", suffix(c, pts[i]));
        auto w = open_csv(path, c, natural_units);
        w.meta("method_flags", "imaginary-time semi-implicit")
            .meta("mu_a", s.mu_a)
            .meta("mu_m", s.mu_m)
            .meta("residual", s.residual);
        w.columns({"r", "phi_a", "phi_m"});
        for (std::size_t k = 0; k < grid.size(); ++k)
            w.row({CsvWriter::num(grid.r(k)), CsvWriter::num(s.phi_a[k]), CsvWriter::num(s.phi_m[k])});
        out.push_back(path);
    }

    const fs::path summary = dir / "ground_summary.csv";
    auto w = open_csv(summary, c, natural_units);
    w.meta("sweep", std::string(to_string(c.sweep.variable)));
    w.columns({"point", "value", "mu_a", "mu_m", "mu_m_minus_2mu_a", "residual", "iterations", "energy"});
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& [p, s] = results[i];
        w.row({std::to_string(i), CsvWriter::num(pts[i].value), CsvWriter::num(s.mu_a), CsvWriter::num(s.mu_m),
               CsvWriter::num(equilibrium_defect(s.mu_a, s.mu_m)), CsvWriter::num(s.residual),
               std::to_string(s.iterations), CsvWriter::num(condensate_energy(s, p, grid))});
    }
    out.push_back(summary);
    return out;
}

Artifacts cmd_spectrum(const RunConfig& c, const CommandOptions& o) {
    const fs::path dir = output_dir(c, o);
    const auto pts = sweep_points(c);
    const std::vector<BdgMethod> methods = o.compare
        ? std::vector<BdgMethod>{BdgMethod::paper_literal, BdgMethod::block_2x2, BdgMethod::direct_grid}
        : std::vector<BdgMethod>{c.bdg.method};
    using Result = std::map<BdgMethod, std::pair<ModeSet, ModeSet>>;
    const auto results = parallel_map<Result>(pts.size(), o.jobs, [&](std::size_t i) {
        const auto gp = solve_point(c, pts[i]);
        const RadialGrid grid(c.grid.r_max, c.grid.n_points);
        Result r;
        for (BdgMethod m : methods) r.emplace(m, run_method(c, m, gp.state, gp.params, grid));
        return r;
    });

    Artifacts out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (const auto& [m, sets] : results[i]) {
            const std::string stem = fmt::format("modes_{}", to_string(m));
            if (m == BdgMethod::direct_grid) {
                for (int l = 0; l <= c.bdg.l_max; ++l) {
                    const fs::path path = dir / fmt::format("{}_l{}{}.csv", stem, l, suffix(c, pts[i]));
                    write_modes(path, c, m, l, sets.first, sets.second);
                    out.push_back(path);
                }
            } else {
                const fs::path path = dir / fmt::format("{}{}.csv", stem, suffix(c, pts[i]));
                write_modes(path, c, m, 0, sets.first, sets.second);
                out.push_back(path);
            }
        }
        if (o.compare) {
            const fs::path path = dir / fmt::format("compare{}.csv", suffix(c, pts[i]));
            write_compare(path, c, results[i]);
            out.push_back(path);
        }
    }
    return out;
}

Artifacts cmd_density(const RunConfig& c, const CommandOptions& o) {
    require_sweep(c, SweepVariable::T, "density");
    const fs::path dir = output_dir(c, o);
    const auto pts = sweep_points(c);
    const auto gp = solve_point(c, Point{0, c.params.temperature});
    const RadialGrid grid(c.grid.r_max, c.grid.n_points);
    const auto [atoms, mols] = run_method(c, c.bdg.method, gp.state, gp.params, grid);

    struct Result {
        DensityProfile profile;
        ThermalReport report;
    };
    const auto results = parallel_map<Result>(pts.size(), o.jobs, [&](std::size_t i) {
        PhysicalParams p = gp.params;
        if (c.sweep.variable == SweepVariable::T)
            p.temperature = effective_params(c, params_at(c, SweepVariable::T, pts[i].value)).temperature;
        Result r;
        r.profile = density_profile(gp.state, atoms, mols, p, grid, c.thermal, &r.report);
        return r;
    });

    Artifacts out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& [d, rep] = results[i];
        if (rep.excluded > 0) spdlog::info("density T={}: {} modes excluded from thermal sums", d.T, rep.excluded);
        const fs::path path = dir / fmt::format("density{}.csv", suffix(c, pts[i]));
        auto w = open_csv(path, c, natural_units);
        w.meta("method_flags", method_flags(c, c.bdg.method) +
                                   fmt::format(" quantum_depletion={}", c.thermal.quantum_depletion))
            .meta("T", d.T)
            .meta("j_max", std::to_string(c.bdg.j_max))
            .meta("method", std::string(to_string(c.bdg.method)))
            .meta("modes_included", std::to_string(rep.included))
            .meta("modes_excluded", std::to_string(rep.excluded))
            .meta("max_norm_deviation", rep.max_norm_deviation);
        w.columns({"r", "rho_a_cond", "rho_a_thermal", "rho_m_cond", "rho_m_thermal", "rho_total"});
        for (std::size_t k = 0; k < grid.size(); ++k)
            w.row({CsvWriter::num(d.r[k]), CsvWriter::num(d.rho_a_cond[k]), CsvWriter::num(d.rho_a_thermal[k]),
                   CsvWriter::num(d.rho_m_cond[k]), CsvWriter::num(d.rho_m_thermal[k]), CsvWriter::num(d.rho_total[k])});
        out.push_back(path);
    }

    const fs::path summary = dir / "density_summary.csv";
    auto w = open_csv(summary, c, natural_units);
    w.meta("method", std::string(to_string(c.bdg.method)));
    w.columns({"point", "T", "N_a_total", "N_m_total", "N_atom_equivalent", "N_a_thermal", "N_m_thermal"});
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& d = results[i].profile;
        const auto t = total_numbers(d, grid);
        w.row({std::to_string(i), CsvWriter::num(d.T), CsvWriter::num(t.N_a), CsvWriter::num(t.N_m),
               CsvWriter::num(t.atom_equivalent), CsvWriter::num(grid.integrate(d.rho_a_thermal)),
               CsvWriter::num(grid.integrate(d.rho_m_thermal))});
    }
    out.push_back(summary);
    return out;
}

Artifacts cmd_variational(const RunConfig& c, const CommandOptions& o) {
    require_sweep(c, SweepVariable::N, "variational");
    const fs::path dir = output_dir(c, o);
    const PhysicalParams base = effective_params(c, c.params);
    std::vector<double> n_list = c.sweep.variable == SweepVariable::N ? c.sweep.values : std::vector<double>{base.N_a};
    struct Task {
        TrialMode mode;
        double n;
    };
    std::vector<Task> tasks;
    for (TrialMode m : c.variational.modes)
        for (double n : n_list) tasks.push_back({m, n});
    const auto results = parallel_map<std::vector<VariationalResult>>(tasks.size(), o.jobs, [&](std::size_t i) {
        return sweep_spectrum(tasks[i].mode, base, {tasks[i].n}, c.variational.options);
    });

    const fs::path path = dir / "variational.csv";
    auto w = open_csv(path, c, natural_units);
    const auto& vo = c.variational.options;
    w.meta("method_flags", fmt::format("n_m_mode={} v_max={} omega_box=[{}, {}] coarse={} nonresonant=alpha,lambda_am->0",
                                       vo.molecules == MoleculeCount::equal ? "equal" : "fixed", vo.v_max, vo.omega_lo,
                                       vo.omega_hi, vo.coarse));
    w.columns({"N", "mode", "resonant_flag", "v_opt", "omega_opt", "energy"});
    for (const auto& pair : results)
        for (const auto& r : pair)
            w.row({CsvWriter::num(r.n_atoms), std::string(to_string(r.mode)), r.resonant ? "1" : "0",
                   CsvWriter::num(r.v_opt), CsvWriter::num(r.omega_opt), CsvWriter::num(r.energy)});
    return {path};
}

Artifacts cmd_fig3(const RunConfig& c, const CommandOptions& o) {
    if (c.sweep.variable != SweepVariable::B) throw ConfigError("sweep.variable: 'fig3' needs a B sweep");
    const fs::path dir = output_dir(c, o);
    const auto& Bs = c.sweep.values;
    const auto pts = parallel_map<UniformGasPoint>(Bs.size(), o.jobs, [&](std::size_t i) {
        return figure3_curve(c.params, c.uniform, {Bs[i]}).front();
    });
    const fs::path path = dir / "fig3.csv";
    auto w = open_csv(path, c, "as configured (a0 and R0 in the density's length unit, B in mT)");
    w.meta("method_flags", fmt::format("density_model={} total_atoms={} density={} R0={}", to_string(c.uniform.model),
                                       CsvWriter::num(c.uniform.total_atoms), CsvWriter::num(c.uniform.density),
                                       CsvWriter::num(c.uniform.R0)));
    w.columns({"B", "a_eff", "branch", "N0"});
    for (const auto& p : pts)
        w.row({CsvWriter::num(p.B), CsvWriter::num(p.a_eff), std::string(to_string(p.source)), CsvWriter::num(p.N0)});
    return {path};
}

int exit_code_for(const std::exception& e) {
    const auto* err = dynamic_cast<const Error*>(&e);
    if (!err) return 5;
    const std::string_view k = err->kind();
    if (k == "config" || k == "domain" || k == "resonance-singularity" || k == "nonpositive-energy") return 2;
    if (k == "no-convergence" || k == "fixed-point-divergence" || k == "eigensolver-failure" ||
        k == "no-interior-minimum" || k == "mode-normalization")
        return 3;
    if (k == "collapse-detected") return 4;
    return 5;
}

std::string error_json(const std::exception& e) {
    nlohmann::json j;
    const auto* err = dynamic_cast<const Error*>(&e);
    j["error"] = err ? err->kind() : "internal";
    j["message"] = e.what();
    j["exit_code"] = exit_code_for(e);
    if (const auto* nc = dynamic_cast<const NoConvergence*>(&e)) j["last_residual"] = nc->last_residual();
    if (const auto* cd = dynamic_cast<const CollapseDetected*>(&e)) j["width"] = cd->width();
    return j.dump();
}

}  // namespace hybridbec
