#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "hybridbec/commands.hpp"
#include "hybridbec/config.hpp"
#include "hybridbec/csv.hpp"
#include "hybridbec/errors.hpp"

using namespace hybridbec;

int main(int argc, char** argv) {
    spdlog::set_default_logger(spdlog::stderr_color_mt("hybridbec"));
    spdlog::set_pattern("[%l] %v");

    CLI::App app{"Hybrid atom/molecule condensate: ground state, BdG spectra, densities, variational and uniform-gas curves"};
    app.set_version_flag("--version", std::string(tool_version));

    std::string config_path;
    std::string out_dir;
    unsigned jobs = 1;
    std::string method;
    bool compare = false;

    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--out", out_dir, "output directory (overrides output_dir)");
    app.add_option("--jobs", jobs, "worker threads for sweep points")->check(CLI::PositiveNumber);
    app.add_option("--method", method, "BdG method: paper | block | grid (overrides bdg.method)");
    app.add_flag("--compare", compare, "spectrum: run all three methods and write a deviation table");

    auto* ground = app.add_subcommand("ground", "condensate ground state and chemical potentials");
    auto* spectrum = app.add_subcommand("spectrum", "quasiparticle spectrum (mode tables)");
    auto* density = app.add_subcommand("density", "condensate and thermal density profiles per temperature");
    auto* variational = app.add_subcommand("variational", "variational excitation energies vs atom number");
    auto* fig3 = app.add_subcommand("fig3", "uniform-gas condensate number vs magnetic field");
    app.require_subcommand(1);
    for (auto* sub : {ground, spectrum, density, variational, fig3}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << error_json(ConfigError(std::string("command line: ") + e.what())) << '\n';
        return 2;
    }

    try {
        RunConfig cfg = load_config(config_path);
        if (!method.empty()) cfg.bdg.method = parse_method(method);
        CommandOptions opts;
        opts.out_dir = out_dir;
        opts.jobs = jobs;
        opts.compare = compare;

        Artifacts files;
        if (*ground) files = cmd_ground(cfg, opts);
        else if (*spectrum) files = cmd_spectrum(cfg, opts);
        else if (*density) files = cmd_density(cfg, opts);
        else if (*variational) files = cmd_variational(cfg, opts);
        else files = cmd_fig3(cfg, opts);

        for (const auto& f : files) std::cout << f.string() << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << error_json(e) << '\n';
        return exit_code_for(e);
    }
}
