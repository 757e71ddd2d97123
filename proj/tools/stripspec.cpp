// stripspec: spectral laboratory for the Laplacian on curved planar strips.
//
//   stripspec <command> --config <path> [--out <dir>] [--seed <int>]
//
// commands: geometry, spectrum, bounds, sweep, verify, plot
// exit codes: 0 ok, 1 config error, 2 hypothesis violated,
//             3 solver failure, 4 verification failure

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "stripspec/commands.hpp"
#include "stripspec/config.hpp"
#include "stripspec/verify.hpp"

using namespace stripspec;

int main(int argc, char** argv) {
    CLI::App app{"spectral laboratory for curved planar strips"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    long long seed = -1;

    auto add_common = [&](CLI::App* cmd, bool config_required) {
        auto* opt = cmd->add_option("--config", config_path, "config file (key = value)");
        if (config_required) opt->required();
        cmd->add_option("--out", out_dir, "output directory override");
        cmd->add_option("--seed", seed, "solver seed override");
    };

    auto* geometry = app.add_subcommand("geometry", "hypothesis report and curve trace");
    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and bound-state count");
    auto* bounds = app.add_subcommand("bounds", "closed-form threshold bounds, two paths");
    auto* sweep = app.add_subcommand("sweep", "parameter sweeps with gap-exponent fit");
    auto* verify = app.add_subcommand("verify", "run the verification suite");
    auto* plot = app.add_subcommand("plot", "SVG figures from prior run artifacts");
    for (auto* cmd : {geometry, spectrum, bounds, sweep, plot}) add_common(cmd, true);
    add_common(verify, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        RunConfig rc;
        if (!config_path.empty()) rc = load_run_config(config_path);
        if (!out_dir.empty()) rc.out_dir = out_dir;
        if (seed >= 0) rc.seed = std::uint64_t(seed);

        if (geometry->parsed()) return cmd_geometry(rc);
        if (spectrum->parsed()) return cmd_spectrum(rc);
        if (bounds->parsed()) return cmd_bounds(rc);
        if (sweep->parsed()) return cmd_sweep(rc);
        if (verify->parsed()) return cmd_verify(rc);
        if (plot->parsed()) return cmd_plot(rc);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const HypothesisViolated& e) {
        std::cerr << "hypothesis violated: " << e.what() << "\n";
        return kExitHypothesis;
    } catch (const FactorizationFailed& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
