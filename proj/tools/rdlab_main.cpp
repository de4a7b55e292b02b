// rdlab: simulate dissipative reaction-diffusion systems with unequal
// diffusivities and verify the structural and analytic inequalities that
// keep them globally bounded. See README.md for the output formats.

#include "rdlab/errors.hpp"
#include "rdlab/run_io.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_common(CLI::App* cmd, rdlab::RunConfig& cfg, std::string& config_path) {
    cmd->add_option("--config", config_path, "config file (rdlab-config 1)");
    cmd->add_option("--network", cfg.network, "built-in network name or description file");
    cmd->add_option("--resolution", cfg.resolution, "grid points per axis")
        ->delimiter(',');
    cmd->add_option("--extent", cfg.extent, "domain length per axis")->delimiter(',');
    cmd->add_option("--seed", cfg.seed, "random seed");
    cmd->add_option("--out", cfg.out_dir, "output directory");
}

void add_solver(CLI::App* cmd, rdlab::RunConfig& cfg) {
    cmd->add_option("--diffusivities", cfg.diffusivities, "per-species diffusivities")
        ->delimiter(',');
    cmd->add_option("--t-end", cfg.t_end, "final time");
    cmd->add_option("--dt-init", cfg.dt_init, "initial step size");
    cmd->add_option("--dt-min", cfg.dt_min, "abort threshold for the step size");
    cmd->add_option("--dt-max", cfg.dt_max, "step size ceiling");
    cmd->add_option("--snapshot-stride", cfg.snapshot_stride, "snapshot interval");
    cmd->add_option("--amplitude", cfg.amplitude, "initial-data amplitude scale");
    cmd->add_flag("--plots", cfg.plots, "emit SVG plots");
    cmd->add_flag("--write-fields", cfg.write_fields, "dump initial/final fields");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"reaction-diffusion structure and estimate verification lab"};
    app.require_subcommand(1);

    rdlab::RunConfig cfg;
    std::string config_path;

    auto* check = app.add_subcommand("check", "structural condition checks");
    add_common(check, cfg, config_path);
    check->add_option("--budget", cfg.budget, "sample budget");
    check->add_option("--u-max", cfg.u_max, "sampling box edge");

    auto* sim = app.add_subcommand("simulate", "integrate the system");
    add_common(sim, cfg, config_path);
    add_solver(sim, cfg);

    auto* proof = app.add_subcommand("verify-proof", "entropy/auxiliary margins");
    add_common(proof, cfg, config_path);
    add_solver(proof, cfg);
    proof->add_option("--k-scale", cfg.k_scale, "entropy rate scale (diagnostic)");

    auto* lemma = app.add_subcommand("verify-lemma2", "interpolation estimate family");
    add_common(lemma, cfg, config_path);

    auto* sweep = app.add_subcommand("sweep", "run a batch of configs in parallel");
    add_common(sweep, cfg, config_path);
    sweep->add_option("--configs", cfg.sweep_configs, "config files, one run each")
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : rdlab::exit_config_error;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        if (!config_path.empty()) {
            // Config file first, explicit flags win.
            rdlab::RunConfig file_cfg = rdlab::read_config_file(config_path);
            file_cfg.command = sub->get_name();
            const rdlab::RunConfig defaults;
            const auto keep = [&](auto member) {
                if (cfg.*member != defaults.*member) file_cfg.*member = cfg.*member;
            };
            keep(&rdlab::RunConfig::network);
            keep(&rdlab::RunConfig::resolution);
            keep(&rdlab::RunConfig::extent);
            keep(&rdlab::RunConfig::diffusivities);
            keep(&rdlab::RunConfig::t_end);
            keep(&rdlab::RunConfig::dt_init);
            keep(&rdlab::RunConfig::dt_min);
            keep(&rdlab::RunConfig::dt_max);
            keep(&rdlab::RunConfig::snapshot_stride);
            keep(&rdlab::RunConfig::amplitude);
            keep(&rdlab::RunConfig::seed);
            keep(&rdlab::RunConfig::out_dir);
            keep(&rdlab::RunConfig::budget);
            keep(&rdlab::RunConfig::u_max);
            keep(&rdlab::RunConfig::k_scale);
            keep(&rdlab::RunConfig::plots);
            keep(&rdlab::RunConfig::write_fields);
            keep(&rdlab::RunConfig::sweep_configs);
            cfg = file_cfg;
        }
        cfg.command = sub->get_name();
        if (sub->get_name() == "verify-lemma2" && !sub->count("--resolution") &&
            config_path.empty())
            cfg.resolution = {64};
        return rdlab::run_command(cfg, std::cout);
    } catch (const rdlab::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return rdlab::exit_io_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return rdlab::exit_config_error;
    }
}
