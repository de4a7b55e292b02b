#pragma once

// Run configuration, command execution, and result persistence behind the
// command-line front end. Every command is also callable in-process (the
// test suites drive them directly).
//
// Exit code contract: 0 pass, 1 condition or margin failure, 2 bad
// configuration, 3 I/O failure, 4 suspected blowup.

#include "rdlab/network.hpp"
#include "rdlab/simulator.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rdlab {

enum ExitCode : int {
    exit_ok = 0,
    exit_condition_failure = 1,
    exit_config_error = 2,
    exit_io_error = 3,
    exit_blowup = 4,
};

struct RunConfig {
    std::string command;
    std::string network = "four_species";   // built-in name or file path
    std::vector<int> resolution = {256};    // points per axis
    std::vector<double> extent = {1.0};     // length per axis
    std::vector<double> diffusivities;      // empty = per-network default
    double t_end = 1.0;
    double dt_init = 1e-4;
    double dt_min = 1e-12;
    double dt_max = 5e-4;
    double snapshot_stride = 1.0 / 128.0;
    double amplitude = 1.0;
    std::uint64_t seed = 20230814;
    std::string out_dir;                    // empty = no files written
    std::size_t budget = 100000;            // structure-check samples
    double u_max = 100.0;
    double k_scale = 1.0;                   // entropy-rate scale (diagnostics)
    bool plots = false;
    bool write_fields = false;
    std::vector<std::string> sweep_configs;

    bool operator==(const RunConfig&) const = default;
};

/// "rdlab-config 1" key=value text. parse(serialize(c)) == c.
RunConfig parse_config(const std::string& text);
RunConfig read_config_file(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

/// Resolve the network source: built-in name first, else description file.
ReactionNetwork load_network(const std::string& source);

Grid make_grid(const RunConfig& cfg);

/// The standard benchmark data: per-species positive floor plus a smooth
/// cosine bump (band limit 2 per axis, exact zero-flux walls), scaled by
/// `amplitude`.
std::vector<Field> bump_initial_data(const Grid& grid, std::size_t species,
                                     double amplitude);

SolverConfig make_solver_config(const RunConfig& cfg, const ReactionNetwork& net);

/// Diagnostics CSV: time,mass,entropy,u<i>_c0,u<i>_c1,...,min_value.
void write_diagnostics_csv(const Trajectory& traj, const std::string& path);

int run_check(const RunConfig& cfg, std::ostream& log);
int run_simulate(const RunConfig& cfg, std::ostream& log);
int run_verify_proof(const RunConfig& cfg, std::ostream& log);
int run_verify_lemma2(const RunConfig& cfg, std::ostream& log);
int run_sweep(const RunConfig& cfg, std::ostream& log);

/// Dispatch on cfg.command; maps exceptions onto the exit-code contract.
int run_command(const RunConfig& cfg, std::ostream& log);

} // namespace rdlab
