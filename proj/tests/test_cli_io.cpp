#include "rdlab/run_io.hpp"

#include "rdlab/errors.hpp"
#include "rdlab/network.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rdlab;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("rdlab_test_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(RDLAB_BIN_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

RunConfig small_sim_config() {
    RunConfig cfg;
    cfg.command = "simulate";
    cfg.network = "four_species";
    cfg.resolution = {48};
    cfg.diffusivities = {1.0, 10.0, 0.1, 5.0};
    cfg.t_end = 0.25;
    cfg.dt_init = 2.5e-4;
    cfg.dt_max = 1e-3;
    cfg.snapshot_stride = 1.0 / 64.0;
    return cfg;
}

} // namespace

TEST_CASE("config round trip is the identity") {
    RunConfig cfg = small_sim_config();
    cfg.out_dir = "/tmp/somewhere";
    cfg.sweep_configs = {"a.cfg", "b.cfg"};
    cfg.plots = true;
    cfg.amplitude = 2.5;
    const std::string text = serialize_config(cfg);
    const RunConfig back = parse_config(text);
    CHECK(back == cfg);
    CHECK(serialize_config(back) == text);

    CHECK_THROWS_AS((void)parse_config("no header"), ParseError);
    CHECK_THROWS_AS((void)parse_config("rdlab-config 1\nbogus_key = 3\n"), ParseError);
    CHECK_THROWS_AS((void)parse_config("rdlab-config 1\nt_end = abc\n"), ParseError);
}

TEST_CASE("check command: pass, fail and parse-error exit codes") {
    std::ostringstream log;

    RunConfig ok;
    ok.command = "check";
    ok.network = "four_species";
    ok.budget = 20000;
    CHECK(run_command(ok, log) == exit_ok);

    // Mass-growing network file fails the dissipation gate.
    const fs::path dir = fresh_dir("check");
    const fs::path netfile = dir / "grow.txt";
    {
        ReactionNetwork grow("grow", 2,
                             {{Monomial{1.0, {1, 1}}}, {Monomial{1.0, {1, 1}}}}, 3.0);
        write_network_file(grow, netfile.string());
    }
    RunConfig bad = ok;
    bad.network = netfile.string();
    CHECK(run_command(bad, log) == exit_condition_failure);

    const fs::path malformed = dir / "malformed.txt";
    std::ofstream(malformed) << "not a network\n";
    RunConfig mal = ok;
    mal.network = malformed.string();
    CHECK(run_command(mal, log) == exit_config_error);

    RunConfig missing = ok;
    missing.network = (dir / "nope.txt").string();
    CHECK(run_command(missing, log) == exit_io_error);
}

TEST_CASE("simulate writes diagnostics, summary and optional artifacts") {
    const fs::path dir = fresh_dir("simulate");
    RunConfig cfg = small_sim_config();
    cfg.out_dir = dir.string();
    cfg.plots = true;
    cfg.write_fields = true;

    std::ostringstream log;
    CHECK(run_command(cfg, log) == exit_ok);
    CHECK(fs::exists(dir / "diagnostics.csv"));
    CHECK(fs::exists(dir / "summary.json"));
    CHECK(fs::exists(dir / "mass.svg"));
    CHECK(fs::exists(dir / "entropy.svg"));
    CHECK(fs::exists(dir / "sup_norm.svg"));
    CHECK(fs::exists(dir / "u1_initial.csv"));
    CHECK(fs::exists(dir / "u4_final.csv"));

    const std::string csv = slurp(dir / "diagnostics.csv");
    CHECK(csv.rfind("time,mass,entropy,u1_c0,u1_c1,", 0) == 0);

    // Determinism: identical config and seed give identical bytes.
    const fs::path dir2 = fresh_dir("simulate2");
    RunConfig cfg2 = cfg;
    cfg2.out_dir = dir2.string();
    std::ostringstream log2;
    CHECK(run_command(cfg2, log2) == exit_ok);
    CHECK(slurp(dir2 / "diagnostics.csv") == csv);
}

TEST_CASE("linear decay summary records the exponential mass loss") {
    const fs::path dir = fresh_dir("decay");
    RunConfig cfg;
    cfg.command = "simulate";
    cfg.network = "linear_decay";
    cfg.resolution = {48};
    cfg.diffusivities = {1.0, 2.0};
    cfg.t_end = 1.0;
    cfg.dt_init = 2.5e-4;
    cfg.dt_max = 5e-4;
    cfg.snapshot_stride = 1.0 / 64.0;
    cfg.out_dir = dir.string();
    std::ostringstream log;
    CHECK(run_command(cfg, log) == exit_ok);

    const std::string summary = slurp(dir / "summary.json");
    // Final mass = e^{-T} initial mass; mass drift relative to t=0 is 1-e^{-1}.
    CHECK(summary.find("\"status\": \"completed\"") != std::string::npos);
    const auto pos = summary.find("\"mass_drift_rel\": ");
    REQUIRE(pos != std::string::npos);
    const double drift = std::stod(summary.substr(pos + 18));
    CHECK(drift == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-6));
}

TEST_CASE("verify-proof exit codes") {
    std::ostringstream log;
    RunConfig cfg;
    cfg.command = "verify-proof";
    cfg.network = "four_species";
    cfg.resolution = {64};
    cfg.diffusivities = {1.0, 10.0, 0.1, 5.0};
    cfg.t_end = 0.5;
    cfg.dt_init = 2.5e-4;
    cfg.dt_max = 5e-4;
    cfg.snapshot_stride = 1.0 / 128.0;
    CHECK(run_command(cfg, log) == exit_ok);

    RunConfig degenerate = cfg;
    degenerate.t_end = 0.0;
    CHECK(run_command(degenerate, log) == exit_config_error);

    // Deliberately underdamped entropy rate on a coarse snapshot mesh with
    // large data: the residual sign check trips.
    RunConfig wrong_rate = cfg;
    wrong_rate.t_end = 1.0;
    wrong_rate.dt_max = 1e-3;
    wrong_rate.snapshot_stride = 1.0 / 16.0;
    wrong_rate.amplitude = 4.0;
    wrong_rate.k_scale = 0.25;
    CHECK(run_command(wrong_rate, log) == exit_condition_failure);
    wrong_rate.k_scale = 1.0;
    CHECK(run_command(wrong_rate, log) == exit_ok);
}

TEST_CASE("sweep aggregates one row per run and keeps going on failure") {
    const fs::path dir = fresh_dir("sweep");

    // Empty sweep: empty table, success.
    RunConfig empty;
    empty.command = "sweep";
    empty.out_dir = (dir / "empty").string();
    std::ostringstream log0;
    CHECK(run_command(empty, log0) == exit_ok);
    CHECK(slurp(dir / "empty" / "sweep_results.csv") ==
          "index,config,command,exit_code,mass_drift_rel,u_sup\n");

    // Three runs: two fine, one with a broken network file.
    std::vector<std::string> paths;
    for (int i = 0; i < 3; ++i) {
        RunConfig sub = small_sim_config();
        sub.t_end = 0.1;
        sub.amplitude = static_cast<double>(1 << i);
        if (i == 1) sub.network = (dir / "broken.txt").string();
        const fs::path p = dir / ("run" + std::to_string(i) + ".cfg");
        std::ofstream(p) << serialize_config(sub);
        paths.push_back(p.string());
    }
    std::ofstream(dir / "broken.txt") << "junk\n";

    RunConfig sweep;
    sweep.command = "sweep";
    sweep.out_dir = dir.string();
    sweep.sweep_configs = paths;
    std::ostringstream log;
    CHECK(run_command(sweep, log) == exit_ok);

    const std::string table = slurp(dir / "sweep_results.csv");
    std::size_t rows = 0;
    for (char c : table)
        if (c == '\n') ++rows;
    CHECK(rows == 4); // header + 3 runs
    CHECK(table.find("run1.cfg,simulate,2") != std::string::npos); // flagged row
}

TEST_CASE("blowup through the binary: exit 4 with partial outputs") {
    const fs::path dir = fresh_dir("blowup");
    const fs::path netfile = dir / "riccati.txt";
    {
        ReactionNetwork net("riccati", 2,
                            {{Monomial{1.0, {2, 0}}}, {Monomial{1.0, {0, 2}}}}, 10.0);
        write_network_file(net, netfile.string());
    }
    const int rc = run_cli("simulate --network " + netfile.string() +
                           " --resolution 32 --diffusivities 1,1 --t-end 1"
                           " --amplitude 2 --dt-min 1e-10 --out " +
                           (dir / "out").string());
    CHECK(rc == exit_blowup);
    CHECK(fs::exists(dir / "out" / "diagnostics.csv"));
    const std::string summary = slurp(dir / "out" / "summary.json");
    CHECK(summary.find("blowup-suspected") != std::string::npos);
}

TEST_CASE("command-line binary honors the exit code contract") {
    CHECK(run_cli("check --network four_species --budget 20000") == exit_ok);
    CHECK(run_cli("check --network linear_decay --budget 20000") ==
          exit_condition_failure);
    CHECK(run_cli("check --network /nonexistent/net.txt") == exit_io_error);
    CHECK(run_cli("definitely-not-a-command") == exit_config_error);
    CHECK(run_cli("simulate --t-end -1") == exit_config_error);

    // Config file driving the binary, CLI flag overriding.
    const fs::path dir = fresh_dir("clicfg");
    RunConfig cfg = small_sim_config();
    cfg.t_end = 0.1;
    const fs::path p = dir / "sim.cfg";
    std::ofstream(p) << serialize_config(cfg);
    CHECK(run_cli("simulate --config " + p.string()) == exit_ok);
    CHECK(run_cli("simulate --config " + p.string() + " --t-end -5") ==
          exit_config_error);
}
