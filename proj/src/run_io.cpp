#include "rdlab/run_io.hpp"

#include "rdlab/errors.hpp"
#include "rdlab/field_io.hpp"
#include "rdlab/lemma2.hpp"
#include "rdlab/proof_harness.hpp"
#include "rdlab/spectral.hpp"
#include "rdlab/svg.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <numbers>
#include <ostream>
#include <sstream>

namespace rdlab {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::string join_list(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ",";
        out += items[i];
    }
    return out;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + dir);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write: " + path);
    out << text;
    if (!out) throw IoError("failed writing: " + path);
}

} // namespace

RunConfig parse_config(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "rdlab-config 1")
        throw ParseError("config: missing 'rdlab-config 1' header");

    RunConfig cfg;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        const auto trim = [](std::string& s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t\r");
            s = (a == std::string::npos) ? "" : s.substr(a, b - a + 1);
        };
        trim(key);
        trim(value);
        const auto fail = [&](const std::string& msg) -> ParseError {
            return ParseError("config line " + std::to_string(lineno) + ": " + msg);
        };
        try {
            if (key == "command") cfg.command = value;
            else if (key == "network") cfg.network = value;
            else if (key == "resolution") {
                cfg.resolution.clear();
                for (const auto& v : split_list(value)) cfg.resolution.push_back(std::stoi(v));
            } else if (key == "extent") {
                cfg.extent.clear();
                for (const auto& v : split_list(value)) cfg.extent.push_back(std::stod(v));
            } else if (key == "diffusivities") {
                cfg.diffusivities.clear();
                for (const auto& v : split_list(value)) cfg.diffusivities.push_back(std::stod(v));
            } else if (key == "t_end") cfg.t_end = std::stod(value);
            else if (key == "dt_init") cfg.dt_init = std::stod(value);
            else if (key == "dt_min") cfg.dt_min = std::stod(value);
            else if (key == "dt_max") cfg.dt_max = std::stod(value);
            else if (key == "snapshot_stride") cfg.snapshot_stride = std::stod(value);
            else if (key == "amplitude") cfg.amplitude = std::stod(value);
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "out") cfg.out_dir = value;
            else if (key == "budget") cfg.budget = std::stoull(value);
            else if (key == "u_max") cfg.u_max = std::stod(value);
            else if (key == "k_scale") cfg.k_scale = std::stod(value);
            else if (key == "plots") cfg.plots = (value == "1" || value == "true");
            else if (key == "write_fields") cfg.write_fields = (value == "1" || value == "true");
            else if (key == "sweep_configs") cfg.sweep_configs = split_list(value);
            else throw fail("unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw fail("bad value for '" + key + "'");
        } catch (const std::out_of_range&) {
            throw fail("value out of range for '" + key + "'");
        }
    }
    if (cfg.command.empty()) throw ParseError("config: missing command");
    return cfg;
}

RunConfig read_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "rdlab-config 1\n";
    out << "command = " << cfg.command << "\n";
    out << "network = " << cfg.network << "\n";
    out << "resolution = ";
    for (std::size_t i = 0; i < cfg.resolution.size(); ++i)
        out << (i ? "," : "") << cfg.resolution[i];
    out << "\n";
    out << "extent = ";
    for (std::size_t i = 0; i < cfg.extent.size(); ++i)
        out << (i ? "," : "") << fmt17(cfg.extent[i]);
    out << "\n";
    if (!cfg.diffusivities.empty()) {
        out << "diffusivities = ";
        for (std::size_t i = 0; i < cfg.diffusivities.size(); ++i)
            out << (i ? "," : "") << fmt17(cfg.diffusivities[i]);
        out << "\n";
    }
    out << "t_end = " << fmt17(cfg.t_end) << "\n";
    out << "dt_init = " << fmt17(cfg.dt_init) << "\n";
    out << "dt_min = " << fmt17(cfg.dt_min) << "\n";
    out << "dt_max = " << fmt17(cfg.dt_max) << "\n";
    out << "snapshot_stride = " << fmt17(cfg.snapshot_stride) << "\n";
    out << "amplitude = " << fmt17(cfg.amplitude) << "\n";
    out << "seed = " << cfg.seed << "\n";
    if (!cfg.out_dir.empty()) out << "out = " << cfg.out_dir << "\n";
    out << "budget = " << cfg.budget << "\n";
    out << "u_max = " << fmt17(cfg.u_max) << "\n";
    out << "k_scale = " << fmt17(cfg.k_scale) << "\n";
    out << "plots = " << (cfg.plots ? 1 : 0) << "\n";
    out << "write_fields = " << (cfg.write_fields ? 1 : 0) << "\n";
    if (!cfg.sweep_configs.empty())
        out << "sweep_configs = " << join_list(cfg.sweep_configs) << "\n";
    return out.str();
}

ReactionNetwork load_network(const std::string& source) {
    if (auto net = builtin_network(source)) return *net;
    return read_network_file(source);
}

Grid make_grid(const RunConfig& cfg) {
    if (cfg.resolution.empty())
        throw std::invalid_argument("config: resolution must name at least one axis");
    std::vector<GridAxis> axes;
    for (std::size_t a = 0; a < cfg.resolution.size(); ++a) {
        const double length = a < cfg.extent.size() ? cfg.extent[a]
                                                    : cfg.extent.empty() ? 1.0
                                                                         : cfg.extent.back();
        axes.push_back(GridAxis{length, cfg.resolution[a]});
    }
    return Grid(std::move(axes));
}

std::vector<Field> bump_initial_data(const Grid& grid, std::size_t species,
                                     double amplitude) {
    static constexpr double kFloor[4] = {0.30, 0.25, 0.35, 0.30};
    static constexpr double kAmp[4] = {1.5, 0.8, 1.2, 0.6};
    std::vector<Field> data;
    for (std::size_t i = 0; i < species; ++i) {
        const double floor_i = kFloor[i % 4];
        const double amp_i = amplitude * kAmp[i % 4];
        data.push_back(Field::sample(grid, [&](std::span<const double> x) {
            double bump = 1.0;
            for (int a = 0; a < grid.dim(); ++a) {
                const double c = 0.5 * (1.0 + std::cos(std::numbers::pi * x[a] /
                                                       grid.length(a)));
                bump *= c * c;
            }
            return floor_i + amp_i * bump;
        }));
    }
    return data;
}

SolverConfig make_solver_config(const RunConfig& cfg, const ReactionNetwork& net) {
    SolverConfig sc;
    sc.network = net;
    sc.grid = make_grid(cfg);
    sc.diffusivities = cfg.diffusivities.empty()
                           ? std::vector<double>(net.species_count(), 1.0)
                           : cfg.diffusivities;
    sc.initial_data = bump_initial_data(sc.grid, net.species_count(), cfg.amplitude);
    sc.t_end = cfg.t_end;
    sc.dt_init = cfg.dt_init;
    sc.dt_min = cfg.dt_min;
    sc.dt_max = cfg.dt_max;
    sc.snapshot_stride = cfg.snapshot_stride;
    return sc;
}

void write_diagnostics_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write diagnostics: " + path);
    out << "time,mass,entropy";
    for (std::size_t i = 0; i < traj.diffusivities.size(); ++i)
        out << ",u" << (i + 1) << "_c0,u" << (i + 1) << "_c1";
    out << ",min_value\n";
    for (const DiagnosticRecord& r : traj.diagnostics) {
        out << fmt17(r.time) << "," << fmt17(r.mass) << "," << fmt17(r.entropy);
        for (const NormTriple& n : r.species_norms)
            out << "," << fmt17(n.c0) << "," << fmt17(n.c1);
        out << "," << fmt17(r.min_value) << "\n";
    }
    if (!out) throw IoError("failed writing diagnostics: " + path);
}

namespace {

json check_to_json(const CheckResult& c) {
    json j;
    j["holds"] = c.holds;
    j["margin"] = c.margin;
    j["worst_value"] = c.worst_value;
    j["tolerance"] = c.tolerance;
    j["witness"] = c.witness;
    return j;
}

json growth_to_json(const GrowthCheckResult& c) {
    json j;
    j["holds"] = c.holds;
    j["fitted_constant"] = c.fitted_constant;
    j["margin"] = c.margin;
    j["unbounded_direction"] = c.unbounded_direction;
    j["witness"] = c.witness;
    return j;
}

json margin_to_json(const MarginReport& m) {
    json j;
    j["worst_margin"] = m.worst_margin;
    j["tolerance"] = m.tolerance;
    j["global_worst"] = m.global_worst;
    j["sign_allowance"] = m.sign_allowance;
    j["violating_fraction"] = m.violating_fraction;
    j["passed"] = m.passed();
    return j;
}

json grid_to_json(const Grid& g) {
    json j;
    j["dim"] = g.dim();
    std::vector<int> pts;
    std::vector<double> ext;
    for (int a = 0; a < g.dim(); ++a) {
        pts.push_back(g.points(a));
        ext.push_back(g.length(a));
    }
    j["points"] = pts;
    j["extent"] = ext;
    return j;
}

void emit_plots(const Trajectory& traj, const std::string& dir) {
    std::vector<double> ts, mass, entropy, sup;
    for (const auto& r : traj.diagnostics) {
        ts.push_back(r.time);
        mass.push_back(r.mass);
        entropy.push_back(r.entropy);
        double s = 0.0;
        for (const auto& n : r.species_norms) s = std::max(s, n.c0);
        sup.push_back(s);
    }
    write_svg_plot(dir + "/mass.svg", "total mass", "t", "mass",
                   {PlotSeries{"mass", ts, mass}});
    write_svg_plot(dir + "/entropy.svg", "entropy functional", "t", "entropy",
                   {PlotSeries{"entropy", ts, entropy}});
    write_svg_plot(dir + "/sup_norm.svg", "sup norm", "t", "max_i ||u_i||_inf",
                   {PlotSeries{"sup", ts, sup}});
}

struct SimArtifacts {
    SimulationResult result;
    double mass_drift_rel = 0.0;
    double u_sup = 0.0;
    double wall_seconds = 0.0;
};

SimArtifacts execute_simulation(const RunConfig& cfg, const ReactionNetwork& net) {
    SimArtifacts art;
    const auto t0 = std::chrono::steady_clock::now();
    art.result = simulate(make_solver_config(cfg, net));
    art.wall_seconds = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - t0).count();

    const auto& diag = art.result.trajectory.diagnostics;
    if (!diag.empty()) {
        const double m0 = diag.front().mass;
        for (const auto& r : diag) {
            art.mass_drift_rel = std::max(art.mass_drift_rel,
                                          std::abs(r.mass - m0) / std::abs(m0));
            for (const auto& n : r.species_norms)
                art.u_sup = std::max(art.u_sup, n.c0);
        }
    }
    return art;
}

json simulation_summary(const RunConfig& cfg, const SimArtifacts& art) {
    const Trajectory& traj = art.result.trajectory;
    json j;
    j["command"] = cfg.command;
    j["network"] = traj.network_name;
    j["grid"] = grid_to_json(traj.grid);
    j["domain"] = "neumann-box";
    double d_max = 0.0;
    for (double d : traj.diffusivities) d_max = std::max(d_max, d);
    double min_extent = traj.grid.length(0);
    for (int a = 0; a < traj.grid.dim(); ++a)
        min_extent = std::min(min_extent, traj.grid.length(a));
    j["box_over_diffusion_length"] = min_extent / std::sqrt(d_max * traj.t_end);
    j["diffusivities"] = traj.diffusivities;
    j["t_end"] = traj.t_end;
    j["seed"] = cfg.seed;
    j["status"] = art.result.completed() ? "completed" : "blowup-suspected";
    j["message"] = art.result.message;
    j["snapshots"] = traj.times.size();
    j["steps_accepted"] = art.result.steps_accepted;
    j["steps_rejected"] = art.result.steps_rejected;
    if (!traj.diagnostics.empty()) {
        const auto& last = traj.diagnostics.back();
        j["final_mass"] = last.mass;
        j["final_entropy"] = last.entropy;
        j["final_min_value"] = last.min_value;
    }
    j["mass_drift_rel"] = art.mass_drift_rel;
    j["u_sup"] = art.u_sup;
    j["wall_seconds"] = art.wall_seconds;
    return j;
}

void write_simulation_outputs(const RunConfig& cfg, const SimArtifacts& art) {
    if (cfg.out_dir.empty()) return;
    ensure_dir(cfg.out_dir);
    const Trajectory& traj = art.result.trajectory;
    write_diagnostics_csv(traj, cfg.out_dir + "/diagnostics.csv");
    write_text(cfg.out_dir + "/summary.json", simulation_summary(cfg, art).dump(2) + "\n");
    if (cfg.plots) emit_plots(traj, cfg.out_dir);
    if (cfg.write_fields && !traj.states.empty()) {
        for (std::size_t i = 0; i < traj.states.front().size(); ++i) {
            write_field_csv(traj.states.front()[i],
                            cfg.out_dir + "/u" + std::to_string(i + 1) + "_initial.csv");
            write_field_csv(traj.states.back()[i],
                            cfg.out_dir + "/u" + std::to_string(i + 1) + "_final.csv");
        }
    }
}

} // namespace

int run_check(const RunConfig& cfg, std::ostream& log) {
    const ReactionNetwork net = load_network(cfg.network);
    SearchOptions opts;
    opts.budget = cfg.budget;
    opts.u_max = cfg.u_max;
    opts.seed = cfg.seed;
    const StructureReport rep = run_structure_checks(net, opts);

    const auto row = [&](const char* name, bool holds, double margin,
                         const std::string& extra) {
        log << "  " << name;
        for (std::size_t pad = std::string(name).size(); pad < 22; ++pad) log << ' ';
        log << (holds ? "holds    " : "VIOLATED ") << "margin " << margin;
        if (!extra.empty()) log << "  " << extra;
        log << "\n";
    };
    log << "network " << net.name() << " (m = " << net.species_count()
        << ", declared M = " << net.growth_constant() << ")\n";
    row("quasi_positivity", rep.quasi_positivity.holds, rep.quasi_positivity.margin, "");
    row("mass_dissipation", rep.mass_dissipation.holds, rep.mass_dissipation.margin, "");
    row("mass_conservation", rep.mass_conservation.holds, rep.mass_conservation.margin, "");
    row("entropy_dissipation", rep.entropy_dissipation.holds,
        rep.entropy_dissipation.margin, "");
    row("gradient_growth", rep.gradient_growth.holds, rep.gradient_growth.margin,
        "fitted M = " + std::to_string(rep.gradient_growth.fitted_constant));
    row("relaxed_growth", rep.relaxed_growth.holds, rep.relaxed_growth.margin,
        "fitted M = " + std::to_string(rep.relaxed_growth.fitted_constant));
    log << "  scaled_entropy_fit    C = " << rep.scaled_entropy_fit
        << " (informational)\n";
    log << (rep.global_existence_conditions_hold() ? "structure: all required conditions hold\n"
                                          : "structure: required condition violated\n");

    if (!cfg.out_dir.empty()) {
        ensure_dir(cfg.out_dir);
        json j;
        j["network"] = net.name();
        j["species"] = net.species_count();
        j["declared_growth_constant"] = net.growth_constant();
        j["budget"] = cfg.budget;
        j["u_max"] = cfg.u_max;
        j["seed"] = cfg.seed;
        j["quasi_positivity"] = check_to_json(rep.quasi_positivity);
        j["mass_dissipation"] = check_to_json(rep.mass_dissipation);
        j["mass_conservation"] = check_to_json(rep.mass_conservation);
        j["entropy_dissipation"] = check_to_json(rep.entropy_dissipation);
        j["gradient_growth"] = growth_to_json(rep.gradient_growth);
        j["relaxed_growth"] = growth_to_json(rep.relaxed_growth);
        j["scaled_entropy_fit"] = rep.scaled_entropy_fit;
        j["required_conditions_hold"] = rep.global_existence_conditions_hold();
        write_text(cfg.out_dir + "/structure_report.json", j.dump(2) + "\n");
    }
    return rep.global_existence_conditions_hold() ? exit_ok : exit_condition_failure;
}

int run_simulate(const RunConfig& cfg, std::ostream& log) {
    const ReactionNetwork net = load_network(cfg.network);
    const SimArtifacts art = execute_simulation(cfg, net);
    write_simulation_outputs(cfg, art);

    log << "simulate " << net.name() << ": " <<
        (art.result.completed() ? "completed" : art.result.message) << "\n";
    log << "  snapshots " << art.result.trajectory.times.size()
        << ", steps " << art.result.steps_accepted
        << " (+" << art.result.steps_rejected << " rejected)\n";
    log << "  mass drift (rel) " << art.mass_drift_rel
        << ", sup norm " << art.u_sup << "\n";
    return art.result.completed() ? exit_ok : exit_blowup;
}

int run_verify_proof(const RunConfig& cfg, std::ostream& log) {
    const ReactionNetwork net = load_network(cfg.network);
    const SimArtifacts art = execute_simulation(cfg, net);
    write_simulation_outputs(cfg, art);
    if (!art.result.completed()) {
        log << "verify-proof: simulation did not complete: " << art.result.message << "\n";
        return exit_blowup;
    }

    const ProofDiagnostics diag =
        run_proof_harness(art.result.trajectory, net, cfg.k_scale);

    const auto line = [&](const char* name, const MarginReport& m) {
        log << "  " << name;
        for (std::size_t pad = std::string(name).size(); pad < 22; ++pad) log << ' ';
        log << (m.passed() ? "ok  " : "FAIL") << "  worst " << m.worst_margin
            << "  tol " << m.tolerance << "\n";
    };
    log << "entropy rate K = " << diag.entropy_rate << " (scale " << cfg.k_scale
        << "), C1 = " << diag.c1 << ", d_aux = " << diag.d_aux << "\n";
    line("entropy_residual", diag.entropy_residual);
    line("phi_sup_bound", diag.aux_bounds.phi_sup_bound);
    line("w_elimination", diag.aux_bounds.w_elimination);
    line("z_linear_bound", diag.aux_bounds.z_linear_bound);
    line("z_nonnegative", diag.aux_bounds.z_nonnegative);
    log << "  feedback ratio max " << diag.feedback.max_ratio
        << ", closing ratio " << diag.feedback.closing_ratio << "\n";

    if (!cfg.out_dir.empty()) {
        ensure_dir(cfg.out_dir);
        json j;
        j["network"] = net.name();
        j["grid"] = grid_to_json(art.result.trajectory.grid);
        j["entropy_rate"] = diag.entropy_rate;
        j["rate_scale"] = cfg.k_scale;
        j["c1"] = diag.c1;
        j["d_aux"] = diag.d_aux;
        j["margins"]["entropy_residual"] = margin_to_json(diag.entropy_residual);
        j["margins"]["phi_sup_bound"] = margin_to_json(diag.aux_bounds.phi_sup_bound);
        j["margins"]["w_elimination"] = margin_to_json(diag.aux_bounds.w_elimination);
        j["margins"]["z_linear_bound"] = margin_to_json(diag.aux_bounds.z_linear_bound);
        j["margins"]["z_nonnegative"] = margin_to_json(diag.aux_bounds.z_nonnegative);
        j["feedback"]["species_ratios"] = diag.feedback.species_ratios;
        j["feedback"]["max_ratio"] = diag.feedback.max_ratio;
        j["feedback"]["closing_ratio"] = diag.feedback.closing_ratio;
        j["feedback"]["u_sup"] = diag.feedback.u_sup;
        j["passed"] = diag.passed();
        write_text(cfg.out_dir + "/proof_report.json", j.dump(2) + "\n");
    }
    return diag.passed() ? exit_ok : exit_condition_failure;
}

int run_verify_lemma2(const RunConfig& cfg, std::ostream& log) {
    const int n_base = cfg.resolution.at(0);
    const Grid base = Grid::line(n_base, cfg.extent.at(0));
    const Grid dbl = Grid::line(2 * n_base, cfg.extent.at(0));
    const std::vector<double> amplitudes = {1.0, 10.0, 100.0};
    const std::vector<double> diffs = {0.1, 1.0, 10.0};
    const std::vector<double> horizons = {0.1, 1.0};

    // The test family is versioned, not seed-dependent.
    const FamilySweepResult fb =
        run_family_verification(base, amplitudes, diffs, horizons);
    const FamilySweepResult fd =
        run_family_verification(dbl, amplitudes, diffs, horizons);

    const auto rel = [](double a, double b) {
        return std::abs(a - b) / std::max(std::abs(a), 1e-300);
    };
    const double agree_c1 = rel(fb.max_c1_constant, fd.max_c1_constant);
    const double agree_c2 = rel(fb.max_c2_constant, fd.max_c2_constant);
    const double agree_c2c = rel(fb.max_c2_composed_constant, fd.max_c2_composed_constant);

    // Forcing-only amplitude sweep on the u0 == 0 members.
    double amp_lo = std::numeric_limits<double>::infinity(), amp_hi = 0.0;
    const auto family = standard_family();
    for (int member = 0; member < 2; ++member) {
        for (double amp : amplitudes) {
            const std::size_t samples = 65;
            const std::vector<Field> g =
                synthesize_member_source(base, family[member], 1.0, samples, amp);
            const InterpBoundReport rep =
                verify_interpolation_bounds(Field(base), g, 1.0, 1.0);
            amp_lo = std::min(amp_lo, rep.c1_constant);
            amp_hi = std::max(amp_hi, rep.c1_constant);
        }
    }
    const double amp_variation = amp_hi / amp_lo;

    std::vector<double> times;
    for (int i = 0; i <= 16; ++i)
        times.push_back(1e-4 * std::pow(1e4, static_cast<double>(i) / 16.0));
    const SmoothingTable table =
        estimate_smoothing_constants(base, 1.0, times, smoothing_family(base));
    const double band = table.max_ratio() / table.min_ratio();

    Field u0 = synthesize_member_field(base, family[2].u0_modes);
    const std::vector<Field> g = synthesize_member_source(base, family[2], 1.0, 65, 1.0);
    const ShiftIdentityReport shifts =
        shift_invariance_check(u0, g, 1.0, 1.0, {0.25, 1.0, 4.0});

    const bool ok = fb.all_finite && fd.all_finite && agree_c1 <= 0.25 &&
                    agree_c2 <= 0.25 && agree_c2c <= 0.25 && amp_variation < 2.0 &&
                    band <= 3.0 && table.c1_preservation <= 1.0 + 1e-9 &&
                    shifts.max_disagreement <= 1e-8 && shifts.max_kernel_error <= 1e-6;

    log << "interpolation constants (" << fb.cases << " cases, N = " << n_base
        << "): C1 " << fb.max_c1_constant << ", C2 " << fb.max_c2_constant
        << ", C2-composed " << fb.max_c2_composed_constant << "\n";
    log << "  double-resolution agreement: " << agree_c1 << " / " << agree_c2
        << " / " << agree_c2c << " (need <= 0.25)\n";
    log << "  forcing amplitude variation " << amp_variation << " (need < 2)\n";
    log << "  smoothing band " << band << " (need <= 3), C1 preservation "
        << table.c1_preservation << "\n";
    log << "  shift disagreement " << shifts.max_disagreement << ", kernel error "
        << shifts.max_kernel_error << "\n";
    log << (ok ? "lemma2 verification: ok\n" : "lemma2 verification: FAILED\n");

    if (!cfg.out_dir.empty()) {
        ensure_dir(cfg.out_dir);
        json j;
        j["resolution"] = n_base;
        j["cases"] = fb.cases;
        j["max_c1_constant"] = fb.max_c1_constant;
        j["max_c2_constant"] = fb.max_c2_constant;
        j["max_c2_composed_constant"] = fb.max_c2_composed_constant;
        j["double_resolution"]["max_c1_constant"] = fd.max_c1_constant;
        j["double_resolution"]["max_c2_constant"] = fd.max_c2_constant;
        j["double_resolution"]["max_c2_composed_constant"] = fd.max_c2_composed_constant;
        j["agreement"] = {agree_c1, agree_c2, agree_c2c};
        j["amplitude_variation"] = amp_variation;
        j["smoothing"]["times"] = table.times;
        j["smoothing"]["ratio"] = table.smoothing_ratio;
        j["smoothing"]["band"] = band;
        j["smoothing"]["c1_preservation"] = table.c1_preservation;
        j["shift"]["disagreement"] = shifts.disagreement;
        j["shift"]["kernel_values"] = shifts.kernel_values;
        j["shift"]["max_kernel_error"] = shifts.max_kernel_error;
        j["passed"] = ok;
        write_text(cfg.out_dir + "/lemma2_report.json", j.dump(2) + "\n");
    }
    return ok ? exit_ok : exit_condition_failure;
}

int run_sweep(const RunConfig& cfg, std::ostream& log) {
    struct Row {
        std::string path;
        std::string command;
        int exit_code = 0;
        std::string metrics_mass_drift = "";
        std::string metrics_u_sup = "";
        std::string log_text;
    };

    const auto run_one = [&](std::size_t idx, const std::string& path) -> Row {
        Row row;
        row.path = path;
        std::ostringstream local;
        try {
            RunConfig sub = read_config_file(path);
            if (sub.command == "sweep")
                throw ParseError("sweep configs may not nest sweeps");
            if (sub.out_dir.empty() && !cfg.out_dir.empty())
                sub.out_dir = cfg.out_dir + "/run_" + std::to_string(idx);
            row.command = sub.command;
            row.exit_code = run_command(sub, local);
            if (!sub.out_dir.empty() &&
                fs::exists(sub.out_dir + "/summary.json")) {
                std::ifstream in(sub.out_dir + "/summary.json");
                json j = json::parse(in, nullptr, false);
                if (!j.is_discarded()) {
                    if (j.contains("mass_drift_rel"))
                        row.metrics_mass_drift = fmt17(j["mass_drift_rel"].get<double>());
                    if (j.contains("u_sup"))
                        row.metrics_u_sup = fmt17(j["u_sup"].get<double>());
                }
            }
        } catch (const ParseError& e) {
            row.exit_code = exit_config_error;
            local << "error: " << e.what() << "\n";
        } catch (const IoError& e) {
            row.exit_code = exit_io_error;
            local << "error: " << e.what() << "\n";
        }
        row.log_text = local.str();
        return row;
    };

    std::vector<std::future<Row>> futures;
    for (std::size_t i = 0; i < cfg.sweep_configs.size(); ++i)
        futures.push_back(std::async(std::launch::async, run_one, i, cfg.sweep_configs[i]));

    std::ostringstream table;
    table << "index,config,command,exit_code,mass_drift_rel,u_sup\n";
    for (std::size_t i = 0; i < futures.size(); ++i) {
        const Row row = futures[i].get();
        table << i << "," << row.path << "," << row.command << "," << row.exit_code
              << "," << row.metrics_mass_drift << "," << row.metrics_u_sup << "\n";
        log << "[run " << i << "] " << row.path << " -> exit " << row.exit_code << "\n";
        log << row.log_text;
    }

    if (!cfg.out_dir.empty()) {
        ensure_dir(cfg.out_dir);
        write_text(cfg.out_dir + "/sweep_results.csv", table.str());
    }
    log << "sweep: " << cfg.sweep_configs.size() << " runs\n";
    return exit_ok;
}

int run_command(const RunConfig& cfg, std::ostream& log) {
    try {
        if (cfg.command == "check") return run_check(cfg, log);
        if (cfg.command == "simulate") return run_simulate(cfg, log);
        if (cfg.command == "verify-proof") return run_verify_proof(cfg, log);
        if (cfg.command == "verify-lemma2") return run_verify_lemma2(cfg, log);
        if (cfg.command == "sweep") return run_sweep(cfg, log);
        log << "error: unknown command '" << cfg.command << "'\n";
        return exit_config_error;
    } catch (const ParseError& e) {
        log << "error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const IoError& e) {
        log << "error: " << e.what() << "\n";
        return exit_io_error;
    }
}

} // namespace rdlab
