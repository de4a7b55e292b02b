#include "rdlab/proof_harness.hpp"

#include "rdlab/run_io.hpp"
#include "rdlab/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace rdlab;

namespace {

SolverConfig harness_benchmark(int n, double dt_max, double amplitude = 1.0,
                               double snapshot_stride = 1.0 / 128.0) {
    SolverConfig cfg;
    cfg.network = four_species();
    cfg.diffusivities = {1.0, 10.0, 0.1, 5.0};
    cfg.grid = Grid::line(n, 1.0);
    cfg.initial_data = bump_initial_data(cfg.grid, 4, amplitude);
    cfg.t_end = 1.0;
    cfg.dt_init = dt_max / 4.0;
    cfg.dt_max = dt_max;
    cfg.snapshot_stride = snapshot_stride;
    return cfg;
}

// Spatially constant trajectory u(t) == u0 (reaction equilibrium).
Trajectory constant_trajectory(const Grid& g, const std::vector<double>& u0,
                               const std::vector<double>& diff, std::size_t snaps,
                               double t_end) {
    Trajectory traj;
    traj.grid = g;
    traj.diffusivities = diff;
    traj.network_name = "constant";
    traj.t_end = t_end;
    for (std::size_t j = 0; j < snaps; ++j) {
        traj.times.push_back(t_end * static_cast<double>(j) / (snaps - 1));
        std::vector<Field> state;
        for (double v : u0) state.push_back(Field::constant(g, v));
        traj.states.push_back(std::move(state));
    }
    return traj;
}

} // namespace

TEST_CASE("entropy rate constant") {
    CHECK(compute_entropy_rate(four_species()) == doctest::Approx(8.0).epsilon(1e-15));
    ReactionNetwork m2("m2", 2, {{}, {}}, 3.0);
    CHECK(compute_entropy_rate(m2) ==
          doctest::Approx(2.0 * std::sqrt(2.0) * 3.0).epsilon(1e-15));
    ReactionNetwork z("z", 2, {{}, {}}, 0.0);
    CHECK(compute_entropy_rate(z) == 0.0);
}

TEST_CASE("entropy variables pointwise values") {
    const Grid g = Grid::line(8, 1.0);
    const double K = 2.0;

    Trajectory zero = constant_trajectory(g, {0.0, 0.0}, {1.0, 1.0}, 3, 1.0);
    const EntropyFields ef0 = entropy_variables(zero, K);
    CHECK(ef0.v[1][0].max_abs() == 0.0);
    CHECK(ef0.w[2][1].max_abs() == 0.0);

    // u = e - 1: v = e; at t = 1/K the damping is exactly 1/e.
    const double ue = std::numbers::e - 1.0;
    Trajectory tr = constant_trajectory(g, {ue, ue}, {1.0, 1.0}, 3, 1.0);
    tr.times = {0.0, 1.0 / K, 1.0};
    const EntropyFields ef = entropy_variables(tr, K);
    CHECK(ef.v[0][0][0] == doctest::Approx(std::numbers::e).epsilon(1e-14));
    CHECK(ef.w[1][0][0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("entropy residual at a reaction equilibrium is pure damping") {
    // u == (1,1,1,1): the residual reduces to the centered difference of
    // sum_i v_i e^{-Kt}, i.e. -(8 log 2) sinh(K dt)/dt at each interior time.
    const Grid g = Grid::line(16, 1.0);
    const double K = 8.0;
    const std::size_t snaps = 17;
    Trajectory tr = constant_trajectory(g, {1, 1, 1, 1}, {1, 2, 3, 4}, snaps, 1.0);
    const EntropyFields ef = entropy_variables(tr, K);
    const MarginReport rep = check_entropy_residual(tr, ef, 3.0);

    const double dt = 1.0 / 16.0;
    const double sum_v = 8.0 * std::log(2.0);
    const double t_last_interior = tr.times[snaps - 2];
    const double expect = -sum_v * std::exp(-K * t_last_interior) * std::sinh(K * dt) / dt;
    CHECK(rep.worst_margin == doctest::Approx(expect).epsilon(1e-12));
    // Within (K dt)^2 of the instantaneous rate -K sum_v e^{-Kt}.
    CHECK(rep.worst_margin ==
          doctest::Approx(-K * sum_v * std::exp(-K * t_last_interior))
              .epsilon(0.2 * K * K * dt * dt));
    CHECK(rep.worst_margin < 0.0);
    CHECK(rep.passed());
}

TEST_CASE("entropy residual needs at least three snapshots") {
    const Grid g = Grid::line(8, 1.0);
    Trajectory tr = constant_trajectory(g, {1.0, 1.0}, {1.0, 1.0}, 2, 1.0);
    const EntropyFields ef = entropy_variables(tr, 1.0);
    CHECK_THROWS_AS((void)check_entropy_residual(tr, ef, 1.0), std::invalid_argument);
}

TEST_CASE("auxiliary solve closed forms") {
    const Grid g = Grid::line(16, 1.0);
    const std::size_t snaps = 129;
    const double t_end = 1.0;

    // Zero source: zero solution.
    std::vector<std::vector<Field>> w0(snaps, std::vector<Field>{Field(g)});
    const auto z0 = solve_auxiliary(w0, 2.0, t_end);
    CHECK(z0.back()[0].max_abs() == 0.0);

    // Constant source c: z = c t on the mean mode.
    const double c = 0.8;
    std::vector<std::vector<Field>> wc(snaps, std::vector<Field>{Field::constant(g, c)});
    const auto zc = solve_auxiliary(wc, 2.0, t_end);
    for (std::size_t j = 0; j < snaps; ++j) {
        const double t = t_end * static_cast<double>(j) / (snaps - 1);
        CHECK((zc[j][0] - Field::constant(g, c * t)).max_abs() < 1e-12);
    }

    // Exponentially damped source: the solver integrates the sampled,
    // piecewise-linear reconstruction exactly, so it matches the trapezoid
    // rule to roundoff and the continuum closed form to O(dt^2).
    const double K = 8.0;
    std::vector<std::vector<Field>> we;
    std::vector<double> samples;
    for (std::size_t j = 0; j < snaps; ++j) {
        const double t = t_end * static_cast<double>(j) / (snaps - 1);
        samples.push_back(c * std::exp(-K * t));
        we.push_back({Field::constant(g, samples.back())});
    }
    const auto ze = solve_auxiliary(we, 2.0, t_end);
    double trapezoid = 0.0;
    const double dt = t_end / (snaps - 1);
    for (std::size_t j = 1; j < snaps; ++j) {
        trapezoid += 0.5 * dt * (samples[j - 1] + samples[j]);
        const double closed = c * -std::expm1(-K * static_cast<double>(j) * dt) / K;
        CHECK(ze[j][0][0] == doctest::Approx(trapezoid).epsilon(1e-13));
        CHECK(ze[j][0][0] == doctest::Approx(closed).epsilon(2e-3));
    }

    // Nonnegativity inherited from the source.
    for (const auto& snap : ze) CHECK(snap[0].min() >= -1e-12);
}

TEST_CASE("aux combination ceiling and initial identity") {
    const Grid g = Grid::line(32, 1.0);

    // Constant data (1,1,1,1): C1 = 4 * 2 log 2.
    Trajectory tr = constant_trajectory(g, {1, 1, 1, 1}, {1, 1, 1, 1}, 9, 1.0);
    const EntropyFields ef = entropy_variables(tr, 8.0);
    const auto z = solve_auxiliary(ef.w, 2.0, tr.t_end);
    const auto aux = compute_aux_combination(z, ef.w, tr.diffusivities, 2.0,
                                             tr.states.front());
    CHECK(aux.c1 == doctest::Approx(8.0 * std::log(2.0)).epsilon(1e-14));

    // phi(., 0) equals sum_i w_i(., 0) because z(., 0) = 0.
    Field sum_w0(g);
    for (const Field& w : ef.w.front()) sum_w0 += w;
    CHECK((aux.phi.front() - sum_w0).max_abs() < 1e-10);

    // Equal diffusivities d_i = d0 with d_aux = 1 + d0: the combination
    // collapses to sum_i w_i + sum_i Lap z_i.
    {
        Field expect(g);
        for (const Field& w : ef.w.back()) expect += w;
        for (const Field& zi : z.back()) expect += laplacian(zi);
        CHECK((aux.phi.back() - expect).max_abs() < 1e-10);
    }

    // Small positive constant data: C1 = m (1+eps) log(1+eps).
    const double eps = 1e-3;
    Trajectory small = constant_trajectory(g, {eps, eps, eps, eps}, {1, 1, 1, 1}, 9, 1.0);
    const EntropyFields efs = entropy_variables(small, 8.0);
    const auto zs = solve_auxiliary(efs.w, 2.0, small.t_end);
    const auto auxs = compute_aux_combination(zs, efs.w, small.diffusivities, 2.0,
                                              small.states.front());
    CHECK(auxs.c1 == doctest::Approx(4.0 * (1.0 + eps) * std::log1p(eps)).epsilon(1e-12));
    const auto bounds = verify_auxiliary_bounds(zs, efs.w, auxs.phi, auxs.c1,
                                                small.diffusivities, 2.0, small.t_end);
    CHECK(bounds.passed());
}

TEST_CASE("linear decay pair: all auxiliary bounds hold") {
    SolverConfig cfg;
    cfg.network = linear_decay(2);
    cfg.diffusivities = {1.0, 0.2};
    cfg.grid = Grid::line(64, 1.0);
    cfg.initial_data = bump_initial_data(cfg.grid, 2, 1.0);
    cfg.t_end = 1.0;
    cfg.dt_init = 2.5e-4;
    cfg.dt_max = 1e-3;
    cfg.snapshot_stride = 1.0 / 128.0;
    const SimulationResult res = simulate(cfg);
    REQUIRE(res.completed());
    const ProofDiagnostics diag = run_proof_harness(res.trajectory, cfg.network);
    CHECK(diag.aux_bounds.passed());
    CHECK(diag.entropy_residual.passed());
    CHECK(diag.entropy_residual.worst_margin < 0.0);
}

TEST_CASE("benchmark run: full harness margins") {
    const SimulationResult res = simulate(harness_benchmark(96, 5e-4));
    REQUIRE(res.completed());
    const ProofDiagnostics diag = run_proof_harness(res.trajectory, four_species());

    CHECK(diag.entropy_rate == doctest::Approx(8.0));
    CHECK(diag.c1 > 0.0);
    CHECK(diag.aux_bounds.phi_sup_bound.worst_margin <= 1e-6 * diag.c1);
    CHECK(diag.aux_bounds.w_elimination.worst_margin <= 1e-6 * diag.c1);
    CHECK(diag.aux_bounds.z_linear_bound.worst_margin <= 1e-6 * diag.c1);
    CHECK(diag.aux_bounds.z_nonnegative.worst_margin <= 1e-6 * diag.c1);
    CHECK(diag.entropy_residual.passed());

    // z stays nonnegative and far below its linear ceiling.
    CHECK(diag.aux_bounds.z_linear_bound.worst_margin < 0.0);
    CHECK(diag.aux_bounds.z_nonnegative.worst_margin <= 1e-12);
}

TEST_CASE("feedback ratio across an initial-data amplitude sweep") {
    // The ratio ||w||_{0,T} / (1 + ||w||_{1,T}^{2/3}) grows with amplitude
    // but sublinearly; recorded, not thresholded beyond that.
    std::vector<double> ratios;
    for (double amp : {1.0, 2.0, 4.0}) {
        const SimulationResult res = simulate(harness_benchmark(48, 1e-3, amp));
        REQUIRE(res.completed());
        const EntropyFields ef = entropy_variables(res.trajectory, 8.0);
        ratios.push_back(verify_norm_feedback(res.trajectory, ef.w).max_ratio);
        CHECK(std::isfinite(ratios.back()));
    }
    CHECK(ratios[1] >= ratios[0]);
    CHECK(ratios[2] >= ratios[1]);
    CHECK(ratios[2] < 4.0 * ratios[0]);
    MESSAGE("feedback ratios at amplitudes 1/2/4: ", ratios[0], " ", ratios[1], " ",
            ratios[2]);
}

TEST_CASE("entropy rate sensitivity: quarter rate flips the residual sign") {
    // On a coarse snapshot mesh the centered-difference overshoot of the
    // initial transient must be absorbed by the damping term. At the
    // structural rate K = 8 it is, at every amplitude swept here; at K/4
    // the worst residual turns positive beyond a threshold amplitude,
    // which this test locates and records.
    double threshold = 0.0;
    for (double amp : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        SolverConfig cfg = harness_benchmark(64, 1e-3, amp, 1.0 / 16.0);
        const SimulationResult res = simulate(cfg);
        REQUIRE(res.completed());
        const ProofDiagnostics quarter = run_proof_harness(res.trajectory,
                                                           four_species(), 0.25);
        const ProofDiagnostics full = run_proof_harness(res.trajectory,
                                                        four_species(), 1.0);
        CHECK(full.entropy_residual.global_worst <= 0.0);
        CHECK(full.entropy_residual.passed());
        if (threshold == 0.0 && quarter.entropy_residual.global_worst > 0.0)
            threshold = amp;
    }
    CHECK(threshold > 0.0);
    MESSAGE("quarter-rate residual first turns positive at amplitude ", threshold);
}

TEST_CASE("norm feedback report") {
    const Grid g = Grid::line(16, 1.0);
    Trajectory tr = constant_trajectory(g, {1, 1, 1, 1}, {1, 1, 1, 1}, 5, 1.0);
    const EntropyFields ef = entropy_variables(tr, 8.0);
    const FeedbackReport rep = verify_norm_feedback(tr, ef.w);

    // Constant in space: the C1 sup equals the C0 sup, attained at t = 0.
    const double w0 = 2.0 * std::log(2.0);
    CHECK(rep.max_ratio == doctest::Approx(w0 / (1.0 + std::pow(w0, 2.0 / 3.0)))
                               .epsilon(1e-12));
    CHECK(rep.u_sup == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.closing_ratio ==
          doctest::Approx(std::log(2.0) / std::pow(std::log(3.0), 2.0 / 3.0))
              .epsilon(1e-12));
}
