#include "rdlab/simulator.hpp"

#include "rdlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rdlab {

void SolverConfig::validate() const {
    const std::size_t m = network.species_count();
    if (diffusivities.size() != m)
        throw std::invalid_argument("SolverConfig: one diffusivity per species required");
    for (double d : diffusivities)
        if (!(d > 0.0) || !std::isfinite(d))
            throw std::invalid_argument("SolverConfig: diffusivities must be > 0");
    if (initial_data.size() != m)
        throw std::invalid_argument("SolverConfig: one initial field per species required");
    for (const Field& f : initial_data) {
        if (f.grid() != grid)
            throw std::invalid_argument("SolverConfig: initial field grid mismatch");
        if (!f.all_finite() || f.min() < 0.0)
            throw std::invalid_argument("SolverConfig: initial data must be finite and >= 0");
        if (f.max() <= 0.0)
            throw std::invalid_argument("SolverConfig: initial species must not vanish identically");
    }
    if (!(t_end > 0.0))
        throw std::invalid_argument("SolverConfig: t_end must be > 0");
    if (!(dt_min > 0.0) || !(dt_init >= dt_min) || !(dt_max >= dt_init))
        throw std::invalid_argument("SolverConfig: need 0 < dt_min <= dt_init <= dt_max");
    if (!(snapshot_stride > 0.0))
        throw std::invalid_argument("SolverConfig: snapshot_stride must be > 0");
}

namespace {

// Explicit Heun step of u' = f(u), nodewise across species fields.
std::vector<Field> heun_reaction(const std::vector<Field>& state,
                                 const ReactionNetwork& net, double dt) {
    const std::size_t m = state.size();
    const std::size_t nodes = state[0].size();
    std::vector<Field> out(state);
    std::vector<double> u(m), f0(m), up(m), f1(m);
    for (std::size_t j = 0; j < nodes; ++j) {
        for (std::size_t i = 0; i < m; ++i) u[i] = state[i][j];
        net.eval_raw(u, f0);
        for (std::size_t i = 0; i < m; ++i) up[i] = u[i] + dt * f0[i];
        net.eval_raw(up, f1);
        for (std::size_t i = 0; i < m; ++i)
            out[i][j] = u[i] + 0.5 * dt * (f0[i] + f1[i]);
    }
    return out;
}

double sup_norm(const std::vector<Field>& state) {
    double s = 0.0;
    for (const Field& f : state) s = std::max(s, f.max_abs());
    return s;
}

double min_value(const std::vector<Field>& state) {
    double m = state[0].min();
    for (const Field& f : state) m = std::min(m, f.min());
    return m;
}

bool all_finite(const std::vector<Field>& state) {
    return std::all_of(state.begin(), state.end(),
                       [](const Field& f) { return f.all_finite(); });
}

} // namespace

std::vector<Field> step(const std::vector<Field>& state, const ReactionNetwork& net,
                        std::span<const double> diffusivities, double dt) {
    std::vector<Field> half(state.size());
    for (std::size_t i = 0; i < state.size(); ++i)
        half[i] = apply_heat_semigroup(state[i], diffusivities[i], 0.5 * dt);
    std::vector<Field> reacted = heun_reaction(half, net, dt);
    for (std::size_t i = 0; i < reacted.size(); ++i)
        reacted[i] = apply_heat_semigroup(reacted[i], diffusivities[i], 0.5 * dt);
    return reacted;
}

DiagnosticRecord state_diagnostics(std::span<const Field> state) {
    DiagnosticRecord rec;
    rec.min_value = state[0].min();
    const double cell = state[0].grid().cell_volume();
    for (const Field& f : state) {
        double mass = 0.0, entropy = 0.0;
        for (double v : f.values()) {
            mass += v;
            entropy += (1.0 + v) * std::log1p(v);
        }
        rec.mass += cell * mass;
        rec.entropy += cell * entropy;
        rec.min_value = std::min(rec.min_value, f.min());
        rec.species_norms.push_back(norms(f));
    }
    return rec;
}

SimulationResult simulate(const SolverConfig& config) {
    config.validate();

    const std::size_t n_snaps =
        std::max<std::size_t>(1, static_cast<std::size_t>(
            std::llround(config.t_end / config.snapshot_stride)));
    const double stride = config.t_end / static_cast<double>(n_snaps);

    SimulationResult result;
    Trajectory& traj = result.trajectory;
    traj.grid = config.grid;
    traj.diffusivities = config.diffusivities;
    traj.network_name = config.network.name();
    traj.t_end = config.t_end;

    std::vector<Field> state = config.initial_data;
    const auto record = [&](double t) {
        DiagnosticRecord rec = state_diagnostics(state);
        rec.time = t;
        traj.times.push_back(t);
        traj.states.push_back(state);
        traj.diagnostics.push_back(std::move(rec));
    };
    record(0.0);

    double dt = std::min(config.dt_init, stride);
    int accepted_in_row = 0;

    for (std::size_t snap = 1; snap <= n_snaps; ++snap) {
        const double t_target = stride * static_cast<double>(snap);
        double t = stride * static_cast<double>(snap - 1);
        while (t < t_target - 1e-14 * config.t_end) {
            const double dt_try = std::min(dt, t_target - t);
            std::vector<Field> candidate =
                step(state, config.network, config.diffusivities, dt_try);

            const double sup_old = std::max(sup_norm(state), 1e-30);
            const double tol_neg = 1e-12 * sup_old;
            bool ok = all_finite(candidate) && min_value(candidate) >= -tol_neg;
            if (ok) {
                double change = 0.0;
                for (std::size_t i = 0; i < state.size(); ++i)
                    change = std::max(change, (candidate[i] - state[i]).max_abs());
                ok = change <= 0.25 * sup_old;
            }

            if (ok) {
                state = std::move(candidate);
                t += dt_try;
                ++result.steps_accepted;
                if (++accepted_in_row >= 10) {
                    dt = std::min(dt * 1.25, config.dt_max);
                    accepted_in_row = 0;
                }
            } else {
                ++result.steps_rejected;
                accepted_in_row = 0;
                dt *= 0.5;
                if (dt < config.dt_min) {
                    std::ostringstream msg;
                    msg << "step size underflow at t = " << t
                        << " (dt = " << dt << " < dt_min); last valid state retained";
                    result.status = SimulationResult::Status::blowup_suspected;
                    result.message = msg.str();
                    result.final_dt = dt;
                    return result;
                }
            }
        }
        record(t_target);
    }

    result.final_dt = dt;
    return result;
}

} // namespace rdlab
