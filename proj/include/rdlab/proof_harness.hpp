#pragma once

// Entropy-variable and auxiliary-problem diagnostics along a simulated
// trajectory. The pipeline instantiates, on the trajectory's snapshot
// mesh:
//
//   v_i = (1+u_i) log(1+u_i)          entropy densities
//   w_i = v_i e^{-K t}                damped entropy, K = m^{3/2} M
//   z_i : (d_t - d* Lap) z_i = w_i,   z_i(0) = 0, d* = 1 + max_i d_i
//   phi = sum_i (d_t - d_i Lap) z_i = sum_i w_i + sum_i (d* - d_i) Lap z_i
//
// and checks with explicit margins that the combined heat operator of the
// w_i stays nonpositive, that phi never exceeds its initial supremum C1,
// that w_i is controlled by C1 and the auxiliary diffusion terms, and that
// the z_i stay within the linear-in-time ceiling d* C1 T. All of these are
// exact statements for the continuum system, so their discrete margins
// must shrink toward zero under space-time refinement.

#include "rdlab/grid.hpp"
#include "rdlab/simulator.hpp"

#include <vector>

namespace rdlab {

/// K = m^{3/2} M from the species count and declared growth constant.
double compute_entropy_rate(const ReactionNetwork& net);

struct EntropyFields {
    double rate = 0.0;                  // K
    std::vector<std::vector<Field>> v;  // [time][species]
    std::vector<std::vector<Field>> w;  // [time][species]
};

EntropyFields entropy_variables(const Trajectory& traj, double rate);

struct MarginReport {
    double worst_margin = 0.0;       // value at the most binding sample
    double tolerance = 0.0;          // allowance at that same sample
    double global_worst = 0.0;       // largest raw value anywhere
    double sign_allowance = 0.0;     // cap on global_worst where applicable
    double violating_fraction = 0.0; // share of samples above their allowance
    bool pass = true;
    bool passed() const { return pass; }
};

/// Residual sum_i (d_t w_i - d_i Lap w_i) at interior snapshot times,
/// centered time differences and spectral Laplacians. Nonpositive for the
/// exact solution. The check passes when every sample stays within its
/// local truncation budget (constant calibrated once on an analytic
/// linear-decay run, see calibrate_residual_constant) and the space-time
/// maximum is nonpositive up to a small allowance proportional to the
/// damping scale. An underdamped rate fails the second clause.
MarginReport check_entropy_residual(const Trajectory& traj, const EntropyFields& ef,
                                    double residual_constant);

/// Discrete residual constant from the closed-form decay benchmark
/// f = -u on two species. Deterministic; computed once and reused.
double calibrate_residual_constant();

/// z_i = inhomogeneous heat solve driven by the sampled w_i with zero
/// initial data and diffusivity d_aux.
std::vector<std::vector<Field>> solve_auxiliary(const std::vector<std::vector<Field>>& w,
                                                double d_aux, double t_end);

struct AuxCombination {
    std::vector<Field> phi; // per snapshot
    double c1 = 0.0;        // sup_x sum_i (1+u_{0,i}) log(1+u_{0,i})
};

/// phi = sum_i w_i + sum_i (d_aux - d_i) Lap z_i, assembled without any
/// time differencing, and the maximum-principle ceiling C1 = sup phi(.,0).
AuxCombination compute_aux_combination(const std::vector<std::vector<Field>>& z,
                                       const std::vector<std::vector<Field>>& w,
                                       std::span<const double> diffusivities,
                                       double d_aux,
                                       std::span<const Field> initial_state);

struct AuxBoundsReport {
    double c1 = 0.0;
    double d_aux = 0.0;
    double tolerance = 0.0;       // margin allowance, 1e-6 * C1
    MarginReport phi_sup_bound;   // phi <= C1
    MarginReport w_elimination;   // w_i + sum_j (d_aux - d_j) Lap z_j <= C1
    MarginReport z_linear_bound;  // z_i <= d_aux C1 T
    MarginReport z_nonnegative;   // z_i >= 0
    bool passed() const {
        return phi_sup_bound.passed() && w_elimination.passed() &&
               z_linear_bound.passed() && z_nonnegative.passed();
    }
};

AuxBoundsReport verify_auxiliary_bounds(const std::vector<std::vector<Field>>& z,
                                        const std::vector<std::vector<Field>>& w,
                                        const std::vector<Field>& phi, double c1,
                                        std::span<const double> diffusivities,
                                        double d_aux, double t_end);

struct FeedbackReport {
    /// Per-species ||w_i||_{0,T} / (1 + ||w_i||_{1,T}^{2/3}) and its max.
    std::vector<double> species_ratios;
    double max_ratio = 0.0;
    /// log(1 + ||u||_{0,T}) / log(2 + ||u||_{0,T})^{2/3}, the closing
    /// quantity of the sup-norm feedback chain. Recorded, not thresholded.
    double closing_ratio = 0.0;
    double u_sup = 0.0;
};

FeedbackReport verify_norm_feedback(const Trajectory& traj,
                                    const std::vector<std::vector<Field>>& w);

/// Everything above in one pass over a completed trajectory.
struct ProofDiagnostics {
    double entropy_rate = 0.0; // K
    double d_aux = 0.0;
    double c1 = 0.0;
    EntropyFields entropy;
    std::vector<std::vector<Field>> z;
    std::vector<Field> phi;
    MarginReport entropy_residual;
    AuxBoundsReport aux_bounds;
    FeedbackReport feedback;

    bool passed() const { return entropy_residual.passed() && aux_bounds.passed(); }
};

/// `rate_scale` rescales K (diagnostic use); 1.0 is the structural value.
ProofDiagnostics run_proof_harness(const Trajectory& traj, const ReactionNetwork& net,
                                   double rate_scale = 1.0);

} // namespace rdlab
