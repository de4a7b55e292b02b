#pragma once

// Reaction networks as polynomial vector fields f : R_+^m -> R^m, plus
// mechanical checks of the structural hypotheses used by the dissipative
// theory: quasi-positivity, mass dissipation/conservation, entropy
// dissipation, and the (at most quadratic) growth conditions on f and
// its Jacobian. Polynomial storage keeps Jacobians exact.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rdlab {

/// One monomial coeff * prod_j u_j^{exponents[j]}.
struct Monomial {
    double coeff = 0.0;
    std::vector<unsigned> exponents;
};

class ReactionNetwork {
public:
    /// terms[i] are the monomials of f_i; growth_constant is the declared
    /// constant M of the gradient growth condition |grad f_i| <= M(1+|u|).
    ReactionNetwork(std::string name, std::size_t species_count,
                    std::vector<std::vector<Monomial>> terms,
                    double growth_constant);

    /// Mass-action kinetics: rate_r * prod_j u_j^{reactants[r][j]} feeding
    /// each species with net stoichiometry products - reactants.
    static ReactionNetwork mass_action(std::string name,
                                       const std::vector<std::vector<unsigned>>& reactants,
                                       const std::vector<std::vector<unsigned>>& products,
                                       const std::vector<double>& rates,
                                       double growth_constant);

    const std::string& name() const { return name_; }
    std::size_t species_count() const { return species_; }
    double growth_constant() const { return growth_constant_; }
    const std::vector<std::vector<Monomial>>& terms() const { return terms_; }

    /// f(u) for componentwise nonnegative u (validated).
    std::vector<double> eval(std::span<const double> u) const;
    /// Unvalidated polynomial evaluation, defined for any real u. Used by
    /// integrator stages that may momentarily leave the nonnegative cone.
    void eval_raw(std::span<const double> u, std::span<double> out) const;

    /// Exact Jacobian J[i][j] = d f_i / d u_j at u.
    std::vector<std::vector<double>> jacobian(std::span<const double> u) const;

private:
    std::string name_;
    std::size_t species_ = 0;
    std::vector<std::vector<Monomial>> terms_;
    double growth_constant_ = 0.0;
};

/// The reversible pair reaction A1 + A3 <-> A2 + A4 at unit rates:
/// f_i(u) = (-1)^i (u1 u3 - u2 u4), declared growth constant 1.
ReactionNetwork four_species();
/// four_species with an extra irreversible loss -u1 u3 on species 1, so
/// the total reaction sum is -u1 u3 < 0 on the open cone. Strictly mass
/// dissipative; entropy dissipation does not survive the extra term.
ReactionNetwork four_species_sink();
/// Independent linear decay f_i = -u_i on m species.
ReactionNetwork linear_decay(std::size_t m = 2);
/// Mass-conserving exchange f = (u2 - u1, u1 - u2).
ReactionNetwork exchange_pair();

/// Built-in lookup by name; nullopt when unknown.
std::optional<ReactionNetwork> builtin_network(const std::string& name);
std::vector<std::string> builtin_network_names();

/// Text description files ("rdlab-network 1"). Round-trips bit-exactly.
ReactionNetwork read_network_file(const std::string& path);
void write_network_file(const ReactionNetwork& net, const std::string& path);
ReactionNetwork parse_network(const std::string& text);
std::string serialize_network(const ReactionNetwork& net);

// --- structural condition checks -------------------------------------

struct SearchOptions {
    /// Approximate total evaluation budget (lattice + random + refinement).
    std::size_t budget = 100000;
    double u_max = 100.0;
    std::uint64_t seed = 20230814;
};

/// Outcome of one sampled condition check. `margin` is the signed slack of
/// the most binding sample: nonnegative means the condition held at every
/// sampled point, strictly negative means `witness` violates it by that
/// amount. `worst_value` is the raw quantity at the witness (e.g. the
/// reaction sum for the mass checks), and re-evaluating the witness must
/// reproduce it exactly.
struct CheckResult {
    bool holds = true;
    double margin = 0.0;
    double worst_value = 0.0;
    std::vector<double> witness;
    double tolerance = 0.0;
};

/// Growth checks additionally report the smallest constant that would make
/// the bound hold over everything sampled. `unbounded_direction` is set
/// when the constant was still growing along the escape ray at the sample
/// horizon (degree too high for the bound).
struct GrowthCheckResult {
    bool holds = true;
    double fitted_constant = 0.0;
    double margin = 0.0;
    std::vector<double> witness;
    bool unbounded_direction = false;
};

/// f_i(u) >= 0 whenever u >= 0 with u_i = 0.
CheckResult check_quasi_positivity(const ReactionNetwork& net, const SearchOptions& opts = {});
/// sum_i f_i(u) <= 0 for u > 0.
CheckResult check_mass_dissipation(const ReactionNetwork& net, const SearchOptions& opts = {});
/// sum_i f_i(u) == 0 for u >= 0.
CheckResult check_mass_conservation(const ReactionNetwork& net, const SearchOptions& opts = {});
/// sum_i f_i(u) log u_i <= 0 for u > 0.
CheckResult check_entropy_dissipation(const ReactionNetwork& net, const SearchOptions& opts = {});
/// |grad f_i(u)|_2 <= M (1 + |u|_2); fits the minimal M over samples.
GrowthCheckResult check_gradient_growth(const ReactionNetwork& net, const SearchOptions& opts = {});
/// |f_i(u)| <= M (1 + |u|^2) together with df_i/du_j >= -M (1 + |u|).
GrowthCheckResult check_relaxed_growth(const ReactionNetwork& net, const SearchOptions& opts = {});

/// Fitted constant C in sum_i f_i(u)(1 + log u_i) <= C sum_i u_i log(1+u_i)
/// over u with every component >= 1. Reported for information only; no
/// pass/fail threshold is attached.
double scaled_entropy_constant(const ReactionNetwork& net, const SearchOptions& opts = {});

/// sum_i f_i(u) log u_i, the entropy production functional.
double entropy_production(const ReactionNetwork& net, std::span<const double> u);

struct StructureReport {
    CheckResult quasi_positivity;
    CheckResult mass_dissipation;
    CheckResult mass_conservation;
    CheckResult entropy_dissipation;
    GrowthCheckResult gradient_growth;
    GrowthCheckResult relaxed_growth;
    double scaled_entropy_fit = 0.0;

    /// The conditions under which solutions stay global: quasi-positivity,
    /// mass dissipation, entropy dissipation, gradient growth.
    bool global_existence_conditions_hold() const {
        return quasi_positivity.holds && mass_dissipation.holds &&
               entropy_dissipation.holds && gradient_growth.holds;
    }
};

StructureReport run_structure_checks(const ReactionNetwork& net, const SearchOptions& opts = {});

} // namespace rdlab
