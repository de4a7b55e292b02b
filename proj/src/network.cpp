#include "rdlab/network.hpp"

#include "rdlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

namespace rdlab {
namespace {

double pow_uint(double x, unsigned e) {
    double r = 1.0;
    while (e > 0) {
        if (e & 1u) r *= x;
        x *= x;
        e >>= 1u;
    }
    return r;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

ReactionNetwork::ReactionNetwork(std::string name, std::size_t species_count,
                                 std::vector<std::vector<Monomial>> terms,
                                 double growth_constant)
    : name_(std::move(name)), species_(species_count), terms_(std::move(terms)),
      growth_constant_(growth_constant) {
    if (species_ < 2)
        throw std::invalid_argument("ReactionNetwork: need at least two species");
    if (terms_.size() != species_)
        throw std::invalid_argument("ReactionNetwork: one term list per species required");
    if (!(growth_constant_ >= 0.0) || !std::isfinite(growth_constant_))
        throw std::invalid_argument("ReactionNetwork: growth constant must be finite and >= 0");
    for (const auto& list : terms_)
        for (const auto& mono : list) {
            if (mono.exponents.size() != species_)
                throw std::invalid_argument("ReactionNetwork: exponent vector length mismatch");
            if (!std::isfinite(mono.coeff))
                throw std::invalid_argument("ReactionNetwork: non-finite coefficient");
        }
}

ReactionNetwork ReactionNetwork::mass_action(std::string name,
                                             const std::vector<std::vector<unsigned>>& reactants,
                                             const std::vector<std::vector<unsigned>>& products,
                                             const std::vector<double>& rates,
                                             double growth_constant) {
    if (reactants.size() != products.size() || reactants.size() != rates.size())
        throw std::invalid_argument("mass_action: reaction list sizes disagree");
    if (reactants.empty())
        throw std::invalid_argument("mass_action: need at least one reaction");
    const std::size_t m = reactants.front().size();
    std::vector<std::vector<Monomial>> terms(m);
    for (std::size_t r = 0; r < reactants.size(); ++r) {
        if (reactants[r].size() != m || products[r].size() != m)
            throw std::invalid_argument("mass_action: stoichiometry length mismatch");
        for (std::size_t i = 0; i < m; ++i) {
            const double net = static_cast<double>(products[r][i]) -
                               static_cast<double>(reactants[r][i]);
            if (net == 0.0) continue;
            terms[i].push_back(Monomial{rates[r] * net, reactants[r]});
        }
    }
    return ReactionNetwork(std::move(name), m, std::move(terms), growth_constant);
}

std::vector<double> ReactionNetwork::eval(std::span<const double> u) const {
    if (u.size() != species_)
        throw std::invalid_argument("eval: state dimension mismatch");
    for (double v : u)
        if (!(v >= 0.0))
            throw std::invalid_argument("eval: state has a negative component");
    std::vector<double> out(species_);
    eval_raw(u, out);
    return out;
}

void ReactionNetwork::eval_raw(std::span<const double> u, std::span<double> out) const {
    for (std::size_t i = 0; i < species_; ++i) {
        double s = 0.0;
        for (const Monomial& mono : terms_[i]) {
            double t = mono.coeff;
            for (std::size_t j = 0; j < species_; ++j)
                if (mono.exponents[j] > 0) t *= pow_uint(u[j], mono.exponents[j]);
            s += t;
        }
        out[i] = s;
    }
}

std::vector<std::vector<double>> ReactionNetwork::jacobian(std::span<const double> u) const {
    if (u.size() != species_)
        throw std::invalid_argument("jacobian: state dimension mismatch");
    std::vector<std::vector<double>> jac(species_, std::vector<double>(species_, 0.0));
    for (std::size_t i = 0; i < species_; ++i)
        for (const Monomial& mono : terms_[i])
            for (std::size_t j = 0; j < species_; ++j) {
                const unsigned ej = mono.exponents[j];
                if (ej == 0) continue;
                double t = mono.coeff * ej * pow_uint(u[j], ej - 1);
                for (std::size_t l = 0; l < species_; ++l)
                    if (l != j && mono.exponents[l] > 0)
                        t *= pow_uint(u[l], mono.exponents[l]);
                jac[i][j] += t;
            }
    return jac;
}

ReactionNetwork four_species() {
    return ReactionNetwork::mass_action("four_species",
                                        {{1, 0, 1, 0}, {0, 1, 0, 1}},
                                        {{0, 1, 0, 1}, {1, 0, 1, 0}},
                                        {1.0, 1.0}, 1.0);
}

ReactionNetwork four_species_sink() {
    ReactionNetwork base = four_species();
    auto terms = base.terms();
    terms[0].push_back(Monomial{-1.0, {1, 0, 1, 0}});
    return ReactionNetwork("four_species_sink", 4, std::move(terms), 2.0);
}

ReactionNetwork linear_decay(std::size_t m) {
    std::vector<std::vector<Monomial>> terms(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<unsigned> e(m, 0);
        e[i] = 1;
        terms[i].push_back(Monomial{-1.0, e});
    }
    return ReactionNetwork("linear_decay", m, std::move(terms), 1.0);
}

ReactionNetwork exchange_pair() {
    std::vector<std::vector<Monomial>> terms(2);
    terms[0] = {Monomial{1.0, {0, 1}}, Monomial{-1.0, {1, 0}}};
    terms[1] = {Monomial{1.0, {1, 0}}, Monomial{-1.0, {0, 1}}};
    return ReactionNetwork("exchange_pair", 2, std::move(terms), std::sqrt(2.0));
}

std::optional<ReactionNetwork> builtin_network(const std::string& name) {
    if (name == "four_species") return four_species();
    if (name == "four_species_sink") return four_species_sink();
    if (name == "linear_decay") return linear_decay();
    if (name == "exchange_pair") return exchange_pair();
    return std::nullopt;
}

std::vector<std::string> builtin_network_names() {
    return {"four_species", "four_species_sink", "linear_decay", "exchange_pair"};
}

// --- description files -------------------------------------------------

std::string serialize_network(const ReactionNetwork& net) {
    std::ostringstream out;
    out << "rdlab-network 1\n";
    out << "name " << net.name() << "\n";
    out << "species " << net.species_count() << "\n";
    out << "growth_constant " << format_double(net.growth_constant()) << "\n";
    for (std::size_t i = 0; i < net.species_count(); ++i)
        for (const Monomial& mono : net.terms()[i]) {
            out << "term " << (i + 1) << " " << format_double(mono.coeff);
            for (unsigned e : mono.exponents) out << " " << e;
            out << "\n";
        }
    return out.str();
}

ReactionNetwork parse_network(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "rdlab-network 1")
        throw ParseError("network file: missing 'rdlab-network 1' header");

    std::string name = "unnamed";
    std::size_t species = 0;
    double growth = -1.0;
    std::vector<std::vector<Monomial>> terms;
    bool have_species = false;

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const auto fail = [&](const std::string& msg) -> ParseError {
            return ParseError("network file line " + std::to_string(lineno) + ": " + msg);
        };
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "name") {
            if (!(ls >> name)) throw fail("expected a name");
        } else if (key == "species") {
            long long n = 0;
            if (!(ls >> n) || n < 2) throw fail("species count must be an integer >= 2");
            species = static_cast<std::size_t>(n);
            terms.assign(species, {});
            have_species = true;
        } else if (key == "growth_constant") {
            if (!(ls >> growth) || !(growth >= 0.0))
                throw fail("growth_constant must be a number >= 0");
        } else if (key == "term") {
            if (!have_species) throw fail("term before species declaration");
            long long idx = 0;
            double coeff = 0.0;
            if (!(ls >> idx >> coeff)) throw fail("expected 'term <species> <coeff> <exponents...>'");
            if (idx < 1 || static_cast<std::size_t>(idx) > species)
                throw fail("species index out of range");
            std::vector<unsigned> exps;
            long long e = 0;
            while (ls >> e) {
                if (e < 0) throw fail("exponents must be >= 0");
                exps.push_back(static_cast<unsigned>(e));
            }
            if (exps.size() != species)
                throw fail("expected one exponent per species");
            terms[static_cast<std::size_t>(idx - 1)].push_back(Monomial{coeff, std::move(exps)});
        } else {
            throw fail("unknown key '" + key + "'");
        }
    }
    if (!have_species) throw ParseError("network file: missing species declaration");
    if (growth < 0.0) throw ParseError("network file: missing growth_constant");
    try {
        return ReactionNetwork(std::move(name), species, std::move(terms), growth);
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("network file: ") + e.what());
    }
}

ReactionNetwork read_network_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open network file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_network(buf.str());
}

void write_network_file(const ReactionNetwork& net, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write network file: " + path);
    out << serialize_network(net);
    if (!out) throw IoError("failed writing network file: " + path);
}

// --- condition checks ---------------------------------------------------

namespace {

// The condition checks minimize a slack functional over sampled states:
// an 8-per-axis logarithmic lattice, uniform random points, and a short
// randomized descent from the worst point found. Everything is driven by
// one seeded generator so reports are reproducible.

struct SearchState {
    double slack = std::numeric_limits<double>::infinity();
    std::vector<double> point;
};

std::vector<double> lattice_values(double u_max, bool include_zero) {
    std::vector<double> vals;
    const int n_pos = include_zero ? 7 : 8;
    const double lo = include_zero ? u_max * 1e-4 : u_max * 1e-6;
    if (include_zero) vals.push_back(0.0);
    for (int k = 0; k < n_pos; ++k)
        vals.push_back(lo * std::pow(u_max / lo, static_cast<double>(k) / (n_pos - 1)));
    return vals;
}

// Enumerate the full lattice up to `cap` points; beyond that, draw random
// lattice combinations instead (still deterministic).
void scan_lattice(const std::vector<double>& vals, std::size_t dims, std::size_t cap,
                  std::mt19937_64& rng,
                  const std::function<void(std::span<const double>)>& visit) {
    const std::size_t k = vals.size();
    double total = std::pow(static_cast<double>(k), static_cast<double>(dims));
    std::vector<double> u(dims);
    if (total <= static_cast<double>(cap)) {
        std::vector<std::size_t> idx(dims, 0);
        while (true) {
            for (std::size_t a = 0; a < dims; ++a) u[a] = vals[idx[a]];
            visit(u);
            std::size_t a = dims;
            while (a > 0) {
                --a;
                if (++idx[a] < k) break;
                idx[a] = 0;
                if (a == 0) return;
            }
        }
    }
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    for (std::size_t s = 0; s < cap; ++s) {
        for (std::size_t a = 0; a < dims; ++a) u[a] = vals[pick(rng)];
        visit(u);
    }
}

void track(SearchState& best, double slack, std::span<const double> u) {
    if (slack < best.slack) {
        best.slack = slack;
        best.point.assign(u.begin(), u.end());
    }
}

// Randomized descent on the slack functional. Coordinates are perturbed
// both multiplicatively and additively so the search can change scale.
void hill_climb(SearchState& best, const std::function<double(std::span<const double>)>& slack,
                int steps, double lo_clip, double hi_clip, std::mt19937_64& rng) {
    if (best.point.empty() || steps <= 0) return;
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> cur = best.point;
    double cur_slack = best.slack;
    double radius = 0.25;
    std::vector<double> cand(cur.size());
    for (int s = 0; s < steps; ++s) {
        for (std::size_t j = 0; j < cur.size(); ++j) {
            double v = cur[j] * std::exp(radius * unit(rng)) + 0.1 * radius * unit(rng);
            cand[j] = std::clamp(v, lo_clip, hi_clip);
        }
        const double cs = slack(cand);
        if (cs < cur_slack) {
            cur = cand;
            cur_slack = cs;
            radius = std::min(radius * 1.4, 4.0);
        } else {
            radius = std::max(radius * 0.7, 1e-4);
        }
    }
    track(best, cur_slack, cur);
}

double check_tolerance(const ReactionNetwork& net, std::span<const double> u) {
    std::vector<double> f(net.species_count());
    net.eval_raw(u, f);
    double fmax = 0.0;
    for (double v : f) fmax = std::max(fmax, std::abs(v));
    return 1e-9 * (1.0 + fmax);
}

struct BudgetSplit {
    std::size_t lattice_cap;
    std::size_t random_count;
    int climb_steps;
};

BudgetSplit split_budget(const SearchOptions& opts) {
    BudgetSplit b;
    b.lattice_cap = std::max<std::size_t>(1, opts.budget / 2);
    b.random_count = std::min<std::size_t>(10000, std::max<std::size_t>(1, opts.budget / 4));
    b.climb_steps = static_cast<int>(std::min<std::size_t>(100, opts.budget / 4));
    return b;
}

CheckResult run_value_check(const ReactionNetwork& net, const SearchOptions& opts,
                            bool positive_domain,
                            const std::function<double(std::span<const double>)>& slack,
                            const std::function<double(std::span<const double>)>& raw_value) {
    const std::size_t m = net.species_count();
    const BudgetSplit b = split_budget(opts);
    std::mt19937_64 rng(opts.seed);
    SearchState best;

    const auto vals = lattice_values(opts.u_max, !positive_domain);
    scan_lattice(vals, m, b.lattice_cap, rng,
                 [&](std::span<const double> u) { track(best, slack(u), u); });

    const double lo = positive_domain ? opts.u_max * 1e-9 : 0.0;
    std::uniform_real_distribution<double> dist(lo, opts.u_max);
    std::vector<double> u(m);
    for (std::size_t s = 0; s < b.random_count; ++s) {
        for (std::size_t j = 0; j < m; ++j) u[j] = dist(rng);
        track(best, slack(u), u);
    }

    hill_climb(best, slack, b.climb_steps, lo, opts.u_max, rng);

    CheckResult res;
    res.margin = best.slack;
    res.witness = best.point;
    res.worst_value = raw_value(best.point);
    res.tolerance = check_tolerance(net, best.point);
    res.holds = best.slack >= -res.tolerance;
    return res;
}

} // namespace

CheckResult check_quasi_positivity(const ReactionNetwork& net, const SearchOptions& opts) {
    const std::size_t m = net.species_count();
    const BudgetSplit b = split_budget(opts);
    std::mt19937_64 rng(opts.seed);

    SearchState best;
    int best_component = 0;
    std::vector<double> f(m);

    const auto vals = lattice_values(opts.u_max, true);
    std::uniform_real_distribution<double> dist(0.0, opts.u_max);

    for (std::size_t pin = 0; pin < m; ++pin) {
        // Sample the face u_pin = 0 and minimize f_pin there.
        const auto face_slack = [&](std::span<const double> u) {
            std::vector<double> full(u.begin(), u.end());
            full.insert(full.begin() + static_cast<long>(pin), 0.0);
            net.eval_raw(full, f);
            return f[pin];
        };
        SearchState face;
        scan_lattice(vals, m - 1, b.lattice_cap / m, rng,
                     [&](std::span<const double> u) { track(face, face_slack(u), u); });
        std::vector<double> u(m - 1);
        for (std::size_t s = 0; s < b.random_count / m; ++s) {
            for (auto& v : u) v = dist(rng);
            track(face, face_slack(u), u);
        }
        hill_climb(face, face_slack, b.climb_steps, 0.0, opts.u_max, rng);
        if (face.slack < best.slack) {
            best.slack = face.slack;
            best.point = face.point;
            best.point.insert(best.point.begin() + static_cast<long>(pin), 0.0);
            best_component = static_cast<int>(pin);
        }
    }

    CheckResult res;
    res.margin = best.slack;
    res.witness = best.point;
    net.eval_raw(best.point, f);
    res.worst_value = f[static_cast<std::size_t>(best_component)];
    res.tolerance = check_tolerance(net, best.point);
    res.holds = best.slack >= -res.tolerance;
    return res;
}

CheckResult check_mass_dissipation(const ReactionNetwork& net, const SearchOptions& opts) {
    std::vector<double> f(net.species_count());
    const auto sum_f = [&](std::span<const double> u) {
        net.eval_raw(u, f);
        double s = 0.0;
        for (double v : f) s += v;
        return s;
    };
    return run_value_check(net, opts, /*positive_domain=*/true,
                           [&](std::span<const double> u) { return -sum_f(u); },
                           sum_f);
}

CheckResult check_mass_conservation(const ReactionNetwork& net, const SearchOptions& opts) {
    std::vector<double> f(net.species_count());
    const auto sum_f = [&](std::span<const double> u) {
        net.eval_raw(u, f);
        double s = 0.0;
        for (double v : f) s += v;
        return s;
    };
    return run_value_check(net, opts, /*positive_domain=*/false,
                           [&](std::span<const double> u) { return -std::abs(sum_f(u)); },
                           sum_f);
}

double entropy_production(const ReactionNetwork& net, std::span<const double> u) {
    std::vector<double> f = net.eval(u);
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * std::log(u[i]);
    return s;
}

CheckResult check_entropy_dissipation(const ReactionNetwork& net, const SearchOptions& opts) {
    std::vector<double> f(net.species_count());
    const auto production = [&](std::span<const double> u) {
        net.eval_raw(u, f);
        double s = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * std::log(u[i]);
        return s;
    };
    return run_value_check(net, opts, /*positive_domain=*/true,
                           [&](std::span<const double> u) { return -production(u); },
                           production);
}

namespace {

// Shared driver for the growth-type checks: maximize a scale-normalized
// ratio over the cone, then follow the worst direction outward to expose
// the asymptotic constant (or its divergence).
GrowthCheckResult run_ratio_check(const ReactionNetwork& net, const SearchOptions& opts,
                                  const std::function<double(std::span<const double>)>& ratio) {
    const std::size_t m = net.species_count();
    const BudgetSplit b = split_budget(opts);
    std::mt19937_64 rng(opts.seed);

    SearchState best; // minimizes -ratio
    const auto neg = [&](std::span<const double> u) { return -ratio(u); };

    const auto vals = lattice_values(opts.u_max, true);
    scan_lattice(vals, m, b.lattice_cap, rng,
                 [&](std::span<const double> u) { track(best, neg(u), u); });
    std::uniform_real_distribution<double> dist(0.0, opts.u_max);
    std::vector<double> u(m);
    for (std::size_t s = 0; s < b.random_count; ++s) {
        for (auto& v : u) v = dist(rng);
        track(best, neg(u), u);
    }
    hill_climb(best, neg, b.climb_steps, 0.0, 10.0 * opts.u_max, rng);

    GrowthCheckResult res;
    res.fitted_constant = -best.slack;
    res.witness = best.point;

    // Ray probe: double the amplitude of the worst point out to ~1e12.
    double norm = 0.0;
    for (double v : best.point) norm += v * v;
    if (norm > 0.0) {
        std::vector<double> scaled(m);
        double prev = res.fitted_constant;
        double scale = 1.0;
        for (int j = 0; j < 41; ++j) {
            scale *= 2.0;
            for (std::size_t a = 0; a < m; ++a) scaled[a] = best.point[a] * scale;
            const double r = ratio(scaled);
            if (!std::isfinite(r)) break;
            if (r > res.fitted_constant) {
                res.fitted_constant = r;
                res.witness = scaled;
            }
            if (j == 40 && r > 1.05 * prev) res.unbounded_direction = true;
            prev = r;
        }
    }

    const double declared = net.growth_constant();
    res.margin = declared * (1.0 + 1e-9) + 1e-12 - res.fitted_constant;
    res.holds = !res.unbounded_direction && res.margin >= 0.0;
    return res;
}

double norm2(std::span<const double> u) {
    double s = 0.0;
    for (double v : u) s += v * v;
    return std::sqrt(s);
}

} // namespace

GrowthCheckResult check_gradient_growth(const ReactionNetwork& net, const SearchOptions& opts) {
    const auto ratio = [&](std::span<const double> u) {
        const auto jac = net.jacobian(u);
        double worst = 0.0;
        for (const auto& row : jac) worst = std::max(worst, norm2(row));
        return worst / (1.0 + norm2(u));
    };
    return run_ratio_check(net, opts, ratio);
}

GrowthCheckResult check_relaxed_growth(const ReactionNetwork& net, const SearchOptions& opts) {
    std::vector<double> f(net.species_count());
    const auto ratio = [&](std::span<const double> u) {
        const double nu = norm2(u);
        net.eval_raw(u, f);
        double value_part = 0.0;
        for (double v : f) value_part = std::max(value_part, std::abs(v));
        value_part /= 1.0 + nu * nu;

        const auto jac = net.jacobian(u);
        double jac_part = 0.0;
        for (const auto& row : jac)
            for (double v : row) jac_part = std::max(jac_part, -v);
        jac_part /= 1.0 + nu;

        return std::max(value_part, jac_part);
    };
    return run_ratio_check(net, opts, ratio);
}

double scaled_entropy_constant(const ReactionNetwork& net, const SearchOptions& opts) {
    const std::size_t m = net.species_count();
    const BudgetSplit b = split_budget(opts);
    std::mt19937_64 rng(opts.seed);
    std::vector<double> f(m);
    const auto ratio = [&](std::span<const double> u) {
        net.eval_raw(u, f);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            num += f[i] * (1.0 + std::log(u[i]));
            den += u[i] * std::log1p(u[i]);
        }
        return num / den;
    };
    const auto neg = [&](std::span<const double> u) { return -ratio(u); };

    SearchState best;
    std::vector<double> vals;
    for (int k = 0; k < 8; ++k)
        vals.push_back(std::pow(opts.u_max, static_cast<double>(k) / 7.0));
    scan_lattice(vals, m, b.lattice_cap, rng,
                 [&](std::span<const double> u) { track(best, neg(u), u); });
    std::uniform_real_distribution<double> dist(1.0, opts.u_max);
    std::vector<double> u(m);
    for (std::size_t s = 0; s < b.random_count; ++s) {
        for (auto& v : u) v = dist(rng);
        track(best, neg(u), u);
    }
    hill_climb(best, neg, b.climb_steps, 1.0, 10.0 * opts.u_max, rng);
    return -best.slack;
}

StructureReport run_structure_checks(const ReactionNetwork& net, const SearchOptions& opts) {
    StructureReport r;
    r.quasi_positivity = check_quasi_positivity(net, opts);
    r.mass_dissipation = check_mass_dissipation(net, opts);
    r.mass_conservation = check_mass_conservation(net, opts);
    r.entropy_dissipation = check_entropy_dissipation(net, opts);
    r.gradient_growth = check_gradient_growth(net, opts);
    r.relaxed_growth = check_relaxed_growth(net, opts);
    r.scaled_entropy_fit = scaled_entropy_constant(net, opts);
    return r;
}

} // namespace rdlab
