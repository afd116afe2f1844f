#include "mdplab/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mdplab {

namespace {

using nlohmann::json;

constexpr std::uint64_t kPolicySeedSalt = 0x9E3779B97F4A7C15ULL;

Policy random_policy(DeterministicRng& rng, int n_states, int n_actions) {
    Policy pi;
    pi.probs = Matrix(n_states, n_actions);
    for (int x = 0; x < n_states; ++x) {
        const Vector row = rng.simplex(n_actions);
        for (int a = 0; a < n_actions; ++a) pi.probs(x, a) = row[a];
    }
    return pi;
}

} // namespace

SweepConfig sweep_config_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("sweep config: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("sweep config: top level must be an object");

    SweepConfig config;
    try {
        config.n_states = doc.value("n_states", config.n_states);
        config.n_actions = doc.value("n_actions", config.n_actions);
        config.branching = doc.value("branching", config.branching);
        config.reward_sparsity = doc.value("reward_sparsity", config.reward_sparsity);
        if (doc.contains("seeds")) {
            config.seeds.clear();
            for (const auto& s : doc.at("seeds")) config.seeds.push_back(s.get<std::uint64_t>());
        } else if (doc.contains("n_seeds")) {
            config.seeds.clear();
            const int count = doc.at("n_seeds").get<int>();
            for (int s = 0; s < count; ++s) config.seeds.push_back(s);
        }
        if (doc.contains("gamma_list")) {
            config.gamma_list.clear();
            for (const auto& g : doc.at("gamma_list")) config.gamma_list.push_back(g.get<double>());
        }
        config.ell_cap = doc.value("ell_cap", config.ell_cap);
        config.slack_tolerance = doc.value("slack_tolerance", config.slack_tolerance);
        config.run_identity_checks = doc.value("identity_checks", config.run_identity_checks);
        config.run_ergodicity_bounds = doc.value("ergodicity_bounds", config.run_ergodicity_bounds);
        config.run_average = doc.value("average", config.run_average);
    } catch (const json::exception& e) {
        throw ParseError(std::string("sweep config: ") + e.what());
    }

    if (config.n_states < 1 || config.n_actions < 1)
        throw ParseError("sweep config: n_states and n_actions must be positive");
    if (config.branching < 1 || config.branching > config.n_states)
        throw ParseError("sweep config: branching must be in [1, n_states]");
    for (double gamma : config.gamma_list)
        if (!(gamma >= 0.0 && gamma < 1.0))
            throw ParseError("sweep config: gamma values must lie in [0, 1)");
    return config;
}

SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open sweep config: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return sweep_config_from_json_text(buffer.str());
}

SweepInstance sweep_instance(const SweepConfig& config, std::uint64_t seed) {
    SweepInstance instance;
    instance.mdp = garnet(config.n_states, config.n_actions, config.branching,
                          config.reward_sparsity, seed);
    DeterministicRng rng(seed ^ kPolicySeedSalt);
    instance.pi = random_policy(rng, config.n_states, config.n_actions);
    instance.pi_tilde = random_policy(rng, config.n_states, config.n_actions);
    return instance;
}

namespace {

void fill_identity_checks(const SweepConfig& config, const SweepInstance& instance, double gamma,
                          SweepRecord& record) {
    const InducedChain chain_pi = induce_chain(instance.mdp, instance.pi);
    const InducedChain chain_tilde = induce_chain(instance.mdp, instance.pi_tilde);
    const Vector& mu = instance.mdp.initial_dist;

    const Vector d_gamma = occupancy(chain_pi, mu, gamma).dist;
    const Matrix p_gamma = discounted_transition(chain_pi, mu, gamma).p;
    record.stationarity_residual = l1_diff(vec_mat(d_gamma, p_gamma), d_gamma);

    record.occupancy_agreement = occupancy_consistency(chain_pi, mu, gamma).max_pairwise_l1;

    const ResolventIdentityReport ident = resolvent_identity_check(chain_tilde, mu, gamma);
    record.resolvent_identity_gap = ident.identity_gap;
    record.resolvent_tau1_gap = ident.tau1_gap;

    record.perturbation_residual =
        perturbation_identity_residual(instance.mdp, instance.pi, instance.pi_tilde, gamma);

    const OccupancyGapChain chain =
        occupancy_gap_chain(instance.mdp, instance.pi, instance.pi_tilde, gamma);
    record.gap_chain_slack = std::min(chain.tau1_term - chain.occupancy_gap,
                                      chain.tv_term - chain.tau1_term);

    record.group_inverse_residual =
        discounted_group_inverse(chain_tilde, mu, gamma).max_residual();
    (void)config;
}

void fill_ergodicity_bounds(const SweepConfig& config, const SweepInstance& instance,
                            double gamma, SweepRecord& record) {
    const InducedChain chain_tilde = induce_chain(instance.mdp, instance.pi_tilde);
    const Vector& mu = instance.mdp.initial_dist;

    if (record.unichain) {
        const SpectralBounds spectral = spectral_bounds(chain_tilde, mu, gamma);
        record.trace_bound = spectral.trace_bound;
        record.cardinality_bound = spectral.cardinality_bound;
        record.subdominant = spectral.subdominant;
    }
    if (record.unichain && record.aperiodic && record.irreducible) {
        const int cap = config.ell_cap > 0 ? config.ell_cap
                                           : default_ell_cap(instance.mdp.n_states);
        if (const auto cert = minorization_bound(chain_tilde, mu, gamma, cap)) {
            record.minorization_ell = cert->ell;
            record.minorization_delta = cert->delta;
            record.minorization_value = cert->bound_value;
        }
    }
}

void account(SweepSummary& summary, const SweepConfig& config, const SweepRecord& record) {
    const double tol = config.slack_tolerance;
    auto note_slack = [&](double slack) {
        if (std::isnan(slack)) return;
        summary.min_slack = std::min(summary.min_slack, slack);
        if (slack < -tol) ++summary.violations;
    };
    note_slack(record.report.slack_classical);
    note_slack(record.report.slack_refined);
    if (!record.average) {
        // refinement dominance
        note_slack(record.report.refined_rhs - record.report.classical_rhs);
        note_slack(record.gap_chain_slack);
        if (!std::isnan(record.trace_bound))
            note_slack(record.trace_bound - record.report.tau1_value);
        if (!std::isnan(record.trace_bound) && !std::isnan(record.cardinality_bound))
            note_slack(record.cardinality_bound - record.trace_bound);
        if (!std::isnan(record.minorization_value))
            note_slack(record.minorization_value - record.report.tau1_value);
    }

    auto note_residual = [&](double residual, double threshold) {
        if (std::isnan(residual)) return;
        summary.max_identity_residual = std::max(summary.max_identity_residual, residual);
        if (residual > threshold) ++summary.residual_failures;
    };
    note_residual(record.stationarity_residual, 1e-9);
    note_residual(record.occupancy_agreement, 1e-8);
    note_residual(record.resolvent_identity_gap, 1e-8);
    note_residual(record.resolvent_tau1_gap, 1e-12);
    note_residual(record.perturbation_residual, 1e-9);
    if (!std::isnan(record.group_inverse_residual)) {
        summary.max_group_residual =
            std::max(summary.max_group_residual, record.group_inverse_residual);
        if (record.group_inverse_residual > 1e-8) ++summary.residual_failures;
    }
}

} // namespace

SweepResult run_sweep(const SweepConfig& config) {
    const auto start = std::chrono::steady_clock::now();

    std::vector<std::uint64_t> seeds = config.seeds;
    std::sort(seeds.begin(), seeds.end());
    std::vector<double> gammas = config.gamma_list;
    std::sort(gammas.begin(), gammas.end());

    SweepResult result;
    result.summary.instances = static_cast<int>(seeds.size());

    for (std::uint64_t seed : seeds) {
        const SweepInstance instance = sweep_instance(config, seed);
        const ReachabilityReport diag =
            validate_reachability(instance.mdp, instance.pi_tilde);

        for (double gamma : gammas) {
            SweepRecord record;
            record.seed = seed;
            record.unichain = diag.unichain;
            record.aperiodic = diag.aperiodic;
            record.irreducible = diag.irreducible;
            record.report = refined_bound(instance.mdp, instance.pi, instance.pi_tilde, gamma);
            if (config.run_identity_checks)
                fill_identity_checks(config, instance, gamma, record);
            if (config.run_ergodicity_bounds)
                fill_ergodicity_bounds(config, instance, gamma, record);
            account(result.summary, config, record);
            result.records.push_back(std::move(record));
        }

        if (config.run_average) {
            if (diag.unichain && diag.aperiodic &&
                validate_reachability(instance.mdp, instance.pi).unichain) {
                SweepRecord record;
                record.seed = seed;
                record.average = true;
                record.unichain = diag.unichain;
                record.aperiodic = diag.aperiodic;
                record.irreducible = diag.irreducible;
                record.report = average_bound(instance.mdp, instance.pi, instance.pi_tilde);
                account(result.summary, config, record);
                result.records.push_back(std::move(record));
            } else {
                ++result.summary.skipped_average;
            }
        }
    }

    result.summary.records = static_cast<int>(result.records.size());
    result.summary.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::string format_number(double value) {
    if (std::isnan(value)) return "";
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

namespace {

void append_csv(std::string& out, const std::string& field, bool last = false) {
    out += field;
    out += last ? '\n' : ',';
}

} // namespace

std::string bound_csv_header() {
    return "objective,gamma,surrogate,epsilon,tv_mean,tau1,classical_rhs,refined_rhs,"
           "true_lhs,slack_classical,slack_refined\n";
}

std::string bound_report_to_csv(const BoundReport& report) {
    std::string out;
    append_csv(out, report.average ? "average" : "discounted");
    append_csv(out, report.average ? "" : format_number(report.gamma));
    append_csv(out, format_number(report.surrogate));
    append_csv(out, format_number(report.epsilon));
    append_csv(out, format_number(report.tv_mean));
    append_csv(out, format_number(report.tau1_value));
    append_csv(out, format_number(report.classical_rhs));
    append_csv(out, format_number(report.refined_rhs));
    append_csv(out, format_number(report.true_lhs));
    append_csv(out, format_number(report.slack_classical));
    append_csv(out, format_number(report.slack_refined), true);
    return out;
}

std::string sweep_csv_header() {
    return "seed,objective,gamma,surrogate,epsilon,tv_mean,tau1,classical_rhs,refined_rhs,"
           "true_lhs,slack_classical,slack_refined,stationarity_residual,occupancy_agreement,"
           "resolvent_identity_gap,resolvent_tau1_gap,perturbation_residual,gap_chain_slack,"
           "group_inverse_residual,trace_bound,cardinality_bound,subdominant,"
           "minorization_ell,minorization_delta,minorization_bound,"
           "unichain,aperiodic,irreducible\n";
}

std::string sweep_record_to_csv(const SweepRecord& record) {
    std::string out;
    append_csv(out, std::to_string(record.seed));
    append_csv(out, record.average ? "average" : "discounted");
    append_csv(out, record.average ? "" : format_number(record.report.gamma));
    append_csv(out, format_number(record.report.surrogate));
    append_csv(out, format_number(record.report.epsilon));
    append_csv(out, format_number(record.report.tv_mean));
    append_csv(out, format_number(record.report.tau1_value));
    append_csv(out, format_number(record.report.classical_rhs));
    append_csv(out, format_number(record.report.refined_rhs));
    append_csv(out, format_number(record.report.true_lhs));
    append_csv(out, format_number(record.report.slack_classical));
    append_csv(out, format_number(record.report.slack_refined));
    append_csv(out, format_number(record.stationarity_residual));
    append_csv(out, format_number(record.occupancy_agreement));
    append_csv(out, format_number(record.resolvent_identity_gap));
    append_csv(out, format_number(record.resolvent_tau1_gap));
    append_csv(out, format_number(record.perturbation_residual));
    append_csv(out, format_number(record.gap_chain_slack));
    append_csv(out, format_number(record.group_inverse_residual));
    append_csv(out, format_number(record.trace_bound));
    append_csv(out, format_number(record.cardinality_bound));
    append_csv(out, format_number(record.subdominant));
    append_csv(out, record.minorization_ell > 0 ? std::to_string(record.minorization_ell) : "");
    append_csv(out, format_number(record.minorization_delta));
    append_csv(out, format_number(record.minorization_value));
    append_csv(out, record.unichain ? "1" : "0");
    append_csv(out, record.aperiodic ? "1" : "0");
    append_csv(out, record.irreducible ? "1" : "0", true);
    return out;
}

std::string sweep_records_to_csv(const std::vector<SweepRecord>& records) {
    std::string out = sweep_csv_header();
    for (const auto& record : records) out += sweep_record_to_csv(record);
    return out;
}

std::string sweep_summary_to_text(const SweepSummary& summary) {
    std::ostringstream out;
    out << "instances: " << summary.instances << "\n"
        << "records: " << summary.records << "\n"
        << "violations: " << summary.violations << "\n"
        << "residual_failures: " << summary.residual_failures << "\n"
        << "skipped_average: " << summary.skipped_average << "\n"
        << "min_slack: "
        << (std::isfinite(summary.min_slack) ? format_number(summary.min_slack) : "n/a") << "\n"
        << "max_identity_residual: " << format_number(summary.max_identity_residual) << "\n"
        << "max_group_inverse_residual: " << format_number(summary.max_group_residual) << "\n";
    return out.str();
}

} // namespace mdplab
