#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mdplab/bounds.hpp"
#include "mdplab/improve.hpp"

namespace mdplab {

/// Batch experiment over Garnet instances: for every seed and every gamma,
/// compute the bound report plus all identity/inequality checks, and one
/// average-reward record per instance where the induced chains allow it.
struct SweepConfig {
    int n_states = 10;
    int n_actions = 3;
    int branching = 3;
    double reward_sparsity = 0.0;
    std::vector<std::uint64_t> seeds;
    std::vector<double> gamma_list{0.5, 0.9, 0.99};
    int ell_cap = 0; // 0: default 2 n^2
    double slack_tolerance = 1e-9;
    bool run_identity_checks = true;
    bool run_ergodicity_bounds = true;
    bool run_average = true;
};

SweepConfig sweep_config_from_json_text(const std::string& text);
SweepConfig load_sweep_config(const std::string& path);

/// The (mdp, pi, pi_tilde) triple is a pure function of the config shape
/// parameters and the seed, so every record is recomputable.
struct SweepInstance {
    Mdp mdp;
    Policy pi;
    Policy pi_tilde;
};

SweepInstance sweep_instance(const SweepConfig& config, std::uint64_t seed);

struct SweepRecord {
    std::uint64_t seed = 0;
    bool average = false;
    BoundReport report;

    // chain diagnostics (pi_tilde's induced chain)
    bool unichain = false;
    bool aperiodic = false;
    bool irreducible = false;

    // identity residuals (discounted records only)
    double stationarity_residual = nan();       // ||d_gamma^T P_gamma - d_gamma^T||_1
    double occupancy_agreement = nan();   // max pairwise l1 across the three methods
    double resolvent_identity_gap = nan();
    double resolvent_tau1_gap = nan();
    double perturbation_residual = nan();
    double gap_chain_slack = nan();       // min slack of the two chain links
    double group_inverse_residual = nan();

    // ergodicity certificates for pi_tilde's chain
    double trace_bound = nan();
    double cardinality_bound = nan();
    double subdominant = nan();
    int minorization_ell = 0; // 0: unavailable
    double minorization_delta = nan();
    double minorization_value = nan();

    static double nan() { return std::numeric_limits<double>::quiet_NaN(); }
};

struct SweepSummary {
    int instances = 0;
    int records = 0;
    int violations = 0;          // slack/dominance/ordering failures beyond tolerance
    int residual_failures = 0;   // identity residuals beyond their thresholds
    int skipped_average = 0;     // instances whose chains were not unichain
    double min_slack = std::numeric_limits<double>::infinity();
    double max_identity_residual = 0.0;
    double max_group_residual = 0.0;
    double elapsed_seconds = 0.0; // reported on stderr only, never serialized
};

struct SweepResult {
    std::vector<SweepRecord> records;
    SweepSummary summary;
};

SweepResult run_sweep(const SweepConfig& config);

/// Shortest decimal representation that round-trips the double exactly.
std::string format_number(double value);

std::string sweep_csv_header();
std::string sweep_record_to_csv(const SweepRecord& record);
std::string sweep_records_to_csv(const std::vector<SweepRecord>& records);
std::string sweep_summary_to_text(const SweepSummary& summary);

std::string bound_csv_header();
std::string bound_report_to_csv(const BoundReport& report);

} // namespace mdplab
