// Command-line front end: exact policy evaluation, policy improvement bound
// comparisons, Garnet batch sweeps and the certified improvement loop.
//
// Exit status: 0 on success, 1 when a mathematical contract (slack or
// residual) is violated, 2 on input or usage errors.

#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "mdplab/bounds.hpp"
#include "mdplab/improve.hpp"
#include "mdplab/io.hpp"
#include "mdplab/sweep.hpp"

namespace {

using nlohmann::json;
using namespace mdplab;

constexpr int kExitOk = 0;
constexpr int kExitContractViolation = 1;
constexpr int kExitUsage = 2;

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file: " + out_path);
    out << text;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json bound_report_to_json(const BoundReport& report) {
    json doc;
    doc["objective"] = report.average ? "average" : "discounted";
    if (!report.average) doc["gamma"] = report.gamma;
    doc["surrogate"] = report.surrogate;
    doc["epsilon"] = report.epsilon;
    doc["tv_mean"] = report.tv_mean;
    doc["tau1"] = report.tau1_value;
    doc["classical_rhs"] = report.classical_rhs;
    doc["refined_rhs"] = report.refined_rhs;
    doc["true_lhs"] = report.true_lhs;
    doc["slack_classical"] = report.slack_classical;
    doc["slack_refined"] = report.slack_refined;
    return doc;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

int run_eval(const std::string& mdp_file, const std::string& policy_file,
             std::optional<double> gamma, const std::string& out_path) {
    const Mdp mdp = load_mdp(mdp_file);
    const Policy policy = load_policy(policy_file);
    policy.validate_for(mdp);

    const ReachabilityReport diag = validate_reachability(mdp, policy);
    json doc;
    doc["diagnostics"] = {{"unichain", diag.unichain},
                          {"irreducible", diag.irreducible},
                          {"aperiodic", diag.aperiodic},
                          {"period", diag.period},
                          {"n_reachable", diag.reachable.size()},
                          {"n_recurrent_classes", diag.recurrent_classes.size()}};

    if (gamma) {
        const DiscountedEval eval = eval_discounted(mdp, policy, *gamma);
        const auto occ = occupancy(induce_chain(mdp, policy), mdp.initial_dist, *gamma);
        if (!occ.unreachable.empty())
            std::cerr << "warning: " << occ.unreachable.size()
                      << " state(s) unreachable from support(mu); d_gamma gives them mass 0\n";
        doc["discounted"] = {{"gamma", eval.gamma},
                             {"eta", eval.eta},
                             {"v", eval.v},
                             {"q", matrix_to_json(eval.q)},
                             {"advantage", matrix_to_json(eval.adv)},
                             {"occupancy", occ.dist},
                             {"bellman_residual", eval.bellman_residual},
                             {"advantage_mean_residual", eval.adv_mean_residual}};
    }

    if (diag.unichain) {
        const AverageEval eval = eval_average(mdp, policy);
        doc["average"] = {{"eta", eval.eta},
                          {"v", eval.v},
                          {"q", matrix_to_json(eval.q)},
                          {"advantage", matrix_to_json(eval.adv)},
                          {"stationary", eval.stationary},
                          {"poisson_residual", eval.poisson_residual},
                          {"normalization_residual", eval.normalization_residual},
                          {"advantage_mean_residual", eval.adv_mean_residual},
                          {"group_inverse_route", eval.used_group_inverse}};
    } else {
        doc["average"] = nullptr;
        std::cerr << "note: induced chain is not unichain; average evaluation skipped\n";
    }

    write_output(doc.dump(2) + "\n", out_path);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------------

int run_bounds(const std::string& mdp_file, const std::string& pi_file,
               const std::string& pi_tilde_file, const std::vector<double>& gamma_list,
               const std::string& format, const std::string& out_path, double tolerance) {
    const Mdp mdp = load_mdp(mdp_file);
    const Policy pi = load_policy(pi_file);
    const Policy pi_tilde = load_policy(pi_tilde_file);
    pi.validate_for(mdp);
    pi_tilde.validate_for(mdp);
    for (double gamma : gamma_list)
        if (!(gamma >= 0.0 && gamma < 1.0))
            throw ValidationError("gamma must lie in [0, 1)");

    std::vector<BoundReport> reports;
    for (double gamma : gamma_list)
        reports.push_back(refined_bound(mdp, pi, pi_tilde, gamma));
    try {
        reports.push_back(average_bound(mdp, pi, pi_tilde));
    } catch (const NotUnichainError& e) {
        std::cerr << "note: average-reward record skipped: " << e.what() << "\n";
    }

    bool violated = false;
    for (const auto& report : reports) {
        if (!std::isnan(report.slack_classical) && report.slack_classical < -tolerance)
            violated = true;
        if (report.slack_refined < -tolerance) violated = true;
        if (!report.average && report.refined_rhs < report.classical_rhs - tolerance)
            violated = true;
    }

    if (format == "csv") {
        std::string text = bound_csv_header();
        for (const auto& report : reports) text += bound_report_to_csv(report);
        write_output(text, out_path);
    } else {
        json doc = json::array();
        for (const auto& report : reports) doc.push_back(bound_report_to_json(report));
        write_output(doc.dump(2) + "\n", out_path);
    }

    if (violated) {
        std::cerr << "error: bound slack below -" << tolerance
                  << " (a proved inequality failed numerically)\n";
        return kExitContractViolation;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

std::vector<std::uint64_t> parse_seed_spec(const std::string& spec) {
    std::vector<std::uint64_t> seeds;
    const auto range_pos = spec.find("..");
    try {
        if (range_pos != std::string::npos) {
            const std::uint64_t lo = std::stoull(spec.substr(0, range_pos));
            const std::uint64_t hi = std::stoull(spec.substr(range_pos + 2));
            if (hi < lo) throw ValidationError("--seeds: empty range");
            for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
            return seeds;
        }
        size_t start = 0;
        while (start < spec.size()) {
            const size_t comma = spec.find(',', start);
            const std::string token =
                spec.substr(start, comma == std::string::npos ? spec.npos : comma - start);
            if (!token.empty()) seeds.push_back(std::stoull(token));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    } catch (const std::logic_error&) {
        throw ValidationError("--seeds: expected 'lo..hi' or a comma-separated list");
    }
    if (seeds.empty()) throw ValidationError("--seeds: no seeds given");
    return seeds;
}

int run_sweep_cmd(const std::string& config_file, const std::string& seed_spec,
                  std::optional<int> ell_cap, std::optional<double> tolerance,
                  const std::string& out_path) {
    SweepConfig config = load_sweep_config(config_file);
    if (!seed_spec.empty()) config.seeds = parse_seed_spec(seed_spec);
    if (ell_cap) config.ell_cap = *ell_cap;
    if (tolerance) config.slack_tolerance = *tolerance;

    const SweepResult result = run_sweep(config);
    write_output(sweep_records_to_csv(result.records), out_path);
    std::cerr << sweep_summary_to_text(result.summary);
    std::cerr << "elapsed_seconds: " << result.summary.elapsed_seconds << "\n";

    if (result.summary.violations > 0 || result.summary.residual_failures > 0) {
        std::cerr << "error: sweep found " << result.summary.violations
                  << " slack violation(s) and " << result.summary.residual_failures
                  << " residual failure(s)\n";
        return kExitContractViolation;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

int run_gen(int n_states, int n_actions, int branching, double sparsity, std::uint64_t seed,
            const std::string& prefix) {
    const Mdp mdp = garnet(n_states, n_actions, branching, sparsity, seed);
    DeterministicRng rng(seed ^ 0x5DEECE66DULL);
    Policy pi, pi_tilde;
    pi.probs = Matrix(n_states, n_actions);
    pi_tilde.probs = Matrix(n_states, n_actions);
    for (int x = 0; x < n_states; ++x) {
        Vector row = rng.simplex(n_actions);
        for (int a = 0; a < n_actions; ++a) pi.probs(x, a) = row[a];
        row = rng.simplex(n_actions);
        for (int a = 0; a < n_actions; ++a) pi_tilde.probs(x, a) = row[a];
    }
    save_mdp(mdp, prefix + ".mdp.json");
    save_policy(pi, prefix + ".pi.json");
    save_policy(pi_tilde, prefix + ".pi_tilde.json");
    std::cerr << "wrote " << prefix << ".mdp.json, " << prefix << ".pi.json, " << prefix
              << ".pi_tilde.json\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// improve
// ---------------------------------------------------------------------------

int run_improve(const std::string& mdp_file, const std::string& pi_file, double gamma,
                int iterations, const std::vector<double>& gamma_sweep,
                const std::string& format, const std::string& out_path) {
    const Mdp mdp = load_mdp(mdp_file);
    const Policy pi = load_policy(pi_file);
    pi.validate_for(mdp);
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ValidationError("gamma must lie in [0, 1)");
    if (iterations < 1) throw ValidationError("--iterations must be positive");

    const ImprovementTrajectory trajectory = improve_loop(mdp, pi, gamma, iterations);

    // certified step size per gamma, from the initial policy
    std::vector<std::pair<double, double>> alpha_by_gamma;
    for (double g : gamma_sweep) {
        const ImprovementStep step = line_search(mdp, pi, g, default_alpha_grid());
        alpha_by_gamma.emplace_back(g, step.alpha);
    }

    if (format == "csv") {
        std::string text = "series,x,y\n";
        for (size_t i = 0; i < trajectory.eta_trajectory.size(); ++i)
            text += "eta," + std::to_string(i) + "," +
                    format_number(trajectory.eta_trajectory[i]) + "\n";
        for (const auto& [g, alpha] : alpha_by_gamma)
            text += "alpha," + format_number(g) + "," + format_number(alpha) + "\n";
        write_output(text, out_path);
    } else {
        json doc;
        doc["gamma"] = gamma;
        doc["converged"] = trajectory.converged;
        doc["eta_trajectory"] = trajectory.eta_trajectory;
        json steps = json::array();
        for (const auto& step : trajectory.steps)
            steps.push_back({{"alpha", step.alpha},
                             {"certified_gain_classical", step.certified_gain_classical},
                             {"certified_gain_refined", step.certified_gain_refined},
                             {"realized_gain", step.realized_gain},
                             {"surrogate_full_step", step.surrogate_full_step},
                             {"best_alpha_classical", step.best_alpha_classical}});
        doc["steps"] = std::move(steps);
        if (!alpha_by_gamma.empty()) {
            json sweep = json::array();
            for (const auto& [g, alpha] : alpha_by_gamma)
                sweep.push_back({{"gamma", g}, {"alpha", alpha}});
            doc["certified_alpha_by_gamma"] = std::move(sweep);
        }
        doc["final_policy"] = matrix_to_json(trajectory.final_policy.probs);
        write_output(doc.dump(2) + "\n", out_path);
    }

    for (const auto& step : trajectory.steps) {
        if (step.realized_gain < step.certified_gain_refined - 1e-9 ||
            step.realized_gain < step.certified_gain_classical - 1e-9) {
            std::cerr << "error: a certified gain exceeded the realized gain\n";
            return kExitContractViolation;
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact evaluation and policy improvement bounds for finite MDPs"};
    app.require_subcommand(1);

    std::string mdp_file, policy_file, pi_tilde_file, config_file;
    std::string out_path, format = "report", seed_spec;
    std::optional<double> gamma_opt;
    double gamma = 0.99, tolerance = 1e-9;
    std::optional<double> tolerance_opt;
    std::optional<int> ell_cap_opt;
    int iterations = 20;
    std::vector<double> gamma_list, gamma_sweep;

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a policy on an MDP");
    eval_cmd->add_option("mdp", mdp_file, "MDP file")->required();
    eval_cmd->add_option("policy", policy_file, "policy file")->required();
    double eval_gamma = -1.0;
    auto* eval_gamma_opt =
        eval_cmd->add_option("--gamma", eval_gamma, "discount factor in [0,1)");
    eval_cmd->add_option("--out", out_path, "write the report here instead of stdout");

    auto* bounds_cmd = app.add_subcommand("bounds", "compare policy improvement bounds");
    bounds_cmd->add_option("mdp", mdp_file, "MDP file")->required();
    bounds_cmd->add_option("pi", policy_file, "old policy file")->required();
    bounds_cmd->add_option("pi_tilde", pi_tilde_file, "new policy file")->required();
    bounds_cmd->add_option("--gamma-list", gamma_list, "discount factors")
        ->required()
        ->delimiter(',');
    bounds_cmd->add_option("--format", format, "csv or report")
        ->check(CLI::IsMember({"csv", "report"}));
    bounds_cmd->add_option("--out", out_path, "output file (default stdout)");
    bounds_cmd->add_option("--tolerance", tolerance, "slack tolerance (default 1e-9)");

    auto* sweep_cmd = app.add_subcommand("sweep", "run a Garnet batch from a config file");
    sweep_cmd->add_option("config", config_file, "sweep config (JSON)")->required();
    sweep_cmd->add_option("--seeds", seed_spec, "override seeds: 'lo..hi' or comma list");
    sweep_cmd->add_option("--ell-cap", ell_cap_opt, "minorization power-search cap");
    sweep_cmd->add_option("--tolerance", tolerance_opt, "slack tolerance override");
    sweep_cmd->add_option("--out", out_path, "records CSV file (default stdout)");

    int gen_states = 6, gen_actions = 3, gen_branching = 2;
    double gen_sparsity = 0.0;
    std::uint64_t gen_seed = 0;
    std::string gen_prefix = "instance";
    auto* gen_cmd =
        app.add_subcommand("gen", "write a Garnet MDP and two random policies to files");
    gen_cmd->add_option("--states", gen_states, "number of states (default 6)");
    gen_cmd->add_option("--actions", gen_actions, "number of actions (default 3)");
    gen_cmd->add_option("--branching", gen_branching, "successors per (state, action)");
    gen_cmd->add_option("--sparsity", gen_sparsity, "probability a reward is zeroed");
    gen_cmd->add_option("--seed", gen_seed, "generator seed (default 0)");
    gen_cmd->add_option("--out-prefix", gen_prefix, "output path prefix (default 'instance')");

    auto* improve_cmd = app.add_subcommand("improve", "certified conservative improvement loop");
    improve_cmd->add_option("mdp", mdp_file, "MDP file")->required();
    improve_cmd->add_option("policy", policy_file, "initial policy file")->required();
    improve_cmd->add_option("--gamma", gamma, "discount factor")->required();
    improve_cmd->add_option("--iterations", iterations, "iteration cap (default 20)");
    improve_cmd->add_option("--gamma-list", gamma_sweep,
                            "also report the certified step size at these gammas")
        ->delimiter(',');
    improve_cmd->add_option("--format", format, "csv or report")
        ->check(CLI::IsMember({"csv", "report"}));
    improve_cmd->add_option("--out", out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (eval_cmd->parsed()) {
            if (eval_gamma_opt->count() > 0) {
                if (!(eval_gamma >= 0.0 && eval_gamma < 1.0))
                    throw ValidationError("--gamma must lie in [0, 1)");
                gamma_opt = eval_gamma;
            }
            return run_eval(mdp_file, policy_file, gamma_opt, out_path);
        }
        if (bounds_cmd->parsed())
            return run_bounds(mdp_file, policy_file, pi_tilde_file, gamma_list, format,
                              out_path, tolerance);
        if (sweep_cmd->parsed())
            return run_sweep_cmd(config_file, seed_spec, ell_cap_opt, tolerance_opt, out_path);
        if (gen_cmd->parsed())
            return run_gen(gen_states, gen_actions, gen_branching, gen_sparsity, gen_seed,
                           gen_prefix);
        if (improve_cmd->parsed())
            return run_improve(mdp_file, policy_file, gamma, iterations, gamma_sweep, format,
                               out_path);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NotUnichainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConsistencyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitContractViolation;
    } catch (const SingularMatrixError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitContractViolation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitContractViolation;
    }
    return kExitUsage;
}
