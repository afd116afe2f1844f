#include "mdplab/improve.hpp"

#include <algorithm>
#include <cmath>

namespace mdplab {

Policy greedy_policy(const DiscountedEval& eval) {
    std::vector<int> actions(eval.adv.rows(), 0);
    for (int x = 0; x < eval.adv.rows(); ++x) {
        int best = 0;
        for (int a = 1; a < eval.adv.cols(); ++a)
            if (eval.adv(x, a) > eval.adv(x, best)) best = a;
        actions[x] = best;
    }
    return Policy::deterministic(actions, eval.adv.cols());
}

std::vector<double> default_alpha_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 20; ++i) grid.push_back(i * 0.05);
    return grid;
}

ImprovementStep line_search(const Mdp& mdp, const Policy& pi, double gamma,
                            const std::vector<double>& alpha_grid) {
    if (alpha_grid.empty() || std::find(alpha_grid.begin(), alpha_grid.end(), 0.0) ==
                                  alpha_grid.end())
        throw std::invalid_argument("line_search: alpha grid must contain 0");

    const DiscountedEval eval_pi = eval_discounted(mdp, pi, gamma);

    ImprovementStep step;
    step.candidate = greedy_policy(eval_pi);

    {
        const InducedChain chain_pi = induce_chain(mdp, pi);
        const Vector d_pi = occupancy(chain_pi, mdp.initial_dist, gamma).dist;
        for (int x = 0; x < mdp.n_states; ++x) {
            double g = 0.0;
            for (int a = 0; a < mdp.n_actions; ++a)
                g += step.candidate.probs(x, a) * eval_pi.adv(x, a);
            step.surrogate_full_step += d_pi[x] * g;
        }
    }

    double best_refined = -std::numeric_limits<double>::infinity();
    double best_classical = -std::numeric_limits<double>::infinity();
    const BoundReport* chosen = nullptr;

    for (double alpha : alpha_grid) {
        const Policy pi_alpha = mix(pi, step.candidate, alpha);
        BoundReport report;
        try {
            report = refined_bound(mdp, pi, pi_alpha, gamma);
        } catch (const NotUnichainError&) {
            step.skipped_alphas.push_back(alpha);
            continue;
        }
        step.grid.emplace_back(alpha, report);
        if (report.refined_rhs > best_refined) {
            best_refined = report.refined_rhs;
            step.alpha = alpha;
        }
        best_classical = std::max(best_classical, report.classical_rhs);
    }

    if (step.grid.empty())
        throw NotUnichainError("line_search: refined bound unavailable at every alpha "
                               "(discounted chain not unichain under this mu)");
    for (const auto& [alpha, report] : step.grid)
        if (alpha == step.alpha) chosen = &report;
    for (const auto& [alpha, report] : step.grid)
        if (report.classical_rhs == best_classical) {
            step.best_alpha_classical = alpha;
            break;
        }

    step.certified_gain_refined = chosen->refined_rhs;
    step.certified_gain_classical = chosen->classical_rhs;
    step.realized_gain = chosen->true_lhs;
    return step;
}

ImprovementTrajectory improve_loop(const Mdp& mdp, Policy pi, double gamma, int max_iterations,
                                   double surrogate_tol) {
    ImprovementTrajectory trajectory;
    trajectory.eta_trajectory.push_back(eval_discounted(mdp, pi, gamma).eta);

    const std::vector<double> grid = default_alpha_grid();
    for (int it = 0; it < max_iterations; ++it) {
        ImprovementStep step = line_search(mdp, pi, gamma, grid);
        const bool done = step.surrogate_full_step <= surrogate_tol;
        if (done) {
            trajectory.converged = true;
            trajectory.steps.push_back(std::move(step));
            break;
        }
        pi = mix(pi, step.candidate, step.alpha);
        trajectory.eta_trajectory.push_back(eval_discounted(mdp, pi, gamma).eta);
        trajectory.steps.push_back(std::move(step));
    }
    trajectory.final_policy = pi;
    return trajectory;
}

} // namespace mdplab
