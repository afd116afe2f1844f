#pragma once

#include "mdplab/bounds.hpp"

namespace mdplab {

/// One conservative update pi <- (1-alpha) pi + alpha greedy(A^pi), with the
/// step size alpha certified by the policy improvement bounds. Each certified
/// gain is a valid lower bound on the realized gain at the chosen alpha.
///
/// This update rule is one reasonable instantiation of the bounds as a
/// step-size certificate; nothing canonical is claimed for it.
struct ImprovementStep {
    double alpha = 0.0;
    Policy candidate; // greedy target of the mixture
    double certified_gain_classical = 0.0;
    double certified_gain_refined = 0.0;
    double realized_gain = 0.0;
    double surrogate_full_step = 0.0; // greedy surrogate at alpha = 1
    double best_alpha_classical = 0.0;
    /// Grid diagnostics: one report per evaluated alpha.
    std::vector<std::pair<double, BoundReport>> grid;
    std::vector<double> skipped_alphas;
};

/// Deterministic policy choosing argmax_a A(x,a) per state, smallest action
/// index on ties.
Policy greedy_policy(const DiscountedEval& eval);

/// Evaluates both certificates on the alpha grid and picks the alpha whose
/// refined certificate is largest. The grid must contain 0, so the selected
/// certified gain is never negative.
ImprovementStep line_search(const Mdp& mdp, const Policy& pi, double gamma,
                            const std::vector<double>& alpha_grid);

/// 0, 0.05, ..., 1.0
std::vector<double> default_alpha_grid();

/// Iterated line search. Stops when the greedy surrogate falls below
/// `surrogate_tol` or after max_iterations.
struct ImprovementTrajectory {
    std::vector<ImprovementStep> steps;
    std::vector<double> eta_trajectory; // eta_gamma after each accepted step (front: initial)
    Policy final_policy;
    bool converged = false;
};

ImprovementTrajectory improve_loop(const Mdp& mdp, Policy pi, double gamma, int max_iterations,
                                   double surrogate_tol = 1e-10);

} // namespace mdplab
