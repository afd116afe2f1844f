#pragma once

#include "mdplab/discounting.hpp"
#include "mdplab/linalg.hpp"
#include "mdplab/mdp.hpp"

namespace mdplab {

/// Exact discounted evaluation of a policy: V = (I - gamma P)^{-1} r,
/// Q(x,a) = r(x,a) + gamma sum_y P(y|x,a) V(y), A = Q - V,
/// eta = (1-gamma) mu^T V.
struct DiscountedEval {
    double gamma = 0.0;
    Vector v;
    Matrix q;
    Matrix adv;
    double eta = 0.0;
    // residual diagnostics
    double bellman_residual = 0.0;  // ||V - (r + gamma P V)||_inf
    double adv_mean_residual = 0.0; // max_x |sum_a pi(a|x) A(x,a)|
};

DiscountedEval eval_discounted(const Mdp& mdp, const Policy& policy, double gamma);

/// Long-run average evaluation: eta = d^T r, V solves the Poisson equation
/// with the normalization d^T V = 0 (the group-inverse bias when the chain
/// is aperiodic, a direct solve with the normalization row otherwise).
struct AverageEval {
    double eta = 0.0;
    Vector v;
    Matrix q;
    Matrix adv;
    Vector stationary;
    bool used_group_inverse = true;
    double poisson_residual = 0.0;       // ||V - (r - eta e + P V)||_inf
    double normalization_residual = 0.0; // |d^T V|
    double adv_mean_residual = 0.0;
};

AverageEval eval_average(const Mdp& mdp, const Policy& policy);

/// Gap between the discounted quantities and their average-reward limits,
/// per gamma of the schedule.
struct LimitCheckRow {
    double gamma = 0.0;
    double eta_gap = 0.0; // |eta_gamma - eta|
    double v_gap = 0.0;   // ||(V_gamma - eta/(1-gamma) e) - V||_inf
    double q_gap = 0.0;
    double adv_gap = 0.0;
};

struct LimitCheckReport {
    std::vector<LimitCheckRow> rows;
    /// All four gap sequences nonincreasing over the second half of the schedule.
    bool tail_monotone = true;
};

LimitCheckReport limit_check(const Mdp& mdp, const Policy& policy,
                             const std::vector<double>& gamma_schedule);

/// 1 - 10^-k for k = 1..6. Beyond k = 6 the subtraction V_gamma - eta/(1-gamma)
/// loses too many digits in double precision to stay meaningful.
std::vector<double> default_gamma_schedule();

} // namespace mdplab
