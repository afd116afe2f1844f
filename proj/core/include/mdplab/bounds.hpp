#pragma once

#include <limits>

#include "mdplab/ergodicity.hpp"
#include "mdplab/evaluation.hpp"

namespace mdplab {

/// Per-state total variation TV(pi_tilde(.|x) || pi(.|x)).
Vector tv_per_state(const Policy& pi, const Policy& pi_tilde);

/// Side-by-side policy improvement bounds for the pair (pi, pi_tilde):
///
///   true_lhs      eta^{pi_tilde} - eta^{pi}
///   surrogate     E_{x~d^pi, a~pi_tilde}[A^pi(x,a)]
///   classical_rhs surrogate - (2 gamma epsilon / (1-gamma)) tv_mean
///   refined_rhs   surrogate - 2 gamma epsilon tau1[D_gamma^{pi_tilde}] tv_mean
///
/// For the average-reward record (average = true) gamma plays no role, the
/// refined penalty uses tau1 of the undiscounted group inverse and there is
/// no classical counterpart (classical fields are NaN).
struct BoundReport {
    double gamma = 0.0;
    bool average = false;
    double surrogate = 0.0;
    double epsilon = 0.0;  // max_x |E_{a~pi_tilde} A^pi(x,a)|
    double tv_mean = 0.0;  // E_{x~d^pi} TV
    double tau1_value = std::numeric_limits<double>::quiet_NaN();
    double classical_rhs = std::numeric_limits<double>::quiet_NaN();
    double refined_rhs = std::numeric_limits<double>::quiet_NaN();
    double true_lhs = 0.0;
    double slack_classical = std::numeric_limits<double>::quiet_NaN();
    double slack_refined = std::numeric_limits<double>::quiet_NaN();
};

/// Shared terms plus the classical right-hand side only.
BoundReport classical_bound(const Mdp& mdp, const Policy& pi, const Policy& pi_tilde,
                            double gamma);

/// Full report: classical and refined right-hand sides, tau1 of the new
/// policy's discounted group inverse, exact left-hand side and slacks.
BoundReport refined_bound(const Mdp& mdp, const Policy& pi, const Policy& pi_tilde,
                          double gamma);

/// Average-reward analogue; requires both induced chains unichain.
BoundReport average_bound(const Mdp& mdp, const Policy& pi, const Policy& pi_tilde);

/// l1 residual of the exact perturbation identity
///   (d_gamma^{pi_tilde})^T - (d_gamma^pi)^T
///     = gamma (d_gamma^pi)^T (P^{pi_tilde} - P^pi) D_gamma^{pi_tilde}.
double perturbation_identity_residual(const Mdp& mdp, const Policy& pi, const Policy& pi_tilde,
                                      double gamma);

/// The three-term chain bounding the occupancy gap:
///   ||d_gamma^{pi_tilde} - d_gamma^pi||_1
///     <= gamma tau1[D_gamma^{pi_tilde}] ||(P^pi - P^{pi_tilde})^T d_gamma^pi||_1
///     <= 2 gamma tau1[D_gamma^{pi_tilde}] tv_mean
struct OccupancyGapChain {
    double occupancy_gap = 0.0;
    double tau1_term = 0.0;
    double tv_term = 0.0;
};

OccupancyGapChain occupancy_gap_chain(const Mdp& mdp, const Policy& pi, const Policy& pi_tilde,
                                      double gamma);

/// Single-row perturbation of p_tilde along the tau1 argmax pair. The exact
/// perturbation identity forces
///   ||d - d_tilde||_1 / ||(P - P_tilde)^T d||_1 = tau1[D_tilde],
/// so the returned ratio realizes tau1 as the smallest condition number of
/// the stationary-distribution map.
struct TightnessWitness {
    Matrix p;
    double ratio = 0.0;
    double tau1_value = 0.0;
    int row = 0;      // perturbed row x
    int col_from = 0; // mass moved away from this column (argmax i)
    int col_to = 0;   // onto this column (argmax j)
};

TightnessWitness tightness_witness(const Matrix& p_tilde, double epsilon_mass);

} // namespace mdplab
