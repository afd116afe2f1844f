#include "mdplab/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace mdplab {

Vector tv_per_state(const Policy& pi, const Policy& pi_tilde) {
    if (pi.probs.rows() != pi_tilde.probs.rows() || pi.probs.cols() != pi_tilde.probs.cols())
        throw std::invalid_argument("tv_per_state: policy shapes differ");
    Vector tv(pi.probs.rows(), 0.0);
    for (int x = 0; x < pi.probs.rows(); ++x) {
        double dist = 0.0;
        for (int a = 0; a < pi.probs.cols(); ++a)
            dist += std::abs(pi_tilde.probs(x, a) - pi.probs(x, a));
        tv[x] = 0.5 * dist;
    }
    return tv;
}

namespace {

// surrogate, epsilon and tv_mean shared by the discounted bounds; all
// expectations are under the OLD policy's d_gamma.
void fill_discounted_terms(const Mdp& mdp, const Policy& pi, const Policy& pi_tilde,
                           double gamma, BoundReport& report) {
    const DiscountedEval eval_pi = eval_discounted(mdp, pi, gamma);
    const InducedChain chain_pi = induce_chain(mdp, pi);
    const Vector d_pi = occupancy(chain_pi, mdp.initial_dist, gamma).dist;

    report.gamma = gamma;
    report.surrogate = 0.0;
    report.epsilon = 0.0;
    for (int x = 0; x < mdp.n_states; ++x) {
        double g = 0.0;
        for (int a = 0; a < mdp.n_actions; ++a)
            g += pi_tilde.probs(x, a) * eval_pi.adv(x, a);
        report.surrogate += d_pi[x] * g;
        report.epsilon = std::max(report.epsilon, std::abs(g));
    }
    report.tv_mean = dot(d_pi, tv_per_state(pi, pi_tilde));

    const DiscountedEval eval_tilde = eval_discounted(mdp, pi_tilde, gamma);
    report.true_lhs = eval_tilde.eta - eval_pi.eta;
}

} // namespace

BoundReport classical_bound(const Mdp& mdp, const Policy& pi, const Policy& pi_tilde,
                            double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("classical_bound: gamma must lie in [0, 1)");
    BoundReport report;
    fill_discounted_terms(mdp, pi, pi_tilde, gamma, report);
    report.classical_rhs = report.surrogate -
                           2.0 * gamma * report.epsilon / (1.0 - gamma) * report.tv_mean;
    report.slack_classical = report.true_lhs - report.classical_rhs;
    return report;
}

BoundReport refined_bound(const Mdp& mdp, const Policy& pi, const Policy& pi_tilde,
                          double gamma) {
    BoundReport report = classical_bound(mdp, pi, pi_tilde, gamma);
    const InducedChain chain_tilde = induce_chain(mdp, pi_tilde);
    const GroupInverseResult gi = discounted_group_inverse(chain_tilde, mdp.initial_dist, gamma);
    report.tau1_value = tau1(gi.d).value;
    report.refined_rhs =
        report.surrogate - 2.0 * gamma * report.epsilon * report.tau1_value * report.tv_mean;
    report.slack_refined = report.true_lhs - report.refined_rhs;
    return report;
}

BoundReport average_bound(const Mdp& mdp, const Policy& pi, const Policy& pi_tilde) {
    const AverageEval avg_pi = eval_average(mdp, pi);
    const AverageEval avg_tilde = eval_average(mdp, pi_tilde);

    BoundReport report;
    report.average = true;
    report.gamma = 1.0;
    for (int x = 0; x < mdp.n_states; ++x) {
        double g = 0.0;
        for (int a = 0; a < mdp.n_actions; ++a)
            g += pi_tilde.probs(x, a) * avg_pi.adv(x, a);
        report.surrogate += avg_pi.stationary[x] * g;
        report.epsilon = std::max(report.epsilon, std::abs(g));
    }
    report.tv_mean = dot(avg_pi.stationary, tv_per_state(pi, pi_tilde));

    const InducedChain chain_tilde = induce_chain(mdp, pi_tilde);
    const GroupInverseResult gi = group_inverse(chain_tilde.transition, avg_tilde.stationary);
    report.tau1_value = tau1(gi.d).value;
    report.refined_rhs =
        report.surrogate - 2.0 * report.epsilon * report.tau1_value * report.tv_mean;
    report.true_lhs = avg_tilde.eta - avg_pi.eta;
    report.slack_refined = report.true_lhs - report.refined_rhs;
    return report;
}

double perturbation_identity_residual(const Mdp& mdp, const Policy& pi, const Policy& pi_tilde,
                                      double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("perturbation_identity_residual: gamma outside [0, 1)");
    const InducedChain chain_pi = induce_chain(mdp, pi);
    const InducedChain chain_tilde = induce_chain(mdp, pi_tilde);
    const int n = mdp.n_states;

    const Vector d_pi = occupancy(chain_pi, mdp.initial_dist, gamma).dist;
    const Vector d_tilde = occupancy(chain_tilde, mdp.initial_dist, gamma).dist;
    const GroupInverseResult gi = discounted_group_inverse(chain_tilde, mdp.initial_dist, gamma);

    // gamma d_pi^T (P^{pi_tilde} - P^pi) D_tilde
    Vector mid(n, 0.0);
    for (int y = 0; y < n; ++y) {
        double s = 0.0;
        for (int x = 0; x < n; ++x)
            s += d_pi[x] * (chain_tilde.transition(x, y) - chain_pi.transition(x, y));
        mid[y] = s;
    }
    const Vector rhs_row = vec_mat(mid, gi.d);

    double residual = 0.0;
    for (int y = 0; y < n; ++y)
        residual += std::abs((d_tilde[y] - d_pi[y]) - gamma * rhs_row[y]);
    return residual;
}

OccupancyGapChain occupancy_gap_chain(const Mdp& mdp, const Policy& pi, const Policy& pi_tilde,
                                      double gamma) {
    const InducedChain chain_pi = induce_chain(mdp, pi);
    const InducedChain chain_tilde = induce_chain(mdp, pi_tilde);
    const int n = mdp.n_states;

    const Vector d_pi = occupancy(chain_pi, mdp.initial_dist, gamma).dist;
    const Vector d_tilde = occupancy(chain_tilde, mdp.initial_dist, gamma).dist;
    const GroupInverseResult gi = discounted_group_inverse(chain_tilde, mdp.initial_dist, gamma);
    const double tau = tau1(gi.d).value;

    Vector pushed(n, 0.0); // (P^pi - P^{pi_tilde})^T d_pi
    for (int y = 0; y < n; ++y) {
        double s = 0.0;
        for (int x = 0; x < n; ++x)
            s += d_pi[x] * (chain_pi.transition(x, y) - chain_tilde.transition(x, y));
        pushed[y] = s;
    }
    const double tv_mean = dot(d_pi, tv_per_state(pi, pi_tilde));

    OccupancyGapChain chain_report;
    chain_report.occupancy_gap = l1_diff(d_tilde, d_pi);
    chain_report.tau1_term = gamma * tau * l1_norm(pushed);
    chain_report.tv_term = 2.0 * gamma * tau * tv_mean;
    return chain_report;
}

TightnessWitness tightness_witness(const Matrix& p_tilde, double epsilon_mass) {
    if (!p_tilde.square()) throw std::invalid_argument("tightness_witness: matrix not square");
    if (epsilon_mass <= 0.0)
        throw std::invalid_argument("tightness_witness: epsilon_mass must be positive");
    const int n = p_tilde.rows();

    const Vector d_tilde = stationary_distribution(p_tilde);
    const GroupInverseResult gi = group_inverse(p_tilde, d_tilde);
    const ErgodicityCoefficient coeff = tau1(gi.d);

    TightnessWitness witness;
    witness.tau1_value = coeff.value;
    witness.col_from = coeff.row_i;
    witness.col_to = coeff.row_j;

    int best_row = 0;
    for (int x = 1; x < n; ++x)
        if (p_tilde(x, coeff.row_i) > p_tilde(best_row, coeff.row_i)) best_row = x;
    if (p_tilde(best_row, coeff.row_i) < epsilon_mass)
        throw std::invalid_argument(
            "tightness_witness: no row carries epsilon_mass on the argmax column; "
            "shrink epsilon_mass");
    witness.row = best_row;

    witness.p = p_tilde;
    witness.p(best_row, coeff.row_i) -= epsilon_mass;
    witness.p(best_row, coeff.row_j) += epsilon_mass;

    const Vector d = stationary_distribution(witness.p);

    Vector pushed(n, 0.0); // (P - P_tilde)^T d = eps d(x) (e_j - e_i)
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) pushed[y] += d[x] * (witness.p(x, y) - p_tilde(x, y));

    witness.ratio = l1_diff(d, d_tilde) / l1_norm(pushed);
    return witness;
}

} // namespace mdplab
