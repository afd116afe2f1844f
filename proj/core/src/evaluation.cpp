#include "mdplab/evaluation.hpp"

#include <algorithm>
#include <cmath>

namespace mdplab {

namespace {

// Q(x,a) = r(x,a) - offset + sum_y P(y|x,a) V(y), A = Q - V, plus the
// per-state advantage mean residual under the policy's own distribution.
void fill_q_and_adv(const Mdp& mdp, const Policy& policy, const Vector& v, double lookahead_scale,
                    double offset, Matrix& q, Matrix& adv, double& adv_mean_residual) {
    q = Matrix(mdp.n_states, mdp.n_actions);
    adv = Matrix(mdp.n_states, mdp.n_actions);
    adv_mean_residual = 0.0;
    for (int x = 0; x < mdp.n_states; ++x) {
        double mean = 0.0;
        for (int a = 0; a < mdp.n_actions; ++a) {
            double expect = 0.0;
            const auto row = mdp.transition_row(x, a);
            for (int y = 0; y < mdp.n_states; ++y) expect += row[y] * v[y];
            q(x, a) = mdp.reward(x, a) - offset + lookahead_scale * expect;
            adv(x, a) = q(x, a) - v[x];
            mean += policy.probs(x, a) * adv(x, a);
        }
        adv_mean_residual = std::max(adv_mean_residual, std::abs(mean));
    }
}

} // namespace

DiscountedEval eval_discounted(const Mdp& mdp, const Policy& policy, double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("eval_discounted: gamma must lie in [0, 1)");
    const InducedChain chain = induce_chain(mdp, policy);
    const int n = mdp.n_states;

    Matrix resolvent_system(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            resolvent_system(i, j) = (i == j ? 1.0 : 0.0) - gamma * chain.transition(i, j);

    DiscountedEval eval;
    eval.gamma = gamma;
    eval.v = solve(resolvent_system, chain.reward);
    eval.eta = (1.0 - gamma) * dot(mdp.initial_dist, eval.v);
    fill_q_and_adv(mdp, policy, eval.v, gamma, 0.0, eval.q, eval.adv, eval.adv_mean_residual);

    const Vector pv = mat_vec(chain.transition, eval.v);
    for (int x = 0; x < n; ++x)
        eval.bellman_residual = std::max(
            eval.bellman_residual, std::abs(eval.v[x] - (chain.reward[x] + gamma * pv[x])));
    return eval;
}

AverageEval eval_average(const Mdp& mdp, const Policy& policy) {
    const InducedChain chain = induce_chain(mdp, policy);
    const ReachabilityReport diag = chain_reachability(chain.transition, mdp.initial_dist);
    if (!diag.unichain)
        throw NotUnichainError("eval_average: induced chain has " +
                               std::to_string(diag.recurrent_classes.size()) +
                               " recurrent classes; average evaluation requires exactly one");
    const int n = mdp.n_states;

    AverageEval eval;
    eval.stationary = stationary_distribution(chain.transition);
    eval.eta = dot(eval.stationary, chain.reward);

    if (diag.aperiodic) {
        const GroupInverseResult gi = group_inverse(chain.transition, eval.stationary);
        eval.v = mat_vec(gi.d, chain.reward);
        eval.used_group_inverse = true;
    } else {
        // periodic recurrent class: the series form of the group inverse does
        // not converge, but the Poisson equation with the normalization row
        // d^T V = 0 is still nonsingular
        Matrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = (i == j ? 1.0 : 0.0) - chain.transition(i, j);
        Vector rhs(n);
        for (int i = 0; i < n; ++i) rhs[i] = chain.reward[i] - eval.eta;
        int anchor = 0;
        for (int i = 1; i < n; ++i)
            if (eval.stationary[i] > eval.stationary[anchor]) anchor = i;
        for (int j = 0; j < n; ++j) m(anchor, j) = eval.stationary[j];
        rhs[anchor] = 0.0;
        eval.v = solve(m, rhs);
        eval.used_group_inverse = false;
    }

    eval.normalization_residual = std::abs(dot(eval.stationary, eval.v));
    fill_q_and_adv(mdp, policy, eval.v, 1.0, eval.eta, eval.q, eval.adv, eval.adv_mean_residual);

    const Vector pv = mat_vec(chain.transition, eval.v);
    for (int x = 0; x < n; ++x)
        eval.poisson_residual = std::max(
            eval.poisson_residual, std::abs(eval.v[x] - (chain.reward[x] - eval.eta + pv[x])));
    return eval;
}

std::vector<double> default_gamma_schedule() {
    std::vector<double> schedule;
    for (int k = 1; k <= 6; ++k) schedule.push_back(1.0 - std::pow(10.0, -k));
    return schedule;
}

LimitCheckReport limit_check(const Mdp& mdp, const Policy& policy,
                             const std::vector<double>& gamma_schedule) {
    for (size_t i = 0; i + 1 < gamma_schedule.size(); ++i)
        if (!(gamma_schedule[i] < gamma_schedule[i + 1]))
            throw std::invalid_argument("limit_check: schedule must increase toward 1");

    const AverageEval avg = eval_average(mdp, policy);
    const InducedChain chain = induce_chain(mdp, policy);
    const int n = mdp.n_states;

    LimitCheckReport report;
    for (double gamma : gamma_schedule) {
        // forming V_gamma - eta/(1-gamma) by subtraction loses ~10 digits at
        // gamma = 1-1e-6; the shifted vector W solves the same resolvent
        // system with right-hand side r - eta e and stays O(1), so solve for
        // it directly
        Matrix system(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                system(i, j) = (i == j ? 1.0 : 0.0) - gamma * chain.transition(i, j);
        Vector rhs(n);
        for (int i = 0; i < n; ++i) rhs[i] = chain.reward[i] - avg.eta;
        const Vector w = solve(system, rhs);

        LimitCheckRow row;
        row.gamma = gamma;
        row.eta_gap = (1.0 - gamma) * std::abs(dot(mdp.initial_dist, w));
        for (int x = 0; x < n; ++x)
            row.v_gap = std::max(row.v_gap, std::abs(w[x] - avg.v[x]));
        for (int x = 0; x < n; ++x)
            for (int a = 0; a < mdp.n_actions; ++a) {
                // Q_gamma(x,a) - eta/(1-gamma) = r(x,a) - eta + gamma sum_y P W
                double lookahead = 0.0;
                const auto trow = mdp.transition_row(x, a);
                for (int y = 0; y < n; ++y) lookahead += trow[y] * w[y];
                const double q_shifted = mdp.reward(x, a) - avg.eta + gamma * lookahead;
                row.q_gap = std::max(row.q_gap, std::abs(q_shifted - avg.q(x, a)));
                row.adv_gap =
                    std::max(row.adv_gap, std::abs((q_shifted - w[x]) - avg.adv(x, a)));
            }
        report.rows.push_back(row);
    }

    const size_t tail_start = report.rows.size() / 2;
    for (size_t i = tail_start; i + 1 < report.rows.size(); ++i) {
        const auto& a = report.rows[i];
        const auto& b = report.rows[i + 1];
        // gaps at the cancellation noise floor (V_gamma grows like 1/(1-gamma),
        // so Q - V noise reaches ~1e-10 at gamma = 1-1e-6) do not count as
        // non-monotone
        const double slack = 1e-9;
        if (b.eta_gap > a.eta_gap + slack || b.v_gap > a.v_gap + slack ||
            b.q_gap > a.q_gap + slack || b.adv_gap > a.adv_gap + slack)
            report.tail_monotone = false;
    }
    return report;
}

} // namespace mdplab
