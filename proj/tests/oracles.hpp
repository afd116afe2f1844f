// Test-only oracles, deliberately independent of the library's computation
// paths: plain loops, truncated series and random sampling only. Anything a
// library routine computes with a solve gets cross-checked here against an
// implementation that never calls one.
#pragma once

#include <cmath>
#include <vector>

#include "mdplab/matrix.hpp"
#include "mdplab/mdp.hpp"

namespace oracles {

using mdplab::DeterministicRng;
using mdplab::Matrix;
using mdplab::Mdp;
using mdplab::Policy;
using mdplab::Vector;

// P^pi by an explicit triple loop over (x, a, y).
inline Matrix induced_transition_bruteforce(const Mdp& mdp, const Policy& pi) {
    Matrix p(mdp.n_states, mdp.n_states);
    for (int x = 0; x < mdp.n_states; ++x)
        for (int a = 0; a < mdp.n_actions; ++a)
            for (int y = 0; y < mdp.n_states; ++y)
                p(x, y) += pi.probs(x, a) * mdp.transition_prob(x, a, y);
    return p;
}

inline Vector vec_times_matrix(const Vector& x, const Matrix& m) {
    Vector y(m.cols(), 0.0);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) y[j] += x[i] * m(i, j);
    return y;
}

// d_gamma^T = (1-gamma) sum_t gamma^t mu^T P^t, matrix-vector products only.
inline Vector occupancy_series(const Matrix& p, const Vector& mu, double gamma, int horizon) {
    Vector current = mu;
    Vector acc = mu;
    double weight = 1.0;
    for (int t = 1; t <= horizon; ++t) {
        current = vec_times_matrix(current, p);
        weight *= gamma;
        for (size_t y = 0; y < acc.size(); ++y) acc[y] += weight * current[y];
    }
    for (double& v : acc) v *= 1.0 - gamma;
    return acc;
}

// eta_gamma = (1-gamma) sum_t gamma^t mu^T P^t r, no linear solves.
inline double discounted_return_series(const Matrix& p, const Vector& r, const Vector& mu,
                                       double gamma, int horizon) {
    Vector current = mu;
    double acc = 0.0;
    double weight = 1.0;
    for (int t = 0; t <= horizon; ++t) {
        double step = 0.0;
        for (size_t x = 0; x < r.size(); ++x) step += current[x] * r[x];
        acc += weight * step;
        current = vec_times_matrix(current, p);
        weight *= gamma;
    }
    return (1.0 - gamma) * acc;
}

// Truncated series for the group inverse: sum_{t<=T} (P^t - e d^T).
inline Matrix group_inverse_series(const Matrix& p, const Vector& d, int horizon) {
    const int n = p.rows();
    Matrix power = Matrix::identity(n);
    Matrix acc(n, n);
    for (int t = 0; t <= horizon; ++t) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) acc(i, j) += power(i, j) - d[j];
        power = power * p;
    }
    return acc;
}

// Zero-sum vector with unit l1 norm, the feasible set of the tau1 program.
inline Vector sample_zero_sum_unit(DeterministicRng& rng, int n) {
    Vector x(n);
    double mean = 0.0;
    for (double& v : x) {
        v = rng.uniform01() - 0.5;
        mean += v;
    }
    mean /= n;
    double norm = 0.0;
    for (double& v : x) {
        v -= mean;
        norm += std::abs(v);
    }
    if (norm == 0.0) {
        x.assign(n, 0.0);
        if (n >= 2) {
            x[0] = 0.5;
            x[1] = -0.5;
        }
        return x;
    }
    for (double& v : x) v /= norm;
    return x;
}

// max over samples of ||A^T x||_1; a lower bound on tau1[A] approaching it
// from below.
inline double tau1_sampled(const Matrix& a, DeterministicRng& rng, int samples) {
    double best = 0.0;
    for (int s = 0; s < samples; ++s) {
        const Vector x = sample_zero_sum_unit(rng, a.rows());
        const Vector ax = vec_times_matrix(x, a);
        best = std::max(best, mdplab::l1_norm(ax));
    }
    return best;
}

// Row-stochastic matrix with strictly positive entries; irreducible and
// aperiodic by construction.
inline Matrix random_positive_chain(DeterministicRng& rng, int n) {
    Matrix p(n, n);
    for (int i = 0; i < n; ++i) {
        const Vector row = rng.simplex(n);
        for (int j = 0; j < n; ++j) p(i, j) = row[j];
    }
    return p;
}

inline Policy random_policy(DeterministicRng& rng, int n_states, int n_actions) {
    Policy pi;
    pi.probs = Matrix(n_states, n_actions);
    for (int x = 0; x < n_states; ++x) {
        const Vector row = rng.simplex(n_actions);
        for (int a = 0; a < n_actions; ++a) pi.probs(x, a) = row[a];
    }
    return pi;
}

// Wraps a bare chain as a single-action MDP so the evaluation entry points
// can be driven with hand-picked transition matrices.
inline Mdp chain_as_mdp(const Matrix& p, const Vector& r, const Vector& mu) {
    Mdp mdp = Mdp::zeros(p.rows(), 1);
    for (int x = 0; x < p.rows(); ++x) {
        for (int y = 0; y < p.cols(); ++y) mdp.transition_prob(x, 0, y) = p(x, y);
        mdp.reward(x, 0) = r[x];
    }
    mdp.initial_dist = mu;
    return mdp;
}

// 2-state chain [[1-p, p], [q, 1-q]]: closed forms for everything.
struct TwoStateChain {
    double p, q;
    Matrix transition() const { return Matrix{{1.0 - p, p}, {q, 1.0 - q}}; }
    Vector stationary() const { return {q / (p + q), p / (p + q)}; }
    // group inverse of I - P: (I - e d^T) / (p + q)
    Matrix group_inverse() const {
        const Vector d = stationary();
        return Matrix{{(1.0 - d[0]) / (p + q), -d[1] / (p + q)},
                      {-d[0] / (p + q), (1.0 - d[1]) / (p + q)}};
    }
    double lambda2() const { return 1.0 - p - q; }
};

} // namespace oracles
