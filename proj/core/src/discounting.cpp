#include "mdplab/discounting.hpp"

#include <cmath>

namespace mdplab {

namespace {

constexpr double kSeriesTail = 1e-14;
constexpr long kSeriesCap = 1'000'000;

void check_gamma(double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("gamma must lie in [0, 1)");
}

void check_mu(const InducedChain& chain, const Vector& mu) {
    if (static_cast<int>(mu.size()) != chain.transition.rows())
        throw std::invalid_argument("initial distribution length does not match the chain");
}

} // namespace

DiscountedTransition discounted_transition(const InducedChain& chain, const Vector& mu,
                                           double gamma) {
    check_gamma(gamma);
    check_mu(chain, mu);
    const int n = chain.transition.rows();
    DiscountedTransition out;
    out.gamma = gamma;
    out.p = Matrix(n, n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            out.p(x, y) = gamma * chain.transition(x, y) + (1.0 - gamma) * mu[y];
    return out;
}

DiscountedOccupancy occupancy(const InducedChain& chain, const Vector& mu, double gamma,
                              OccupancyMethod method) {
    check_gamma(gamma);
    check_mu(chain, mu);
    const int n = chain.transition.rows();

    DiscountedOccupancy out;
    out.gamma = gamma;
    out.method = method;

    switch (method) {
    case OccupancyMethod::series: {
        long horizon = 0;
        if (gamma > 0.0)
            horizon = std::min<long>(
                kSeriesCap, static_cast<long>(std::ceil(std::log(kSeriesTail) / std::log(gamma))) - 1);
        Vector current = mu;
        Vector acc = mu; // t = 0 term
        double weight = 1.0;
        for (long t = 1; t <= horizon; ++t) {
            current = vec_mat(current, chain.transition);
            weight *= gamma;
            for (int y = 0; y < n; ++y) acc[y] += weight * current[y];
        }
        out.dist.assign(n, 0.0);
        for (int y = 0; y < n; ++y) out.dist[y] = (1.0 - gamma) * acc[y];
        break;
    }
    case OccupancyMethod::resolvent: {
        // (I - gamma P^T) d = (1-gamma) mu
        Matrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m(i, j) = (i == j ? 1.0 : 0.0) - gamma * chain.transition(j, i);
        Vector b(n);
        for (int i = 0; i < n; ++i) b[i] = (1.0 - gamma) * mu[i];
        out.dist = solve(m, b);
        break;
    }
    case OccupancyMethod::stationary: {
        out.dist = stationary_distribution(discounted_transition(chain, mu, gamma).p);
        break;
    }
    }

    const std::vector<int> reach = reachable_states(chain.transition, mu);
    std::vector<int> mask(n, 0);
    for (int x : reach) mask[x] = 1;
    for (int x = 0; x < n; ++x)
        if (!mask[x]) out.unreachable.push_back(x);
    return out;
}

OccupancyAgreement occupancy_consistency(const InducedChain& chain, const Vector& mu,
                                         double gamma) {
    OccupancyAgreement out;
    out.series = occupancy(chain, mu, gamma, OccupancyMethod::series);
    out.resolvent = occupancy(chain, mu, gamma, OccupancyMethod::resolvent);
    out.stationary = occupancy(chain, mu, gamma, OccupancyMethod::stationary);
    out.max_pairwise_l1 = std::max({l1_diff(out.series.dist, out.resolvent.dist),
                                    l1_diff(out.series.dist, out.stationary.dist),
                                    l1_diff(out.resolvent.dist, out.stationary.dist)});
    if (out.max_pairwise_l1 > 1e-8)
        throw ConsistencyError("occupancy methods disagree: max pairwise l1 distance " +
                               std::to_string(out.max_pairwise_l1));
    return out;
}

} // namespace mdplab
