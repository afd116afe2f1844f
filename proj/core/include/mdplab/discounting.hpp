#pragma once

#include "mdplab/linalg.hpp"
#include "mdplab/mdp.hpp"

namespace mdplab {

/// The discounted transition matrix P_gamma = gamma P + (1-gamma) e mu^T:
/// restart to mu with probability 1-gamma (the Google-matrix construction).
struct DiscountedTransition {
    double gamma = 0.0;
    Matrix p;
};

DiscountedTransition discounted_transition(const InducedChain& chain, const Vector& mu,
                                           double gamma);

enum class OccupancyMethod { series, resolvent, stationary };

/// Discounted future-state distribution d_gamma: the normalized geometric
/// mixture of the t-step state distributions started from mu.
struct DiscountedOccupancy {
    double gamma = 0.0;
    Vector dist;
    OccupancyMethod method = OccupancyMethod::resolvent;
    /// States with no positive-probability path from support(mu); d_gamma
    /// gives them mass 0. Reported as a warning, not an error.
    std::vector<int> unreachable;
};

/// series:     d^T = (1-gamma) sum_{t<=T} gamma^t mu^T P^t,  gamma^{T+1} <= 1e-14
/// resolvent:  d^T = (1-gamma) mu^T (I - gamma P)^{-1}
/// stationary: stationary distribution of P_gamma
DiscountedOccupancy occupancy(const InducedChain& chain, const Vector& mu, double gamma,
                              OccupancyMethod method = OccupancyMethod::resolvent);

struct OccupancyAgreement {
    DiscountedOccupancy series;
    DiscountedOccupancy resolvent;
    DiscountedOccupancy stationary;
    double max_pairwise_l1 = 0.0;
};

/// Runs all three methods; throws ConsistencyError if any pair differs by
/// more than 1e-8 in l1.
OccupancyAgreement occupancy_consistency(const InducedChain& chain, const Vector& mu,
                                         double gamma);

} // namespace mdplab
