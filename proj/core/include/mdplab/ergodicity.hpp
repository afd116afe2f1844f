#pragma once

#include <optional>

#include "mdplab/discounting.hpp"
#include "mdplab/linalg.hpp"
#include "mdplab/mdp.hpp"

namespace mdplab {

/// One-norm ergodicity coefficient tau1[A]: the maximum of ||A^T x||_1 over
/// zero-sum l1-unit vectors x. The extreme points of that feasible set are
/// (e_i - e_j)/2, so the maximum equals half the largest l1 distance between
/// two rows of A; this closed form is what gets computed.
struct ErgodicityCoefficient {
    double value = 0.0;
    int row_i = 0;
    int row_j = 0;
};

ErgodicityCoefficient tau1(const Matrix& a);

/// |tau1[A] - tau1[A + e c^T]|. Zero by construction in the pairwise form:
/// both rows shift by the same c.
double tau1_translation_residual(const Matrix& a, const Vector& c);

/// Group inverse of I - P_gamma with d_gamma as its stationary distribution.
GroupInverseResult discounted_group_inverse(const InducedChain& chain, const Vector& mu,
                                            double gamma);

/// Residuals of the closed form D_gamma = R + e d_gamma^T (I - R) - e d_gamma^T
/// with R = (I - gamma P)^{-1}, and of the translation-invariance consequence
/// tau1[D_gamma] = tau1[R].
struct ResolventIdentityReport {
    double identity_gap = 0.0; // max-abs entry difference of the two routes
    double tau1_gap = 0.0;     // |tau1[D_gamma] - tau1[R]|
};

ResolventIdentityReport resolvent_identity_check(const InducedChain& chain, const Vector& mu,
                                                 double gamma);

/// Spectral upper bounds on tau1[D_gamma]:
///   trace bound        trace(D_gamma) = sum_{i>=2} 1/(1 - gamma lambda_i)
///   cardinality bound  (n-1)/(1 - gamma |lambda_2|)
struct SpectralBounds {
    double trace_bound = 0.0;
    double cardinality_bound = 0.0;
    double subdominant = 0.0; // |lambda_2| of P (undiscounted)
    bool eig_converged = true;
};

SpectralBounds spectral_bounds(const InducedChain& chain, const Vector& mu, double gamma);

/// Minorization certificate: smallest ell with P^ell(x,y) >= delta mu(y) for
/// all x and all y in support(mu), with the largest delta for that ell. Yields
/// the gamma-uniform bound tau1[D_gamma] <= 2 ell / (1 - gamma + gamma^ell delta),
/// which stays finite as gamma -> 1.
struct MinorizationCertificate {
    int ell = 0;
    double delta = 0.0;
    double gamma = 0.0;
    double bound_value = 0.0;
};

/// Empty when no power up to ell_cap minorizes mu: the chain mixes too slowly
/// or is periodic.
std::optional<MinorizationCertificate> minorization_bound(const InducedChain& chain,
                                                          const Vector& mu, double gamma,
                                                          int ell_cap);

/// 2 n^2 covers the primitivity index of every desk-scale chain.
int default_ell_cap(int n_states);

} // namespace mdplab
