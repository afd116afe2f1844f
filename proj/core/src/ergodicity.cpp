#include "mdplab/ergodicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mdplab {

ErgodicityCoefficient tau1(const Matrix& a) {
    if (!a.square()) throw std::invalid_argument("tau1: matrix not square");
    ErgodicityCoefficient out;
    const int n = a.rows();
    for (int i = 0; i < n; ++i) {
        const auto row_i = a.row(i);
        for (int j = i + 1; j < n; ++j) {
            const auto row_j = a.row(j);
            double dist = 0.0;
            for (int z = 0; z < n; ++z) dist += std::abs(row_i[z] - row_j[z]);
            if (0.5 * dist > out.value) {
                out.value = 0.5 * dist;
                out.row_i = i;
                out.row_j = j;
            }
        }
    }
    return out;
}

double tau1_translation_residual(const Matrix& a, const Vector& c) {
    if (!a.square() || a.rows() != static_cast<int>(c.size()))
        throw std::invalid_argument("tau1_translation_residual: shape mismatch");
    Matrix shifted = a;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) shifted(i, j) += c[j];
    return std::abs(tau1(a).value - tau1(shifted).value);
}

GroupInverseResult discounted_group_inverse(const InducedChain& chain, const Vector& mu,
                                            double gamma) {
    const DiscountedTransition pg = discounted_transition(chain, mu, gamma);
    const Vector dg = occupancy(chain, mu, gamma, OccupancyMethod::resolvent).dist;
    return group_inverse(pg.p, dg);
}

ResolventIdentityReport resolvent_identity_check(const InducedChain& chain, const Vector& mu,
                                                 double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("resolvent_identity_check: gamma must lie in (0, 1)");
    const int n = chain.transition.rows();

    const GroupInverseResult gi = discounted_group_inverse(chain, mu, gamma);
    const Vector dg = occupancy(chain, mu, gamma, OccupancyMethod::resolvent).dist;

    Matrix resolvent_system(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            resolvent_system(i, j) = (i == j ? 1.0 : 0.0) - gamma * chain.transition(i, j);
    const Matrix r = invert(resolvent_system);

    // D_gamma = R + e dg^T (I - R) - e dg^T; the rank-one terms collapse to
    // adding the row -dg^T R to every row of R
    Vector shift(n, 0.0);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += dg[i] * r(i, j);
        shift[j] = -s;
    }
    Matrix rhs = r;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rhs(i, j) += shift[j];

    ResolventIdentityReport report;
    report.identity_gap = max_abs_diff(gi.d, rhs);
    report.tau1_gap = std::abs(tau1(gi.d).value - tau1(r).value);
    return report;
}

SpectralBounds spectral_bounds(const InducedChain& chain, const Vector& mu, double gamma) {
    const int n = chain.transition.rows();
    SpectralBounds out;

    const GroupInverseResult gi = discounted_group_inverse(chain, mu, gamma);
    out.trace_bound = trace(gi.d);

    const Vector d = stationary_distribution(chain.transition);
    const SubdominantResult sub = subdominant_modulus(chain.transition, d);
    out.subdominant = sub.modulus;
    out.eig_converged = sub.converged;
    out.cardinality_bound = (n - 1) / (1.0 - gamma * sub.modulus);
    return out;
}

int default_ell_cap(int n_states) { return 2 * n_states * n_states; }

std::optional<MinorizationCertificate> minorization_bound(const InducedChain& chain,
                                                          const Vector& mu, double gamma,
                                                          int ell_cap) {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("minorization_bound: gamma must lie in [0, 1)");
    if (ell_cap < 1) throw std::invalid_argument("minorization_bound: ell_cap must be positive");
    const int n = chain.transition.rows();
    if (static_cast<int>(mu.size()) != n)
        throw std::invalid_argument("minorization_bound: mu length mismatch");

    Matrix power = chain.transition;
    for (int ell = 1; ell <= ell_cap; ++ell) {
        // delta(ell) = min over y in support(mu), x of P^ell(x,y)/mu(y);
        // states with mu(y) = 0 impose no constraint
        double delta = std::numeric_limits<double>::infinity();
        for (int y = 0; y < n && delta > 0.0; ++y) {
            if (mu[y] <= 0.0) continue;
            for (int x = 0; x < n; ++x) {
                delta = std::min(delta, power(x, y) / mu[y]);
                if (delta <= 0.0) break;
            }
        }
        if (delta > 0.0 && std::isfinite(delta)) {
            MinorizationCertificate cert;
            cert.ell = ell;
            cert.delta = delta;
            cert.gamma = gamma;
            cert.bound_value =
                2.0 * ell / (1.0 - gamma + std::pow(gamma, ell) * delta);
            return cert;
        }
        if (ell == ell_cap) break;
        power = power * chain.transition;
    }
    return std::nullopt;
}

} // namespace mdplab
