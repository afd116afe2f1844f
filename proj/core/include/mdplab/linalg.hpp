#pragma once

#include <complex>

#include "mdplab/errors.hpp"
#include "mdplab/matrix.hpp"

namespace mdplab {

/// LU factorization with partial pivoting. Pivots below
/// 1e-13 * max|a| are treated as singular.
class LuDecomposition {
  public:
    explicit LuDecomposition(Matrix a);

    /// Back-substitution for a single right-hand side, followed by one step of
    /// iterative refinement against the original matrix.
    Vector solve(const Vector& b) const;
    /// Column-wise solve for a matrix right-hand side.
    Matrix solve(const Matrix& b) const;

    int order() const { return lu_.rows(); }

  private:
    Vector substitute(const Vector& b) const;

    Matrix original_;
    Matrix lu_;
    std::vector<int> perm_;
};

Vector solve(const Matrix& a, const Vector& b);
Matrix solve(const Matrix& a, const Matrix& b);
Matrix invert(const Matrix& a);

/// Stationary distribution of a row-stochastic matrix with a single recurrent
/// class: solves (I - P^T) d = 0 with one equation replaced by sum(d) = 1.
/// Entries in [-1e-9, 0) are clamped to zero and the vector renormalized;
/// anything more negative, or a singular system, signals multiple recurrent
/// classes and throws.
Vector stationary_distribution(const Matrix& p);

/// Group inverse D of A = I - P together with the max-abs residuals of the
/// three defining identities ADA = A, DAD = D, AD = DA.
struct GroupInverseResult {
    Matrix d;
    double residual_ada = 0.0;
    double residual_dad = 0.0;
    double residual_commute = 0.0;

    double max_residual() const;
};

/// Computes D = (I - P + e d^T)^{-1} - e d^T, the fundamental-matrix route.
/// `d` must be the stationary distribution of `p`; the fundamental matrix is
/// nonsingular exactly when `p` has a single recurrent class.
GroupInverseResult group_inverse(const Matrix& p, const Vector& d);

/// All eigenvalues of a real dense matrix: Householder reduction to upper
/// Hessenberg form followed by Francis double-shift QR iteration.
struct EigenvaluesResult {
    std::vector<std::complex<double>> values;
    bool converged = true;
};

EigenvaluesResult eigenvalues(Matrix a);

/// Modulus of the subdominant eigenvalue of a stochastic matrix, computed as
/// the spectral radius of the deflated matrix P - e d^T.
struct SubdominantResult {
    double modulus = 0.0;
    bool converged = true;
};

SubdominantResult subdominant_modulus(const Matrix& p, const Vector& d);

} // namespace mdplab
