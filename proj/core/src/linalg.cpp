#include "mdplab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mdplab {

namespace {

constexpr double kPivotRelTol = 1e-13;
constexpr double kEps = std::numeric_limits<double>::epsilon();

} // namespace

LuDecomposition::LuDecomposition(Matrix a) : original_(a), lu_(std::move(a)) {
    if (!lu_.square()) throw std::invalid_argument("LuDecomposition: matrix not square");
    const int n = lu_.rows();
    const double pivot_floor = kPivotRelTol * std::max(max_abs(lu_), 1e-300);
    perm_.resize(n);
    for (int i = 0; i < n; ++i) perm_[i] = i;

    for (int k = 0; k < n; ++k) {
        int piv = k;
        double piv_abs = std::abs(lu_(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::abs(lu_(i, k));
            if (v > piv_abs) {
                piv_abs = v;
                piv = i;
            }
        }
        if (piv_abs < pivot_floor)
            throw SingularMatrixError("LU pivot " + std::to_string(k) +
                                      " below threshold: matrix singular to working precision");
        if (piv != k) {
            std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(piv).begin());
            std::swap(perm_[k], perm_[piv]);
        }
        const double inv_pivot = 1.0 / lu_(k, k);
        for (int i = k + 1; i < n; ++i) {
            const double m = lu_(i, k) * inv_pivot;
            lu_(i, k) = m;
            if (m == 0.0) continue;
            for (int j = k + 1; j < n; ++j) lu_(i, j) -= m * lu_(k, j);
        }
    }
}

Vector LuDecomposition::substitute(const Vector& b) const {
    const int n = lu_.rows();
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = b[perm_[i]];
    for (int i = 0; i < n; ++i) {
        double s = x[i];
        for (int j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
        x[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = x[i];
        for (int j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
        x[i] = s / lu_(i, i);
    }
    return x;
}

Vector LuDecomposition::solve(const Vector& b) const {
    if (static_cast<int>(b.size()) != lu_.rows())
        throw std::invalid_argument("LuDecomposition::solve: size mismatch");
    Vector x = substitute(b);
    // one refinement pass keeps residuals near machine precision even for
    // ill-conditioned resolvents at gamma close to 1
    Vector r = mat_vec(original_, x);
    for (size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    const Vector dx = substitute(r);
    for (size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
    return x;
}

Matrix LuDecomposition::solve(const Matrix& b) const {
    if (b.rows() != lu_.rows())
        throw std::invalid_argument("LuDecomposition::solve: shape mismatch");
    Matrix x(b.rows(), b.cols());
    Vector col(b.rows());
    for (int j = 0; j < b.cols(); ++j) {
        for (int i = 0; i < b.rows(); ++i) col[i] = b(i, j);
        const Vector xj = solve(col);
        for (int i = 0; i < b.rows(); ++i) x(i, j) = xj[i];
    }
    return x;
}

Vector solve(const Matrix& a, const Vector& b) { return LuDecomposition(a).solve(b); }

Matrix solve(const Matrix& a, const Matrix& b) { return LuDecomposition(a).solve(b); }

Matrix invert(const Matrix& a) {
    if (!a.square()) throw std::invalid_argument("invert: matrix not square");
    return LuDecomposition(a).solve(Matrix::identity(a.rows()));
}

Vector stationary_distribution(const Matrix& p) {
    if (!p.square()) throw std::invalid_argument("stationary_distribution: matrix not square");
    const int n = p.rows();
    // (I - P^T) d = 0 with the first equation replaced by the normalization
    // sum(d) = 1; the replaced row is redundant because the rows of I - P^T
    // sum to zero, so the system is nonsingular iff the chain is unichain.
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = (i == j ? 1.0 : 0.0) - p(j, i);
    for (int j = 0; j < n; ++j) m(0, j) = 1.0;
    Vector b(n, 0.0);
    b[0] = 1.0;

    Vector d;
    try {
        d = solve(m, b);
    } catch (const SingularMatrixError&) {
        throw NotUnichainError(
            "stationary_distribution: system singular beyond the expected rank "
            "deficiency; the chain has multiple recurrent classes");
    }

    double total = 0.0;
    for (double& x : d) {
        if (x < 0.0) {
            if (x < -1e-9)
                throw NotUnichainError("stationary_distribution: entry " + std::to_string(x) +
                                       " significantly negative");
            x = 0.0;
        }
        total += x;
    }
    for (double& x : d) x /= total;

    const Vector dp = vec_mat(d, p);
    if (l1_diff(dp, d) > 1e-9)
        throw ConsistencyError("stationary_distribution: stationarity residual above 1e-9");
    return d;
}

double GroupInverseResult::max_residual() const {
    return std::max({residual_ada, residual_dad, residual_commute});
}

GroupInverseResult group_inverse(const Matrix& p, const Vector& d) {
    if (!p.square() || p.rows() != static_cast<int>(d.size()))
        throw std::invalid_argument("group_inverse: shape mismatch");
    const int n = p.rows();

    // fundamental matrix Z = (I - P + e d^T)^{-1}; then D = Z - e d^T
    Matrix fund(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) fund(i, j) = (i == j ? 1.0 : 0.0) - p(i, j) + d[j];
    Matrix z;
    try {
        z = invert(fund);
    } catch (const SingularMatrixError&) {
        throw NotUnichainError("group_inverse: fundamental matrix singular; the chain does not "
                               "have a single recurrent class");
    }

    GroupInverseResult result;
    result.d = std::move(z);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) result.d(i, j) -= d[j];

    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = (i == j ? 1.0 : 0.0) - p(i, j);

    const Matrix ad = a * result.d;
    const Matrix da = result.d * a;
    result.residual_ada = max_abs_diff(ad * a, a);
    result.residual_dad = max_abs_diff(result.d * ad, result.d);
    result.residual_commute = max_abs_diff(ad, da);
    return result;
}

// ---------------------------------------------------------------------------
// Dense nonsymmetric eigenvalues: Hessenberg reduction + Francis QR.
// ---------------------------------------------------------------------------

namespace {

void hessenberg_reduce(Matrix& h) {
    const int n = h.rows();
    Vector v(n);
    for (int k = 0; k + 2 < n; ++k) {
        double scale = 0.0;
        for (int i = k + 1; i < n; ++i) scale += std::abs(h(i, k));
        if (scale == 0.0) continue;
        double norm2 = 0.0;
        for (int i = k + 1; i < n; ++i) {
            v[i] = h(i, k) / scale;
            norm2 += v[i] * v[i];
        }
        double alpha = std::sqrt(norm2);
        if (v[k + 1] < 0.0) alpha = -alpha;
        v[k + 1] += alpha;
        const double beta = 1.0 / (alpha * v[k + 1]);

        // left: rows k+1..n-1; columns before k are already zero
        for (int j = k; j < n; ++j) {
            double s = 0.0;
            for (int i = k + 1; i < n; ++i) s += v[i] * h(i, j);
            s *= beta;
            for (int i = k + 1; i < n; ++i) h(i, j) -= s * v[i];
        }
        // right: all rows, columns k+1..n-1
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = k + 1; j < n; ++j) s += h(i, j) * v[j];
            s *= beta;
            for (int j = k + 1; j < n; ++j) h(i, j) -= s * v[j];
        }
        for (int i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

std::pair<std::complex<double>, std::complex<double>> eig2x2(double a, double b, double c,
                                                             double e) {
    const double half_tr = 0.5 * (a + e);
    const double det = a * e - b * c;
    const double disc = half_tr * half_tr - det;
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        // stable split: compute the larger-magnitude root first
        const double q = half_tr >= 0.0 ? half_tr + root : half_tr - root;
        const double other = (q != 0.0) ? det / q : half_tr - std::copysign(root, half_tr);
        return {std::complex<double>(q, 0.0), std::complex<double>(other, 0.0)};
    }
    const double imag = std::sqrt(-disc);
    return {std::complex<double>(half_tr, imag), std::complex<double>(half_tr, -imag)};
}

// One implicit double-shift sweep on the active window [lo, hi] of the
// Hessenberg matrix, with the shift pair given by its trace and determinant.
void francis_sweep(Matrix& h, int lo, int hi, double shift_trace, double shift_det) {
    double x = h(lo, lo) * h(lo, lo) + h(lo, lo + 1) * h(lo + 1, lo) -
               shift_trace * h(lo, lo) + shift_det;
    double y = h(lo + 1, lo) * (h(lo, lo) + h(lo + 1, lo + 1) - shift_trace);
    double z = (lo + 2 <= hi) ? h(lo + 2, lo + 1) * h(lo + 1, lo) : 0.0;

    for (int k = lo; k <= hi - 1; ++k) {
        const bool has_third = k + 2 <= hi;
        const double scale = std::abs(x) + std::abs(y) + std::abs(z);
        if (scale != 0.0) {
            double v1 = x / scale, v2 = y / scale, v3 = z / scale;
            double norm = std::sqrt(v1 * v1 + v2 * v2 + v3 * v3);
            if (v1 < 0.0) norm = -norm;
            v1 += norm;
            const double beta = 1.0 / (norm * v1);

            const int jfirst = (k == lo) ? lo : k - 1;
            for (int j = jfirst; j <= hi; ++j) {
                double s = v1 * h(k, j) + v2 * h(k + 1, j);
                if (has_third) s += v3 * h(k + 2, j);
                s *= beta;
                h(k, j) -= s * v1;
                h(k + 1, j) -= s * v2;
                if (has_third) h(k + 2, j) -= s * v3;
            }
            const int ilast = std::min(hi, k + 3);
            for (int i = lo; i <= ilast; ++i) {
                double s = v1 * h(i, k) + v2 * h(i, k + 1);
                if (has_third) s += v3 * h(i, k + 2);
                s *= beta;
                h(i, k) -= s * v1;
                h(i, k + 1) -= s * v2;
                if (has_third) h(i, k + 2) -= s * v3;
            }
        }
        if (k + 1 <= hi - 1) {
            x = h(k + 1, k);
            y = h(k + 2, k);
            z = (k + 3 <= hi) ? h(k + 3, k) : 0.0;
        }
    }
    // clear bulge crumbs below the first subdiagonal
    for (int i = lo + 2; i <= hi; ++i)
        for (int j = lo; j <= i - 2; ++j) h(i, j) = 0.0;
}

} // namespace

EigenvaluesResult eigenvalues(Matrix a) {
    if (!a.square()) throw std::invalid_argument("eigenvalues: matrix not square");
    const int n = a.rows();
    EigenvaluesResult result;
    result.values.resize(n);
    if (n == 0) return result;

    hessenberg_reduce(a);
    Matrix& h = a;
    const double anorm = std::max(inf_norm(h), 1e-300);

    int hi = n - 1;
    int its = 0;
    while (hi >= 0) {
        // find the start of the active block: first negligible subdiagonal
        int lo = hi;
        while (lo > 0) {
            const double s = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
            if (std::abs(h(lo, lo - 1)) <= kEps * (s != 0.0 ? s : anorm)) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }

        if (lo == hi) {
            result.values[hi] = h(hi, hi);
            --hi;
            its = 0;
            continue;
        }
        if (lo == hi - 1) {
            auto [e1, e2] = eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
            result.values[hi - 1] = e1;
            result.values[hi] = e2;
            hi -= 2;
            its = 0;
            continue;
        }

        if (its >= 30) {
            // give up on this eigenvalue: record the diagonal entry and deflate
            result.converged = false;
            result.values[hi] = h(hi, hi);
            --hi;
            its = 0;
            continue;
        }

        double shift_trace, shift_det;
        if (its == 10 || its == 20) {
            // exceptional shift; breaks the symmetry that stalls cyclic matrices
            const double s = std::abs(h(hi, hi - 1)) + std::abs(h(hi - 1, hi - 2));
            shift_trace = 1.5 * s + 2.0 * h(hi, hi);
            shift_det = (0.75 * s + h(hi, hi)) * (0.75 * s + h(hi, hi)) + 0.4375 * s * s;
        } else {
            shift_trace = h(hi - 1, hi - 1) + h(hi, hi);
            shift_det = h(hi - 1, hi - 1) * h(hi, hi) - h(hi - 1, hi) * h(hi, hi - 1);
        }
        francis_sweep(h, lo, hi, shift_trace, shift_det);
        ++its;
    }
    return result;
}

SubdominantResult subdominant_modulus(const Matrix& p, const Vector& d) {
    if (!p.square() || p.rows() != static_cast<int>(d.size()))
        throw std::invalid_argument("subdominant_modulus: shape mismatch");
    const int n = p.rows();
    SubdominantResult result;
    if (n == 1) return result;

    // deflate the Perron eigenvalue: spectrum of P - e d^T is {0, l2, ..., ln}
    Matrix b = p;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j) -= d[j];

    const EigenvaluesResult eig = eigenvalues(std::move(b));
    result.converged = eig.converged;
    for (const auto& lambda : eig.values)
        result.modulus = std::max(result.modulus, std::abs(lambda));
    return result;
}

} // namespace mdplab
