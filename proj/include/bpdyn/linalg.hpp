#pragma once

// Dense kernel: weighted l2-minimization over an affine subspace
//   argmin sum_i x_i^2 / w_i   s.t.  Ax = b,  x_i = 0 wherever w_i = 0
// with closed form q = W A^T (A W A^T)^+ b.

#include <Eigen/Dense>

#include "bpdyn/types.hpp"

namespace bpdyn::linalg {

// Factorized weighted Gram matrix L = A diag(w) A^T.
//
// Solves through Cholesky when L is positive definite and the positive
// weights are well scaled; otherwise falls back to a symmetric
// eigendecomposition pseudoinverse that zeroes singular values below
// 1e-12 * sigma_max. Zero weights contribute nothing to L, which is the
// same as excluding those columns outright.
class WeightedGram {
public:
    enum class Factorization { automatic, pseudoinverse };

    WeightedGram(const Matrix& A, const Vector& weights,
                 Factorization mode = Factorization::automatic);

    // L^+ c (equals the unique solution of Lx = c when L has full rank).
    Vector solve(const Vector& c) const;

    // u^T L^+ v
    double bilinear(const Vector& u, const Vector& v) const;

    Index dim() const { return L_.rows(); }
    Index rank() const { return rank_; }
    double tolerance_used() const { return tol_; }
    bool used_cholesky() const { return cholesky_ok_; }
    const Matrix& matrix() const { return L_; }

private:
    void factorize_pseudoinverse();

    Matrix L_;
    Eigen::LLT<Matrix> llt_;
    bool cholesky_ok_ = false;
    Matrix eigvecs_;      // pseudoinverse route only
    Vector inv_eigvals_;  // 1/lambda_i, or 0 below the cutoff
    Index rank_ = 0;
    double tol_ = 0.0;
};

struct WeightedMin {
    Vector q;       // the minimizer
    double energy;  // b^T L^+ b  (= sum q_i^2 / w_i over the support)
};

// Solves the weighted minimization above. Weights must be nonnegative;
// coordinates with w_i = 0 are held at exact zero. Throws
// InfeasibleOnSupport when b cannot be reached on the positive-weight
// columns, NonFiniteInput on NaN/Inf anywhere.
WeightedMin weighted_l2_min(const Matrix& A, const Vector& b, const Vector& w);

// Free-function forms of the factorization queries.
Vector pseudo_solve(const WeightedGram& L, const Vector& c);
double bilinear_form(const WeightedGram& L, const Vector& u, const Vector& v);

} // namespace bpdyn::linalg
