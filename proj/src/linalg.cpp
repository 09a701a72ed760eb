#include "bpdyn/linalg.hpp"

#include <cmath>
#include <limits>

#include "bpdyn/errors.hpp"

namespace bpdyn::linalg {

namespace {

constexpr double kWeightScaleCutoff = 1e-12;  // min positive weight vs max
constexpr double kSingularCutoff = 1e-12;     // relative to sigma_max
constexpr double kResidualTol = 1e-8;

void require_finite(const Vector& v, const char* what) {
    if (!v.allFinite()) {
        throw NonFiniteInput(std::string(what) + " contains NaN or Inf");
    }
}

} // namespace

WeightedGram::WeightedGram(const Matrix& A, const Vector& weights, Factorization mode) {
    if (weights.size() != A.cols()) {
        throw InvalidArgument("weight vector length does not match column count");
    }
    L_.noalias() = A * weights.asDiagonal() * A.transpose();

    // Badly scaled positive weights make the Cholesky factor unreliable even
    // when it nominally succeeds; route those straight to the pseudoinverse.
    double wmax = 0.0;
    double wmin_pos = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < weights.size(); ++i) {
        const double wi = weights[i];
        if (wi > 0.0) {
            wmax = std::max(wmax, wi);
            wmin_pos = std::min(wmin_pos, wi);
        }
    }
    const bool well_scaled = wmax > 0.0 && wmin_pos >= kWeightScaleCutoff * wmax;

    if (mode == Factorization::automatic && well_scaled) {
        llt_.compute(L_);
        cholesky_ok_ = (llt_.info() == Eigen::Success);
    }
    if (cholesky_ok_) {
        rank_ = L_.rows();
        tol_ = 0.0;
    } else {
        factorize_pseudoinverse();
    }
}

void WeightedGram::factorize_pseudoinverse() {
    Eigen::SelfAdjointEigenSolver<Matrix> es(L_);
    if (es.info() != Eigen::Success) {
        throw NonFiniteInput("eigendecomposition of the weighted Gram matrix failed");
    }
    eigvecs_ = es.eigenvectors();
    const Vector& evals = es.eigenvalues();
    const double sigma_max = evals.cwiseAbs().maxCoeff();
    tol_ = kSingularCutoff * sigma_max;
    inv_eigvals_.resize(evals.size());
    rank_ = 0;
    for (Index i = 0; i < evals.size(); ++i) {
        if (std::abs(evals[i]) > tol_ && sigma_max > 0.0) {
            inv_eigvals_[i] = 1.0 / evals[i];
            ++rank_;
        } else {
            inv_eigvals_[i] = 0.0;
        }
    }
}

Vector WeightedGram::solve(const Vector& c) const {
    require_finite(c, "right-hand side");
    if (c.size() != L_.rows()) {
        throw InvalidArgument("right-hand side length does not match Gram dimension");
    }
    if (cholesky_ok_) {
        return llt_.solve(c);
    }
    return eigvecs_ * (inv_eigvals_.asDiagonal() * (eigvecs_.transpose() * c));
}

double WeightedGram::bilinear(const Vector& u, const Vector& v) const {
    require_finite(u, "bilinear argument");
    return u.dot(solve(v));
}

Vector pseudo_solve(const WeightedGram& L, const Vector& c) {
    return L.solve(c);
}

double bilinear_form(const WeightedGram& L, const Vector& u, const Vector& v) {
    return L.bilinear(u, v);
}

WeightedMin weighted_l2_min(const Matrix& A, const Vector& b, const Vector& w) {
    if (!A.allFinite()) {
        throw NonFiniteInput("constraint matrix contains NaN or Inf");
    }
    require_finite(b, "right-hand side");
    require_finite(w, "weights");
    if (b.size() != A.rows() || w.size() != A.cols()) {
        throw InvalidArgument("weighted_l2_min: shape mismatch");
    }
    if ((w.array() < 0.0).any()) {
        throw InvalidArgument("weighted_l2_min: negative weight");
    }

    const double btol = kResidualTol * (1.0 + b.lpNorm<Eigen::Infinity>());

    WeightedGram gram(A, w);
    Vector z = gram.solve(b);
    Vector q = w.asDiagonal() * (A.transpose() * z);
    double residual = (A * q - b).lpNorm<Eigen::Infinity>();

    // A Cholesky factor that slipped through on a near-singular L shows up
    // as a bad residual; retry once with the pseudoinverse before declaring
    // the support infeasible.
    if (residual > btol && gram.used_cholesky()) {
        WeightedGram pinv(A, w, WeightedGram::Factorization::pseudoinverse);
        z = pinv.solve(b);
        q = w.asDiagonal() * (A.transpose() * z);
        residual = (A * q - b).lpNorm<Eigen::Infinity>();
    }
    if (residual > btol) {
        throw InfeasibleOnSupport("right-hand side not reachable on the positive-weight support");
    }
    return WeightedMin{std::move(q), b.dot(z)};
}

} // namespace bpdyn::linalg
