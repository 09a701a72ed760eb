#include "bpdyn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "bpdyn/detail/combinations.hpp"
#include "bpdyn/errors.hpp"

namespace bpdyn::analysis {

namespace {

constexpr double kCheckTol = 1e-9;
constexpr double kAlphaBudget = 1e7;
// Keep Bareiss products comfortably inside signed 128-bit range.
constexpr double kHadamardCap = 1e17;
constexpr double kIntegerEntryCap = 1e12;

bool has_integer_entries(const Matrix& A) {
    for (Index i = 0; i < A.rows(); ++i) {
        for (Index j = 0; j < A.cols(); ++j) {
            const double e = A(i, j);
            if (std::nearbyint(e) != e || std::abs(e) > kIntegerEntryCap) {
                return false;
            }
        }
    }
    return true;
}

// Exact determinant of an integer k x k matrix by fraction-free (Bareiss)
// elimination; all intermediate values are minors of the input, so the
// caller's Hadamard cap keeps every product inside __int128.
__int128 bareiss_det(std::vector<__int128>& M, Index k) {
    auto at = [&](Index r, Index c) -> __int128& {
        return M[static_cast<std::size_t>(r * k + c)];
    };
    int sign = 1;
    __int128 prev = 1;
    for (Index p = 0; p + 1 < k; ++p) {
        if (at(p, p) == 0) {
            Index swap_row = -1;
            for (Index r = p + 1; r < k; ++r) {
                if (at(r, p) != 0) {
                    swap_row = r;
                    break;
                }
            }
            if (swap_row < 0) return 0;
            for (Index c = 0; c < k; ++c) std::swap(at(p, c), at(swap_row, c));
            sign = -sign;
        }
        for (Index i = p + 1; i < k; ++i) {
            for (Index j = p + 1; j < k; ++j) {
                at(i, j) = (at(i, j) * at(p, p) - at(i, p) * at(p, j)) / prev;
            }
        }
        prev = at(p, p);
    }
    return sign > 0 ? at(k - 1, k - 1) : -at(k - 1, k - 1);
}

double alpha_integer(const Matrix& A) {
    const Index m = A.rows();
    const Index n = A.cols();
    const double max_abs = A.cwiseAbs().maxCoeff();

    unsigned __int128 best = 0;
    std::vector<__int128> sub;
    for (Index k = 1; k <= std::min(m, n); ++k) {
        // Hadamard bound for any k x k submatrix; products of two such
        // minors must stay inside __int128.
        if (std::pow(std::sqrt(static_cast<double>(k)) * std::max(max_abs, 1.0),
                     static_cast<double>(k)) > kHadamardCap) {
            throw TooLargeForExactAlpha("entries too large for exact 128-bit determinants");
        }
        sub.assign(static_cast<std::size_t>(k * k), 0);
        auto rows = detail::first_combination(k);
        do {
            auto cols = detail::first_combination(k);
            do {
                for (Index r = 0; r < k; ++r) {
                    for (Index c = 0; c < k; ++c) {
                        sub[static_cast<std::size_t>(r * k + c)] = static_cast<__int128>(
                            std::llround(A(rows[static_cast<std::size_t>(r)],
                                           cols[static_cast<std::size_t>(c)])));
                    }
                }
                __int128 det = bareiss_det(sub, k);
                unsigned __int128 mag =
                    det < 0 ? static_cast<unsigned __int128>(-det)
                            : static_cast<unsigned __int128>(det);
                best = std::max(best, mag);
            } while (detail::next_combination(cols, n));
        } while (detail::next_combination(rows, m));
    }
    return static_cast<double>(best);
}

double alpha_inverse_entry(const Matrix& A) {
    const Index m = A.rows();
    const Index n = A.cols();
    double best = 0.0;
    for (Index k = 1; k <= std::min(m, n); ++k) {
        Matrix sub(k, k);
        auto rows = detail::first_combination(k);
        do {
            auto cols = detail::first_combination(k);
            do {
                for (Index r = 0; r < k; ++r) {
                    for (Index c = 0; c < k; ++c) {
                        sub(r, c) = A(rows[static_cast<std::size_t>(r)],
                                      cols[static_cast<std::size_t>(c)]);
                    }
                }
                Eigen::FullPivLU<Matrix> lu(sub);
                if (lu.isInvertible()) {
                    best = std::max(best, lu.inverse().cwiseAbs().maxCoeff());
                }
            } while (detail::next_combination(cols, n));
        } while (detail::next_combination(rows, m));
    }
    return best;
}

} // namespace

double energy(const Vector& q, const Vector& w) {
    if (q.size() != w.size()) {
        throw InvalidArgument("energy: size mismatch");
    }
    double sum = 0.0;
    for (Index i = 0; i < q.size(); ++i) {
        if (q[i] == 0.0) continue;
        if (w[i] <= 0.0) {
            throw ZeroWeightNonzeroFlow("nonzero flow on coordinate " + std::to_string(i) +
                                        " with non-positive weight");
        }
        sum += q[i] * q[i] / w[i];
    }
    return sum;
}

double barrier(const Vector& x_star, const Vector& w) {
    if (x_star.size() != w.size()) {
        throw InvalidArgument("barrier: size mismatch");
    }
    if ((w.array() <= 0.0).any()) {
        throw NonPositiveWeight("barrier needs strictly positive weights");
    }
    double sum = 0.0;
    for (Index i = 0; i < w.size(); ++i) {
        sum += std::abs(x_star[i]) * std::log(w[i]);
    }
    return sum;
}

double j_value(const Vector& y, const Vector& w) {
    if (y.size() != w.size()) {
        throw InvalidArgument("j_value: size mismatch");
    }
    double sum = 0.0;
    for (Index i = 0; i < y.size(); ++i) {
        if (w[i] == 0.0) {
            if (y[i] != 0.0) return std::numeric_limits<double>::infinity();
            continue;  // 0/0 counts as 0
        }
        sum += y[i] * y[i] / w[i] + w[i];
    }
    return sum;
}

double compute_alpha(const Matrix& A) {
    if (!A.allFinite()) {
        throw NonFiniteInput("compute_alpha: matrix has NaN or Inf");
    }
    const Index m = A.rows();
    const Index n = A.cols();
    if (m == 0 || n == 0) {
        throw InvalidArgument("compute_alpha: empty matrix");
    }
    double total = 0.0;
    for (Index k = 1; k <= std::min(m, n); ++k) {
        total += detail::binomial(m, k) * detail::binomial(n, k);
    }
    if (total > kAlphaBudget) {
        throw TooLargeForExactAlpha("submatrix count exceeds the enumeration budget");
    }
    return has_integer_entries(A) ? alpha_integer(A) : alpha_inverse_entry(A);
}

CheckResult check_lemma_norm_drop(const PotentialReport& report_k,
                                  const PotentialReport& report_k1,
                                  double h, double eps) {
    CheckResult out;
    const double monotone = report_k.l1_w - report_k1.l1_w;
    if (report_k.l1_w > (1.0 + eps / 3.0) * report_k.energy_E) {
        const double contractive =
            (1.0 - h * eps / 8.0) * report_k.l1_w - report_k1.l1_w;
        out.margin = std::min(monotone, contractive);
        out.note = "multiplicative clause active";
    } else {
        out.margin = monotone;
        out.note = "monotone clause only";
    }
    out.passed = out.margin >= -kCheckTol;
    return out;
}

CheckResult check_lemma_barrier(const PotentialReport& report_k,
                                const PotentialReport& report_k1,
                                double h, double eps,
                                const Vector& x_star, double alpha) {
    CheckResult out;
    const double n = static_cast<double>(x_star.size());
    const double h_bound = eps / (40.0 * n * n * alpha * alpha);
    if (h > h_bound * (1.0 + 1e-12)) {
        out.applicable = false;
        out.margin = h_bound - h;
        out.note = "step size exceeds the lemma hypothesis; check skipped";
        return out;
    }
    const double required =
        report_k.barrier_B + h * (report_k.energy_E - (1.0 + eps / 10.0) * x_star.lpNorm<1>());
    out.margin = report_k1.barrier_B - required;
    out.passed = out.margin >= -kCheckTol;
    return out;
}

} // namespace bpdyn::analysis
