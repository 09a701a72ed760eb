#pragma once

// Run diagnostics: the energy and barrier potentials, the instance
// constant alpha, the two-norm-plus-weights objective J, and per-step
// checkers for the lemma-level inequalities that drive the convergence
// analysis. Checkers return margins, not bare booleans, so tolerance
// regressions stay diagnosable.

#include <cstdint>
#include <string>

#include "bpdyn/types.hpp"

namespace bpdyn::analysis {

// One trace row: everything the lemma checkers need about a single step.
struct PotentialReport {
    std::int64_t k = 0;
    double l1_w = 0.0;       // ||w||_1
    double l1_y = 0.0;       // ||y||_1
    double energy_E = 0.0;   // sum q_i^2 / w_i = b' L^+ b
    double barrier_B = 0.0;  // sum |x*_i| ln w_i (0 when no optimum known)
    double max_ratio = 0.0;  // max_i |q_i| / w_i
    double j_value = 0.0;    // sum y_i^2/w_i + sum w_i (may be +inf)
};

// Outcome of one inequality check. `margin` is how far inside the
// inequality the data sits (negative = violated); `applicable` is false
// when the check's hypothesis does not hold, in which case it is skipped
// and reported rather than failed.
struct CheckResult {
    bool passed = true;
    double margin = 0.0;
    bool applicable = true;
    std::string note;
};

// sum over the support of q of q_i^2 / w_i. Throws ZeroWeightNonzeroFlow
// when some q_i != 0 rides a non-positive weight.
double energy(const Vector& q, const Vector& w);

// sum_i |x*_i| ln w_i. Signs of the optimum are absorbed by the absolute
// value: the dynamics is invariant under column sign flips and w is
// sign-blind, so this matches the sign-normalized definition without
// mutating the instance. Throws NonPositiveWeight.
double barrier(const Vector& x_star, const Vector& w);

// J(y, w) = sum y_i^2/w_i + sum w_i with the conventions 0/0 = 0 and
// (nonzero)/0 = +inf. Equals 2||y||_1 when w = |y|.
double j_value(const Vector& y, const Vector& w);

// The instance constant bounding |a_i' L^{-1} a_j| * w_i. For integer
// matrices: the exact maximum |det| over all square submatrices, by
// fraction-free elimination in 128-bit integers. Otherwise: the maximum
// absolute entry of the inverses of all invertible square submatrices.
// Enumeration budget sum_k C(m,k) C(n,k) <= 10^7; beyond that, or when
// exact arithmetic would overflow, throws TooLargeForExactAlpha and the
// caller must supply alpha explicitly.
double compute_alpha(const Matrix& A);

// Norm-drop lemma on consecutive reports of one damped-dynamics run:
// ||w(k+1)||_1 <= ||w(k)||_1 always, and <= (1 - h*eps/8) ||w(k)||_1
// whenever ||w(k)||_1 > (1 + eps/3) E(k). The margin reported is the
// smaller of the two applicable slacks.
CheckResult check_lemma_norm_drop(const PotentialReport& report_k,
                                  const PotentialReport& report_k1,
                                  double h, double eps);

// Barrier-growth lemma: B(k+1) >= B(k) + h (E(k) - (1 + eps/10) ||x*||_1),
// valid under the step-size hypothesis h <= eps / (40 n^2 alpha^2). When h
// exceeds the bound the check is skipped (applicable = false) rather than
// failed, since the lemma promises nothing there.
CheckResult check_lemma_barrier(const PotentialReport& report_k,
                                const PotentialReport& report_k1,
                                double h, double eps,
                                const Vector& x_star, double alpha);

} // namespace bpdyn::analysis
