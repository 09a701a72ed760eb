#pragma once

// The steppers. Everything is one Euler step of the vector field
// F(y, w) = (q - y, |q| - w) with q the weighted l2 minimizer:
//
//   (y', w') = (1 - h)(y, w) + h F(y, w)
//
// h = 1 collapses to IRLS on the y-sequence (with hard support freezing);
// h in (0, 1) is the damped dynamics on the w-sequence; the regularized
// baseline replaces |y| by sqrt(y^2 + eta^2) and never shrinks support.
// All public steps route through the same kernel, so the h = 1 and
// damped sequences agree bit-for-bit with their standalone definitions.

#include <cstdint>
#include <vector>

#include "bpdyn/model.hpp"
#include "bpdyn/types.hpp"

namespace bpdyn::dynamics {

enum class Variant { unified, irls, physarum, regularized_irls };

struct StepConfig {
    Variant variant = Variant::unified;
    double h = 1.0;             // step size in (0, 1]
    double eta = 0.0;           // regularization, > 0 for regularized_irls
    double zero_clamp = 1e-14;  // IRLS support-freezing threshold

    // irls forces h = 1; physarum needs h in (0, 1); regularized_irls
    // needs eta > 0 (h = 1). Throws InvalidArgument.
    void validate() const;
};

struct State {
    Vector y;                          // feasible iterate, A y = b
    Vector w;                          // weights; zero = frozen coordinate
    std::int64_t k = 0;                // iteration count
    std::vector<std::uint8_t> support; // w_i > 0
};

// Result of one kernel step: the successor state plus the minimizer data
// the diagnostics need (q, the weights the solve actually used, and the
// optimal weighted l2 value b' L^+ b).
struct Advance {
    State state;
    Vector q;
    Vector solve_weights;
    double energy = 0.0;
};

// The shared kernel. Picks solve weights by variant (w itself, clamped
// |y|, or sqrt(y^2 + eta^2)), runs the weighted l2 minimization, and
// applies the damped update. Propagates InfeasibleOnSupport when a shrunk
// support cannot carry b.
Advance advance(const model::Instance& inst, const State& st, const StepConfig& cfg);

// One step of the unified dynamics at cfg.h.
State unified_step(const model::Instance& inst, const State& st, const StepConfig& cfg);

// IRLS: the h = 1 image with weights |y|; coordinates with |y_i| below
// zero_clamp are frozen to exact zero and leave the support permanently.
State irls_step(const model::Instance& inst, const State& st, double zero_clamp = 1e-14);

// Damped step: w' = (1 - h) w + h |q|, paired y' = (1 - h) y + h q.
// Requires strictly positive w and 0 < h < 1; keeps w' > 0.
State physarum_step(const model::Instance& inst, const State& st, double h);

// Smoothed baseline: y' = minimizer under weights sqrt(y_i^2 + eta^2),
// w' = those weights. No support shrinking for eta > 0.
State regularized_irls_step(const model::Instance& inst, const State& st, double eta);

// The step size the convergence theorem permits: eps / (40 n^2 alpha^2).
// Throws BadEpsilon outside eps in (0, 1/2).
double theorem_step_size(const model::Instance& inst, double eps, double alpha);

// Bundles y, w, k into a State after validating A y = b within
// 1e-7 * (1 + ||b||_inf), finiteness, and w >= 0.
State make_state(const model::Instance& inst, Vector y, Vector w, std::int64_t k = 0);

// Minimum-2-norm feasible point (the all-ones-weights minimizer).
Vector least_squares_solution(const model::Instance& inst);

// Canonical start for a run from the feasible point y0: weights are
// |y0| + 1 (unified/physarum, keeping w inside the theorem's cone),
// |y0| (irls), or sqrt(y0^2 + eta^2) (regularized).
State default_start(const model::Instance& inst, const Vector& y0, const StepConfig& cfg);

} // namespace bpdyn::dynamics
