#pragma once

// Drives a configured stepper from a start state, recording one trace row
// per iteration plus the lemma checks the diagnostics request. Split from
// the stepper header so the steppers stay ignorant of serialization.

#include <cstdint>
#include <optional>

#include "bpdyn/dynamics.hpp"
#include "bpdyn/model.hpp"
#include "bpdyn/oracle.hpp"
#include "bpdyn/trace.hpp"
#include "bpdyn/types.hpp"

namespace bpdyn::dynamics {

struct StoppingRule {
    std::int64_t max_iter = 1000;
    // Stop once ||w||_1 falls to this value; typically (1 + eps) * opt.
    std::optional<double> target_l1_w;
};

// Optional context for the per-step lemma checks: the exact optimum (for
// the barrier and the stopping target), eps, and alpha. Checks that lack
// their inputs are recorded as not applicable rather than failed.
struct Diagnostics {
    std::optional<oracle::OracleResult> oracle;
    std::optional<double> eps;
    std::optional<double> alpha;
};

// Iterates from `start` until the target, the iteration cap, or a
// terminal diagnostic. Rows cover k = start.k .. last; iterate k's row is
// computed from the minimizer at state k, so the trace always ends with a
// fully described state. Stepper failures land in terminal_status, not in
// exceptions.
trace::Trace run(const model::Instance& inst, const State& start,
                 const StepConfig& cfg, const StoppingRule& stop,
                 const Diagnostics& diag = {});

} // namespace bpdyn::dynamics
