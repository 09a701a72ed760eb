#include "bpdyn/runner.hpp"

#include <chrono>
#include <cmath>
#include <ctime>

#include "bpdyn/analysis.hpp"
#include "bpdyn/errors.hpp"

namespace bpdyn::dynamics {

namespace {

constexpr double kEnergyIdentityTol = 1e-8;

std::string iso8601_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t secs = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Builds iterate k's row from the state and the minimizer computed there.
// The barrier needs an optimum and strictly positive weights; when either
// is missing the column is recorded as 0.
analysis::PotentialReport
make_row(const State& st, const Advance& adv, const Diagnostics& diag) {
    analysis::PotentialReport row;
    row.k = st.k;
    row.l1_w = st.w.lpNorm<1>();
    row.l1_y = st.y.lpNorm<1>();
    row.energy_E = analysis::energy(adv.q, adv.solve_weights);
    row.barrier_B = 0.0;
    if (diag.oracle && (st.w.array() > 0.0).all()) {
        row.barrier_B = analysis::barrier(diag.oracle->optimizer, st.w);
    }
    row.max_ratio = 0.0;
    for (Index i = 0; i < adv.q.size(); ++i) {
        if (adv.solve_weights[i] > 0.0) {
            row.max_ratio = std::max(row.max_ratio,
                                     std::abs(adv.q[i]) / adv.solve_weights[i]);
        }
    }
    row.j_value = analysis::j_value(st.y, st.w);
    return row;
}

trace::StepChecks
make_checks(const analysis::PotentialReport* prev, const analysis::PotentialReport& cur,
            const Advance& adv, const StepConfig& cfg, const Diagnostics& diag) {
    trace::StepChecks checks;
    checks.k = cur.k;

    const bool damped =
        cfg.variant == Variant::physarum || cfg.variant == Variant::unified;
    if (!prev) {
        checks.norm_drop.applicable = false;
        checks.norm_drop.note = "first row";
        checks.barrier.applicable = false;
        checks.barrier.note = "first row";
    } else {
        if (damped && diag.eps) {
            checks.norm_drop =
                analysis::check_lemma_norm_drop(*prev, cur, cfg.h, *diag.eps);
        } else {
            checks.norm_drop.applicable = false;
            checks.norm_drop.note = damped ? "eps not supplied" : "damped dynamics only";
        }
        if (damped && diag.eps && diag.alpha && diag.oracle) {
            checks.barrier =
                analysis::check_lemma_barrier(*prev, cur, cfg.h, *diag.eps,
                                              diag.oracle->optimizer, *diag.alpha);
        } else {
            checks.barrier.applicable = false;
            checks.barrier.note =
                damped ? "needs eps, alpha, and an oracle optimum" : "damped dynamics only";
        }
    }

    // The minimizer's optimal value b' L^+ b must agree with the energy
    // sum computed coordinate-wise; adv was computed at `cur`'s state.
    const double gap = std::abs(adv.energy - cur.energy_E);
    checks.energy_identity.margin = kEnergyIdentityTol * (1.0 + cur.energy_E) - gap;
    checks.energy_identity.passed = checks.energy_identity.margin >= 0.0;
    return checks;
}

} // namespace

trace::Trace run(const model::Instance& inst, const State& start,
                 const StepConfig& cfg, const StoppingRule& stop,
                 const Diagnostics& diag) {
    cfg.validate();

    trace::Trace t;
    t.instance_id = inst.id;
    t.config = cfg;
    t.oracle = diag.oracle;
    t.timestamp = iso8601_now();

    State st = start;
    std::optional<analysis::PotentialReport> prev;
    while (true) {
        Advance adv;
        try {
            adv = advance(inst, st, cfg);
        } catch (const InfeasibleOnSupport& e) {
            t.terminal_status = {trace::TerminalKind::support_collapse, e.what()};
            break;
        } catch (const Error& e) {
            t.terminal_status = {trace::TerminalKind::kernel_error, e.what()};
            break;
        }

        analysis::PotentialReport row = make_row(st, adv, diag);
        t.rows.push_back(row);
        t.iterates.push_back(st.y);
        t.checks.push_back(make_checks(prev ? &*prev : nullptr, row, adv, cfg, diag));
        prev = row;

        if (stop.target_l1_w && row.l1_w <= *stop.target_l1_w) {
            t.terminal_status = {trace::TerminalKind::target_reached, ""};
            break;
        }
        if (st.k >= stop.max_iter) {
            t.terminal_status = {trace::TerminalKind::max_iter, ""};
            break;
        }
        st = std::move(adv.state);
    }
    return t;
}

} // namespace bpdyn::dynamics
