#include "bpdyn/dynamics.hpp"

#include <cassert>
#include <cmath>

#include "bpdyn/errors.hpp"
#include "bpdyn/linalg.hpp"

namespace bpdyn::dynamics {

namespace {

constexpr double kFeasibilityTol = 1e-7;

std::vector<std::uint8_t> support_of(const Vector& w) {
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(w.size()));
    for (Index i = 0; i < w.size(); ++i) {
        mask[static_cast<std::size_t>(i)] = w[i] > 0.0 ? 1 : 0;
    }
    return mask;
}

} // namespace

void StepConfig::validate() const {
    if (!(h > 0.0 && h <= 1.0)) {
        throw InvalidArgument("step size h must lie in (0, 1]");
    }
    if (!(zero_clamp >= 0.0)) {
        throw InvalidArgument("zero_clamp must be nonnegative");
    }
    switch (variant) {
        case Variant::irls:
            if (h != 1.0) throw InvalidArgument("irls requires h = 1");
            break;
        case Variant::physarum:
            if (h >= 1.0) throw InvalidArgument("physarum requires h < 1");
            break;
        case Variant::regularized_irls:
            if (!(eta > 0.0)) throw InvalidArgument("regularized_irls requires eta > 0");
            if (h != 1.0) throw InvalidArgument("regularized_irls requires h = 1");
            break;
        case Variant::unified:
            break;
    }
}

Advance advance(const model::Instance& inst, const State& st, const StepConfig& cfg) {
    cfg.validate();
    if (st.y.size() != inst.cols() || st.w.size() != inst.cols()) {
        throw InvalidArgument("state dimension does not match instance");
    }

    // Per-variant solve weights. Zero weight makes q_i = w_i (a_i' z) an
    // exact zero, so frozen coordinates need no explicit column removal.
    Vector v;
    switch (cfg.variant) {
        case Variant::irls:
            v = st.y.cwiseAbs();
            for (Index i = 0; i < v.size(); ++i) {
                if (v[i] <= cfg.zero_clamp) v[i] = 0.0;
            }
            break;
        case Variant::regularized_irls:
            v = (st.y.array().square() + cfg.eta * cfg.eta).sqrt();
            break;
        case Variant::physarum:
            if ((st.w.array() <= 0.0).any()) {
                throw NonPositiveWeight("damped dynamics needs strictly positive weights");
            }
            v = st.w;
            break;
        case Variant::unified:
            // A dead weight under a live coordinate cannot arise from the
            // constructors here; it would silently change the support.
            for (Index i = 0; i < st.w.size(); ++i) {
                assert(!(st.w[i] == 0.0 && st.y[i] != 0.0));
            }
            v = st.w;
            break;
    }

    linalg::WeightedMin wm = linalg::weighted_l2_min(inst.A, inst.b, v);

    Advance out;
    out.q = std::move(wm.q);
    out.energy = wm.energy;
    out.state.k = st.k + 1;
    out.state.y = (1.0 - cfg.h) * st.y + cfg.h * out.q;

    switch (cfg.variant) {
        case Variant::irls:
            // w' = |y'| with near-zeros frozen to exact zero in both.
            out.state.w = out.state.y.cwiseAbs();
            for (Index i = 0; i < out.state.w.size(); ++i) {
                if (out.state.w[i] <= cfg.zero_clamp) {
                    out.state.w[i] = 0.0;
                    out.state.y[i] = 0.0;
                }
            }
            break;
        case Variant::regularized_irls:
            out.state.w = v;
            break;
        case Variant::physarum:
        case Variant::unified:
            out.state.w = (1.0 - cfg.h) * st.w + cfg.h * out.q.cwiseAbs();
            break;
    }
    out.state.support = support_of(out.state.w);
    out.solve_weights = std::move(v);
    return out;
}

State unified_step(const model::Instance& inst, const State& st, const StepConfig& cfg) {
    StepConfig c = cfg;
    c.variant = Variant::unified;
    return advance(inst, st, c).state;
}

State irls_step(const model::Instance& inst, const State& st, double zero_clamp) {
    StepConfig c;
    c.variant = Variant::irls;
    c.h = 1.0;
    c.zero_clamp = zero_clamp;
    return advance(inst, st, c).state;
}

State physarum_step(const model::Instance& inst, const State& st, double h) {
    StepConfig c;
    c.variant = Variant::physarum;
    c.h = h;
    return advance(inst, st, c).state;
}

State regularized_irls_step(const model::Instance& inst, const State& st, double eta) {
    StepConfig c;
    c.variant = Variant::regularized_irls;
    c.eta = eta;
    return advance(inst, st, c).state;
}

double theorem_step_size(const model::Instance& inst, double eps, double alpha) {
    if (!(eps > 0.0 && eps < 0.5)) {
        throw BadEpsilon("eps must lie in (0, 1/2)");
    }
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw InvalidArgument("alpha must be positive and finite");
    }
    const double n = static_cast<double>(inst.cols());
    return eps / (40.0 * n * n * alpha * alpha);
}

State make_state(const model::Instance& inst, Vector y, Vector w, std::int64_t k) {
    if (y.size() != inst.cols() || w.size() != inst.cols()) {
        throw InvalidArgument("state dimension does not match instance");
    }
    if (!y.allFinite() || !w.allFinite()) {
        throw NonFiniteInput("state contains NaN or Inf");
    }
    if ((w.array() < 0.0).any()) {
        throw NonPositiveWeight("weights must be nonnegative");
    }
    const double residual = (inst.A * y - inst.b).lpNorm<Eigen::Infinity>();
    if (residual > kFeasibilityTol * (1.0 + inst.b.lpNorm<Eigen::Infinity>())) {
        throw InvalidArgument("start point does not satisfy A y = b");
    }
    State st;
    st.y = std::move(y);
    st.w = std::move(w);
    st.k = k;
    st.support = support_of(st.w);
    return st;
}

Vector least_squares_solution(const model::Instance& inst) {
    return linalg::weighted_l2_min(inst.A, inst.b, Vector::Ones(inst.cols())).q;
}

State default_start(const model::Instance& inst, const Vector& y0, const StepConfig& cfg) {
    Vector w;
    switch (cfg.variant) {
        case Variant::irls:
            w = y0.cwiseAbs();
            break;
        case Variant::regularized_irls:
            w = (y0.array().square() + cfg.eta * cfg.eta).sqrt();
            break;
        case Variant::physarum:
        case Variant::unified:
            // w_i = |y_i| + 1 keeps every weight >= 1, as the convergence
            // theorem's starting condition requires.
            w = y0.cwiseAbs().array() + 1.0;
            break;
    }
    return make_state(inst, y0, std::move(w), 0);
}

} // namespace bpdyn::dynamics
