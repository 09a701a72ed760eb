// Acceptance gate: every release-blocking behavior of the library, checked
// end to end and reported as one machine-readable line per criterion.
// Exit status is the number of failed criteria.
//
// Criteria 2 and 3 share one set of damped-dynamics runs at the step size
// the convergence theorem prescribes; the run loop streams (no trace is
// stored) because the prescribed step sizes mean five- to eight-digit
// iteration counts.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bpdyn/analysis.hpp"
#include "bpdyn/dynamics.hpp"
#include "bpdyn/errors.hpp"
#include "bpdyn/linalg.hpp"
#include "bpdyn/model.hpp"
#include "bpdyn/oracle.hpp"

using namespace bpdyn;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

// ---------------------------------------------------------------------------
// Deterministic {-1, 0, 1} test matrices: entry probabilities 1/4, 1/2, 1/4,
// redrawn until full row rank, with a planted 2-sparse integer solution
// (redrawn while b = 0). Small entries keep the exact alpha computation and
// the oracle enumeration cheap.
model::Instance integer_instance(Index m, Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> trit(0, 3);
    std::uniform_int_distribution<Index> pos(0, n - 1);
    std::uniform_int_distribution<int> mag(1, 2);
    for (int attempt = 0; attempt < 256; ++attempt) {
        Matrix A(m, n);
        for (Index i = 0; i < m; ++i) {
            for (Index j = 0; j < n; ++j) {
                const int t = trit(rng);
                A(i, j) = t == 0 ? -1.0 : (t == 1 ? 1.0 : 0.0);
            }
        }
        Eigen::ColPivHouseholderQR<Matrix> qr(A);
        if (qr.rank() < m) continue;
        Vector x = Vector::Zero(n);
        x[pos(rng)] = mag(rng);
        x[pos(rng)] = -mag(rng);
        Vector b = A * x;
        if (b.cwiseAbs().maxCoeff() == 0.0) continue;
        std::ostringstream id;
        id << "int:" << m << "x" << n << ":seed" << seed;
        return model::make_instance(std::move(A), std::move(b), id.str());
    }
    throw Error("integer_instance: no usable draw");
}

// ---------------------------------------------------------------------------
// Criteria 2 + 3: one damped run per instance at h = eps / (40 n^2 alpha^2),
// eps = 0.1, from the canonical start (least-squares point, weights >= 1).
//
// The roster below was selected by timing every candidate on the target
// machine: random {-1,0,1} draws across the admissible size range whose
// exact alpha keeps the run under a few seconds (iterations scale with
// n^2 alpha^2), plus three Gaussian draws screened for a small
// inverse-entry alpha — unscreened Gaussian matrices almost always contain
// an entry small enough to blow alpha up and the step size down. Every
// run, bundled counterexample included, must converge inside the budget
// ceil(64 * max(1, ln M + ln ||x*||_1) / (h eps^2)) in under 60 s, and
// every step must satisfy the per-step inequality suite.

struct ConvergenceRun {
    std::string id;
    std::int64_t iters = -1;  // first k with ||w||_1 <= (1+eps) opt
    std::int64_t cap = 0;
    double seconds = 0.0;
    double alpha = 0.0;
    double opt = 0.0;
    bool within_cap = false;
    bool within_10x = false;
    std::int64_t steps_checked = 0;
    int fail_norm_drop = 0;
    int fail_barrier = 0;
    int fail_ratio = 0;
    int fail_energy = 0;
    int fail_sandwich = 0;

    int check_failures() const {
        return fail_norm_drop + fail_barrier + fail_ratio + fail_energy +
               fail_sandwich;
    }
};

ConvergenceRun converge_with_checks(const model::Instance& inst) {
    ConvergenceRun run;
    run.id = inst.id;
    run.alpha = analysis::compute_alpha(inst.A);
    oracle::OracleResult best = oracle::solve_l1_exact(inst);
    run.opt = best.optimal_value;

    const double eps = 0.1;
    const double h = dynamics::theorem_step_size(inst, eps, run.alpha);
    dynamics::StepConfig cfg;
    cfg.variant = dynamics::Variant::physarum;
    cfg.h = h;
    dynamics::State st = dynamics::default_start(
        inst, dynamics::least_squares_solution(inst), cfg);

    const double M = st.w.lpNorm<1>() / run.opt;
    run.cap = static_cast<std::int64_t>(std::ceil(
        64.0 * std::max(1.0, std::log(M) + std::log(run.opt)) / (h * eps * eps)));
    const double target = (1.0 + eps) * run.opt;
    const double n_alpha = static_cast<double>(inst.cols()) * run.alpha;

    const auto t0 = std::chrono::steady_clock::now();
    double barrier_cur = analysis::barrier(best.optimizer, st.w);
    for (std::int64_t k = 0; k <= 10 * run.cap; ++k) {
        const double l1w = st.w.lpNorm<1>();
        const double l1y = st.y.lpNorm<1>();
        // (e) sandwich: opt <= ||y||_1 <= ||w||_1.
        if (run.opt > l1y + 1e-9) ++run.fail_sandwich;
        if (l1y > l1w + 1e-9) ++run.fail_sandwich;
        if (l1w <= target) {
            run.iters = k;
            break;
        }

        dynamics::Advance adv = dynamics::advance(inst, st, cfg);
        ++run.steps_checked;
        const double E = adv.energy;
        // (a) total weight never grows; multiplicative drop when far out.
        double required = l1w;
        if (l1w > (1.0 + eps / 3.0) * E) required = (1.0 - h * eps / 8.0) * l1w;
        if (adv.state.w.lpNorm<1>() > required + 1e-9) ++run.fail_norm_drop;
        // (b) barrier growth at the prescribed rate.
        const double barrier_next = analysis::barrier(best.optimizer, adv.state.w);
        if (barrier_next <
            barrier_cur + h * (E - (1.0 + eps / 10.0) * run.opt) - 1e-9) {
            ++run.fail_barrier;
        }
        barrier_cur = barrier_next;
        // (c) flow-to-weight ratio bounded by n alpha.
        if ((adv.q.cwiseAbs().array() / st.w.array()).maxCoeff() > n_alpha + 1e-6) {
            ++run.fail_ratio;
        }
        // (d) two routes to the energy agree.
        if (std::abs(E - analysis::energy(adv.q, adv.solve_weights)) >
            1e-8 * (1.0 + E)) {
            ++run.fail_energy;
        }

        st = std::move(adv.state);
        if ((k & 4095) == 0 && seconds_since(t0) > 60.0) break;
    }
    run.seconds = seconds_since(t0);
    run.within_cap = run.iters >= 0 && run.iters <= run.cap;
    run.within_10x = run.iters >= 0;
    return run;
}

const std::vector<ConvergenceRun>& convergence_suite() {
    static const std::vector<ConvergenceRun> runs = [] {
        std::vector<ConvergenceRun> out;
        out.push_back(
            converge_with_checks(model::irls_counterexample().instance));
        const struct { Index m, n; std::uint64_t seed; } integer_picks[] = {
            {2, 4, 1}, {2, 4, 3}, {2, 4, 4}, {2, 5, 1}, {2, 6, 1}, {2, 6, 3},
            {3, 5, 1}, {3, 5, 4}, {3, 6, 3}, {3, 7, 2}, {3, 7, 4}, {3, 8, 4},
            {4, 6, 3}, {4, 7, 4}, {4, 8, 3}, {5, 8, 2}, {6, 9, 3},
        };
        for (const auto& p : integer_picks) {
            out.push_back(converge_with_checks(integer_instance(p.m, p.n, p.seed)));
        }
        for (std::uint64_t seed : {7, 38, 56}) {  // screened: alpha <= 4
            out.push_back(converge_with_checks(
                model::random_instance(2, 4, 1, seed).instance));
        }
        return out;
    }();
    return runs;
}

// ---------------------------------------------------------------------------

Outcome criterion1_counterexample() {
    const auto t0 = std::chrono::steady_clock::now();
    model::CounterexampleStart ce = model::irls_counterexample();
    oracle::OracleResult best = oracle::solve_l1_exact(ce.instance);

    dynamics::StepConfig cfg;
    cfg.variant = dynamics::Variant::irls;
    dynamics::State st = dynamics::default_start(ce.instance, ce.y0, cfg);
    dynamics::State s1 = dynamics::irls_step(ce.instance, st);
    const double chord_after_one = std::abs(s1.y[3]);

    dynamics::State cur = s1;
    for (int k = 1; k < 200; ++k) cur = dynamics::irls_step(ce.instance, cur);
    const double terminal_l1 = cur.y.lpNorm<1>();
    const double elapsed = seconds_since(t0);

    Outcome o;
    o.pass = chord_after_one <= 1e-12 &&
             std::abs(terminal_l1 - 4.0) <= 1e-6 &&
             best.optimal_value == 3.0 && best.unique && elapsed < 1.0;
    std::ostringstream d;
    d << "|y_chord| after one step " << chord_after_one << ", terminal l1 "
      << terminal_l1 << " vs oracle " << best.optimal_value << " ("
      << (best.unique ? "unique" : "non-unique") << "), " << elapsed << " s";
    o.detail = d.str();
    return o;
}

Outcome criterion2_convergence() {
    const auto& runs = convergence_suite();
    Outcome o;
    int within_cap = 0;
    double slowest = 0.0;
    std::string notes;
    for (const auto& r : runs) {
        slowest = std::max(slowest, r.seconds);
        if (r.within_cap && r.seconds < 60.0) {
            ++within_cap;
        } else if (r.within_10x && r.seconds < 60.0) {
            o.pass = false;  // calibration note, not a pass
            notes += " [calibration note: " + r.id + " converged at " +
                     std::to_string(r.iters) + " > cap " + std::to_string(r.cap) +
                     " but within 10x]";
        } else {
            o.pass = false;
            notes += " [" + r.id + " failed to converge within 10x cap / 60 s]";
        }
    }
    std::ostringstream d;
    d << within_cap << "/" << runs.size()
      << " runs within the constant-64 budget, slowest " << slowest << " s"
      << notes;
    o.detail = d.str();
    return o;
}

Outcome criterion3_lemma_suite() {
    const auto& runs = convergence_suite();
    Outcome o;
    std::int64_t steps = 0;
    int norm_drop = 0, barrier = 0, ratio = 0, energy = 0, sandwich = 0;
    for (const auto& r : runs) {
        steps += r.steps_checked;
        norm_drop += r.fail_norm_drop;
        barrier += r.fail_barrier;
        ratio += r.fail_ratio;
        energy += r.fail_energy;
        sandwich += r.fail_sandwich;
    }
    o.pass = norm_drop + barrier + ratio + energy + sandwich == 0;
    std::ostringstream d;
    d << "violations over " << steps << " steps / " << runs.size()
      << " runs: norm-drop " << norm_drop << ", barrier " << barrier
      << ", ratio " << ratio << ", energy " << energy << ", sandwich "
      << sandwich;
    o.detail = d.str();
    return o;
}

Outcome criterion4_equivalence() {
    const struct { Index m, n, s; } dims[] = {
        {3, 6, 2}, {4, 8, 2}, {2, 5, 1}, {5, 10, 3}};
    Outcome o;
    double worst_irls = 0.0, worst_damped = 0.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto& d = dims[seed % 4];
        model::RandomInstance r = model::random_instance(d.m, d.n, d.s, seed);

        // A feasible start off the canonical ones: planted plus a seeded
        // kernel perturbation.
        Eigen::FullPivLU<Matrix> lu(r.instance.A);
        Matrix kernel = lu.kernel();
        std::mt19937_64 rng(1000 + seed);
        std::normal_distribution<double> gauss(0.0, 0.5);
        Vector c(kernel.cols());
        for (Index i = 0; i < c.size(); ++i) c[i] = gauss(rng);
        Vector y0 = r.planted + kernel * c;

        // IRLS vs the kernel at h = 1 from w = |y0|: same y-sequence.
        dynamics::StepConfig full;
        full.variant = dynamics::Variant::unified;
        full.h = 1.0;
        dynamics::State a = dynamics::make_state(r.instance, y0, y0.cwiseAbs());
        dynamics::State b = a;
        for (int k = 0; k < 10; ++k) {
            a = dynamics::unified_step(r.instance, a, full);
            b = dynamics::irls_step(r.instance, b);
            worst_irls = std::max(
                worst_irls, (a.y - b.y).lpNorm<Eigen::Infinity>());
        }

        // Damped stepper vs the kernel at h = 0.3: same w-sequence.
        dynamics::StepConfig damped;
        damped.variant = dynamics::Variant::unified;
        damped.h = 0.3;
        dynamics::State p = dynamics::make_state(
            r.instance, y0, Vector(y0.cwiseAbs().array() + 1.0));
        dynamics::State u = p;
        for (int k = 0; k < 50; ++k) {
            u = dynamics::unified_step(r.instance, u, damped);
            p = dynamics::physarum_step(r.instance, p, 0.3);
            worst_damped = std::max(
                worst_damped, (u.w - p.w).lpNorm<Eigen::Infinity>());
        }
    }
    o.pass = worst_irls <= 1e-10 && worst_damped <= 1e-12;
    std::ostringstream d;
    d << "50 pairs: max |y_irls - y_unified| = " << worst_irls
      << ", max |w_physarum - w_unified| = " << worst_damped;
    o.detail = d.str();
    return o;
}

Outcome criterion5_alternate_minimization() {
    const struct { Index m, n, s; } dims[] = {{3, 6, 2}, {4, 8, 2}};
    Outcome o;
    std::int64_t steps_checked = 0;
    double worst_identity = 0.0;
    int monotone_violations = 0;
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const auto& d = dims[seed % 2];
        model::RandomInstance r = model::random_instance(d.m, d.n, d.s, seed);
        dynamics::StepConfig cfg;
        cfg.variant = dynamics::Variant::irls;
        dynamics::State st = dynamics::default_start(
            r.instance, dynamics::least_squares_solution(r.instance), cfg);

        double prev_l1 = st.y.lpNorm<1>();
        for (int k = 0; k < 25; ++k) {
            const bool full_support =
                (st.w.array() > 0.0).count() == st.w.size();
            if (!full_support) break;  // the identity's hypothesis is gone
            const double j = analysis::j_value(st.y, st.w);
            worst_identity = std::max(
                worst_identity, std::abs(j - 2.0 * st.y.lpNorm<1>()));
            ++steps_checked;

            st = dynamics::irls_step(r.instance, st);
            const double l1 = st.y.lpNorm<1>();
            if (st.k >= 2 && l1 > prev_l1 + 1e-9) ++monotone_violations;
            prev_l1 = l1;
        }
    }
    o.pass = worst_identity <= 1e-9 && monotone_violations == 0 &&
             steps_checked >= 100;
    std::ostringstream d;
    d << steps_checked << " full-support steps: max |J - 2||y||_1| = "
      << worst_identity << ", l1 increases after k=1: " << monotone_violations;
    o.detail = d.str();
    return o;
}

Outcome criterion6_oracle_cross_validation() {
    Outcome o;

    // Graphs whose shortest source-sink path is unique: the oracle value
    // must equal the BFS length exactly. Graphs with ties are excluded by
    // the census itself, not by hand.
    std::vector<model::GraphSpec> graphs;
    graphs.push_back(model::counterexample_graph());
    {
        model::GraphSpec path4;  // 0-1-2-3
        path4.vertex_count = 4;
        path4.edges = {{0, 1}, {1, 2}, {2, 3}};
        path4.source = 0;
        path4.sink = 3;
        graphs.push_back(path4);
    }
    {
        model::GraphSpec edge;  // single edge
        edge.vertex_count = 2;
        edge.edges = {{0, 1}};
        edge.source = 0;
        edge.sink = 1;
        graphs.push_back(edge);
    }
    {
        model::GraphSpec spur;  // 0-1-2 with a dead-end branch at 1
        spur.vertex_count = 4;
        spur.edges = {{0, 1}, {1, 2}, {1, 3}};
        spur.source = 0;
        spur.sink = 2;
        graphs.push_back(spur);
    }
    {
        model::GraphSpec shortcut;  // square plus a direct diagonal
        shortcut.vertex_count = 4;
        shortcut.edges = {{0, 1}, {1, 2}, {0, 3}, {3, 2}, {0, 2}};
        shortcut.source = 0;
        shortcut.sink = 2;
        graphs.push_back(shortcut);
    }
    {
        model::GraphSpec hexagon;  // 6-cycle, sink two hops away
        hexagon.vertex_count = 6;
        hexagon.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}};
        hexagon.source = 0;
        hexagon.sink = 2;
        graphs.push_back(hexagon);
    }
    {
        model::GraphSpec square;  // two equal routes: census excludes it
        square.vertex_count = 4;
        square.edges = {{0, 1}, {1, 2}, {0, 3}, {3, 2}};
        square.source = 0;
        square.sink = 2;
        graphs.push_back(square);
    }

    int unique_graphs = 0, exact_matches = 0;
    for (const auto& g : graphs) {
        oracle::PathCensus census = oracle::bfs_shortest_path(g);
        if (census.path_count != 1) continue;
        ++unique_graphs;
        oracle::OracleResult res =
            oracle::solve_l1_exact(model::build_graph_instance(g));
        if (res.optimal_value == static_cast<double>(census.length)) {
            ++exact_matches;
        }
    }

    // Random instances: no feasible probe may undercut the oracle.
    const struct { Index m, n, s; } dims[] = {
        {2, 5, 1}, {3, 6, 2}, {4, 8, 2}, {5, 8, 2}, {3, 7, 1}};
    int probe_violations = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto& d = dims[seed % 5];
        model::RandomInstance r = model::random_instance(d.m, d.n, d.s, seed);
        oracle::OracleResult res = oracle::solve_l1_exact(r.instance);
        Eigen::FullPivLU<Matrix> lu(r.instance.A);
        Matrix kernel = lu.kernel();
        std::mt19937_64 rng(500 + seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int t = 0; t < 100; ++t) {
            Vector c(kernel.cols());
            for (Index i = 0; i < c.size(); ++i) c[i] = gauss(rng);
            Vector probe = res.optimizer + kernel * c;
            if (probe.lpNorm<1>() < res.optimal_value - 1e-9) {
                ++probe_violations;
            }
        }
    }

    o.pass = unique_graphs >= 6 && exact_matches == unique_graphs &&
             probe_violations == 0;
    std::ostringstream d;
    d << exact_matches << "/" << unique_graphs
      << " unique-shortest-path graphs match the census exactly; "
      << probe_violations << "/2000 probes undercut the oracle";
    o.detail = d.str();
    return o;
}

Outcome criterion7_regularized_baseline() {
    model::CounterexampleStart ce = model::irls_counterexample();
    const double eta = 0.01;
    const double n_eta = static_cast<double>(ce.instance.cols()) * eta;

    dynamics::StepConfig cfg;
    cfg.variant = dynamics::Variant::regularized_irls;
    cfg.eta = eta;
    dynamics::State st = dynamics::default_start(ce.instance, ce.y0, cfg);

    auto smoothed = [&](const Vector& y) {
        return ((y.array().square() + eta * eta).sqrt()).sum();
    };

    Outcome o;
    double min_chord = std::abs(st.y[3]);
    int smoothed_increases = 0, sandwich_violations = 0;
    double prev = smoothed(st.y);
    for (int k = 0; k < 100; ++k) {
        st = dynamics::regularized_irls_step(ce.instance, st, eta);
        min_chord = std::min(min_chord, std::abs(st.y[3]));
        const double s = smoothed(st.y);
        if (s > prev + 1e-9) ++smoothed_increases;
        prev = s;
        const double l1 = st.y.lpNorm<1>();
        if (!(l1 <= s + 1e-9 && s <= l1 + n_eta + 1e-9)) ++sandwich_violations;
    }
    o.pass = min_chord > 0.0 && smoothed_increases == 0 &&
             sandwich_violations == 0;
    std::ostringstream d;
    d << "min |y_chord| over 100 steps = " << min_chord
      << ", smoothed-objective increases: " << smoothed_increases
      << ", sandwich violations: " << sandwich_violations;
    o.detail = d.str();
    return o;
}

Outcome criterion8_alpha_bound() {
    Outcome o;
    const double a2 = analysis::compute_alpha(Matrix::Identity(2, 2));
    const double a5 = analysis::compute_alpha(Matrix::Identity(5, 5));
    const double a_inc = analysis::compute_alpha(
        model::build_graph_instance(model::counterexample_graph()).A);

    const struct { Index m, n; std::uint64_t seed; } picks[] = {
        {2, 4, 21}, {2, 5, 22}, {3, 5, 23}, {3, 6, 24}, {3, 7, 25},
        {4, 6, 26}, {4, 7, 27}, {4, 8, 28}, {5, 8, 29}, {5, 9, 30},
    };
    double worst_margin = std::numeric_limits<double>::infinity();
    for (const auto& p : picks) {
        model::Instance inst = integer_instance(p.m, p.n, p.seed);
        const double alpha = analysis::compute_alpha(inst.A);
        std::mt19937_64 rng(p.seed * 13 + 1);
        std::uniform_real_distribution<double> unit(0.05, 5.0);
        for (int t = 0; t < 20; ++t) {
            Vector w(inst.cols());
            for (Index i = 0; i < w.size(); ++i) w[i] = unit(rng);
            linalg::WeightedGram gram(inst.A, w);
            for (Index i = 0; i < inst.cols(); ++i) {
                for (Index j = 0; j < inst.cols(); ++j) {
                    const double prod =
                        std::abs(gram.bilinear(inst.A.col(i), inst.A.col(j))) *
                        w[i];
                    worst_margin = std::min(worst_margin, alpha - prod);
                }
            }
        }
    }

    o.pass = a2 == 1.0 && a5 == 1.0 && a_inc == 1.0 && worst_margin >= -1e-9;
    std::ostringstream d;
    d << "alpha(I2)=" << a2 << ", alpha(I5)=" << a5
      << ", alpha(incidence)=" << a_inc
      << "; min (alpha - |a_i' L^-1 a_j| w_i) over 10 matrices x 20 weights = "
      << worst_margin;
    o.detail = d.str();
    return o;
}

} // namespace

int main() {
    const struct {
        int number;
        const char* name;
        Outcome (*fn)();
    } criteria[] = {
        {1, "counterexample reproduction", criterion1_counterexample},
        {2, "damped convergence within budget", criterion2_convergence},
        {3, "per-step lemma suite", criterion3_lemma_suite},
        {4, "variant equivalence", criterion4_equivalence},
        {5, "alternate-minimization identity", criterion5_alternate_minimization},
        {6, "oracle cross-validation", criterion6_oracle_cross_validation},
        {7, "regularized baseline", criterion7_regularized_baseline},
        {8, "alpha bound", criterion8_alpha_bound},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        if (!o.pass) ++failures;
        std::printf("[%s] criterion %d: %s — %s\n", o.pass ? "PASS" : "FAIL",
                    c.number, c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures;
}
