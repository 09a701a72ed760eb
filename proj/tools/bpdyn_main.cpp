// Command-line front end: load or generate instances, run any variant,
// compute alpha and the exact oracle, and emit traces and sweep tables.
//
// Exit codes: 0 success, 2 usage or input error, 3 numeric or terminal
// diagnostic (support collapse, enumeration budgets, kernel failures).

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bpdyn/analysis.hpp"
#include "bpdyn/dynamics.hpp"
#include "bpdyn/errors.hpp"
#include "bpdyn/model.hpp"
#include "bpdyn/oracle.hpp"
#include "bpdyn/runner.hpp"
#include "bpdyn/trace.hpp"

namespace {

using namespace bpdyn;

std::string render(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Shared instance-source flags: exactly one of an explicit instance file,
// a graph file, or a seeded random generator.
struct SourceOpts {
    std::string instance_path;
    std::string graph_path;
    std::vector<std::int64_t> random_dims;  // m n sparsity
    std::uint64_t seed = 0;

    void attach(CLI::App* cmd) {
        auto* inst = cmd->add_option("--instance", instance_path,
                                     "Instance file (.bpinst)");
        auto* graph = cmd->add_option("--graph", graph_path,
                                      "Graph file (.bpgraph), unit source-sink flow");
        auto* random = cmd->add_option("--random", random_dims,
                                       "Random Gaussian instance: m n sparsity")
                           ->expected(3);
        cmd->add_option("--seed", seed, "Seed for --random");
        inst->excludes(graph)->excludes(random);
        graph->excludes(random);
    }

    model::Instance load() const {
        const int given = (!instance_path.empty() ? 1 : 0) +
                          (!graph_path.empty() ? 1 : 0) +
                          (!random_dims.empty() ? 1 : 0);
        if (given != 1) {
            throw InvalidArgument("exactly one of --instance, --graph, --random is required");
        }
        if (!instance_path.empty()) return model::read_instance(instance_path);
        if (!graph_path.empty()) {
            return model::build_graph_instance(model::read_graph(graph_path));
        }
        return model::random_instance(random_dims[0], random_dims[1], random_dims[2], seed)
            .instance;
    }
};

Vector read_start_file(const std::string& path, Index n) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    Vector y(n);
    for (Index i = 0; i < n; ++i) {
        if (!(in >> y[i])) throw IoError("start file needs " + std::to_string(n) +
                                         " values: " + path);
    }
    return y;
}

Vector resolve_start(const std::string& start, const model::Instance& inst) {
    if (start == "least-squares") {
        return dynamics::least_squares_solution(inst);
    }
    if (start == "figure2") {
        model::CounterexampleStart ce = model::irls_counterexample();
        if (!inst.graph || !(*inst.graph == model::counterexample_graph())) {
            throw InvalidArgument("--start figure2 only applies to the bundled "
                                  "counterexample network");
        }
        return ce.y0;
    }
    if (start.rfind("file:", 0) == 0) {
        return read_start_file(start.substr(5), inst.cols());
    }
    throw InvalidArgument("--start must be least-squares, figure2, or file:<path>");
}

dynamics::Variant parse_variant(const std::string& name) {
    if (name == "irls") return dynamics::Variant::irls;
    if (name == "physarum") return dynamics::Variant::physarum;
    if (name == "unified") return dynamics::Variant::unified;
    if (name == "reg-irls") return dynamics::Variant::regularized_irls;
    throw InvalidArgument("unknown variant: " + name);
}

struct SolveOpts {
    SourceOpts source;
    std::string variant = "irls";
    std::optional<double> h;
    std::optional<double> eps;
    double eta = 0.01;
    bool theorem_h = false;
    std::optional<double> alpha_override;
    std::int64_t max_iter = 1000;
    std::string out_json;
    std::string out_csv;
    std::string start = "least-squares";
};

int run_solve(const SolveOpts& opt) {
    model::Instance inst = opt.source.load();

    dynamics::StepConfig cfg;
    cfg.variant = parse_variant(opt.variant);
    cfg.eta = opt.eta;

    // Oracle and alpha feed the stopping target and the lemma checks;
    // both degrade gracefully when their enumeration budgets are blown.
    dynamics::Diagnostics diag;
    diag.eps = opt.eps;
    try {
        diag.oracle = oracle::solve_l1_exact(inst);
    } catch (const TooLargeForOracle& e) {
        std::cerr << "note: oracle skipped: " << e.what() << "\n";
    }
    if (opt.alpha_override) {
        diag.alpha = *opt.alpha_override;
    } else if (opt.eps || opt.theorem_h) {
        try {
            diag.alpha = analysis::compute_alpha(inst.A);
        } catch (const TooLargeForExactAlpha& e) {
            if (opt.theorem_h) throw;  // h derivation cannot proceed
            std::cerr << "note: alpha skipped: " << e.what() << "\n";
        }
    }

    if (opt.theorem_h) {
        if (!opt.eps) throw InvalidArgument("--theorem-h requires --eps");
        cfg.h = dynamics::theorem_step_size(inst, *opt.eps, *diag.alpha);
    } else if (opt.h) {
        cfg.h = *opt.h;
    } else {
        cfg.h = cfg.variant == dynamics::Variant::physarum ? 0.1 : 1.0;
    }

    dynamics::State start =
        dynamics::default_start(inst, resolve_start(opt.start, inst), cfg);

    dynamics::StoppingRule stop;
    stop.max_iter = opt.max_iter;
    if (diag.oracle && opt.eps) {
        stop.target_l1_w = (1.0 + *opt.eps) * diag.oracle->optimal_value;
    }

    trace::Trace t = dynamics::run(inst, start, cfg, stop, diag);
    if (!opt.out_json.empty()) trace::write_json(t, opt.out_json);
    if (!opt.out_csv.empty()) trace::write_csv(t, opt.out_csv);

    std::cout << "instance: " << inst.id << "\n";
    std::cout << "variant: " << opt.variant << " h=" << render(cfg.h) << "\n";
    const char* kind = "";
    switch (t.terminal_status.kind) {
        case trace::TerminalKind::max_iter: kind = "max_iter"; break;
        case trace::TerminalKind::target_reached: kind = "target_reached"; break;
        case trace::TerminalKind::support_collapse: kind = "support_collapse"; break;
        case trace::TerminalKind::kernel_error: kind = "kernel_error"; break;
    }
    std::cout << "terminal: " << kind;
    if (!t.terminal_status.message.empty()) {
        std::cout << " (" << t.terminal_status.message << ")";
    }
    std::cout << "\n";
    if (!t.rows.empty()) {
        const auto& last = t.rows.back();
        std::cout << "final: k=" << last.k << " l1_y=" << render(last.l1_y)
                  << " l1_w=" << render(last.l1_w) << "\n";
    }
    if (diag.oracle) {
        std::cout << "oracle: optimal " << render(diag.oracle->optimal_value) << ", "
                  << (diag.oracle->unique ? "unique" : "non-unique") << "\n";
    }

    const bool diagnostic_exit =
        t.terminal_status.kind == trace::TerminalKind::support_collapse ||
        t.terminal_status.kind == trace::TerminalKind::kernel_error;
    return diagnostic_exit ? 3 : 0;
}

int run_oracle(const SourceOpts& source) {
    model::Instance inst = source.load();
    oracle::OracleResult res = oracle::solve_l1_exact(inst);
    std::cout << "optimal " << render(res.optimal_value) << ", "
              << (res.unique ? "unique" : "non-unique") << "\n";
    return 0;
}

int run_alpha(const SourceOpts& source) {
    model::Instance inst = source.load();
    std::cout << render(analysis::compute_alpha(inst.A)) << "\n";
    return 0;
}

int run_appendix_a(const std::string& dir) {
    model::CounterexampleStart ce = model::irls_counterexample();
    const std::string graph_path = dir + "/appendix_a.bpgraph";
    const std::string inst_path = dir + "/appendix_a.bpinst";
    const std::string start_path = dir + "/appendix_a_start.txt";

    model::write_graph(model::counterexample_graph(), graph_path);
    model::write_instance(ce.instance, inst_path);
    std::ofstream start(start_path);
    if (!start) throw IoError("cannot open for writing: " + start_path);
    for (Index i = 0; i < ce.y0.size(); ++i) {
        start << (i ? " " : "") << render(ce.y0[i]);
    }
    start << "\n";
    if (!start) throw IoError("write failed: " + start_path);

    std::cout << "wrote " << graph_path << "\n"
              << "wrote " << inst_path << "\n"
              << "wrote " << start_path << "\n";
    return 0;
}

struct SweepOpts {
    SourceOpts source;
    std::vector<double> hs;
    std::vector<double> epss;
    std::int64_t max_iter = 200000;
    std::string out_csv;
};

// One summary row per (h, eps) cell: iterations until ||w||_1 falls to
// (1 + eps) times the oracle optimum, or "timeout" at the cap. Streams
// each cell without keeping a trace, so long runs stay cheap.
int run_sweep(const SweepOpts& opt) {
    model::Instance inst = opt.source.load();
    oracle::OracleResult best = oracle::solve_l1_exact(inst);

    std::ofstream out(opt.out_csv);
    if (!out) throw IoError("cannot open for writing: " + opt.out_csv);
    out << "h,eps,iterations,status\n";
    for (double h : opt.hs) {
        for (double eps : opt.epss) {
            dynamics::StepConfig cfg;
            cfg.variant = dynamics::Variant::physarum;
            cfg.h = h;
            dynamics::State st =
                dynamics::default_start(inst, dynamics::least_squares_solution(inst), cfg);
            const double target = (1.0 + eps) * best.optimal_value;

            std::int64_t reached = -1;
            for (std::int64_t k = 0; k <= opt.max_iter; ++k) {
                if (st.w.lpNorm<1>() <= target) {
                    reached = k;
                    break;
                }
                st = dynamics::advance(inst, st, cfg).state;
            }
            out << render(h) << ',' << render(eps) << ',';
            if (reached >= 0) {
                out << reached << ",ok\n";
            } else {
                out << opt.max_iter << ",timeout\n";
            }
        }
    }
    if (!out) throw IoError("write failed: " + opt.out_csv);
    std::cout << "wrote " << opt.out_csv << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unified IRLS/damped-flow dynamics for basis pursuit"};
    app.require_subcommand(1);
    // The step-size option is spelled --h, so help must not claim -h.
    app.set_help_flag("--help", "Print help");

    SolveOpts solve_opts;
    auto* solve = app.add_subcommand("solve", "Run a variant and record a trace");
    solve->set_help_flag("--help", "Print help");
    solve_opts.source.attach(solve);
    solve->add_option("--variant", solve_opts.variant, "irls | physarum | unified | reg-irls")
        ->check(CLI::IsMember({"irls", "physarum", "unified", "reg-irls"}));
    auto* h_opt = solve->add_option("--h", solve_opts.h, "Step size in (0, 1]");
    solve->add_option("--eps", solve_opts.eps, "Accuracy parameter");
    solve->add_option("--eta", solve_opts.eta, "Regularization for reg-irls");
    auto* th_opt = solve->add_flag("--theorem-h", solve_opts.theorem_h,
                                   "Derive h from the step-size rule (needs --eps)");
    th_opt->excludes(h_opt);
    solve->add_option("--alpha", solve_opts.alpha_override,
                      "Override the instance constant alpha");
    solve->add_option("--max-iter", solve_opts.max_iter, "Iteration cap");
    solve->add_option("--out", solve_opts.out_json, "Write the full trace (JSON)");
    solve->add_option("--csv", solve_opts.out_csv, "Write the per-step summary (CSV)");
    solve->add_option("--start", solve_opts.start,
                      "least-squares | figure2 | file:<path>");

    SourceOpts oracle_source;
    auto* oracle_cmd = app.add_subcommand("oracle", "Exact l1 optimum by enumeration");
    oracle_source.attach(oracle_cmd);

    SourceOpts alpha_source;
    auto* alpha_cmd = app.add_subcommand("alpha", "Instance constant alpha");
    alpha_source.attach(alpha_cmd);

    std::string appendix_dir = ".";
    auto* appendix = app.add_subcommand(
        "appendix-a", "Emit the bundled counterexample network and start point");
    appendix->add_option("--dir", appendix_dir, "Output directory");

    SweepOpts sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "Grid over h and eps, one CSV row per cell");
    sweep->set_help_flag("--help", "Print help");
    sweep_opts.source.attach(sweep);
    sweep->add_option("--h", sweep_opts.hs, "Step sizes (repeatable)")->required();
    sweep->add_option("--eps", sweep_opts.epss, "Accuracies (repeatable)")->required();
    sweep->add_option("--max-iter", sweep_opts.max_iter, "Per-cell iteration cap");
    sweep->add_option("--csv", sweep_opts.out_csv, "Summary table path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) return run_solve(solve_opts);
        if (oracle_cmd->parsed()) return run_oracle(oracle_source);
        if (alpha_cmd->parsed()) return run_alpha(alpha_source);
        if (appendix->parsed()) return run_appendix_a(appendix_dir);
        if (sweep->parsed()) return run_sweep(sweep_opts);
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const BadEpsilon& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const RankDeficient& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DisconnectedInstance& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NonFiniteInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        // Numeric and budget diagnostics: oversize enumerations, support
        // collapse surfaced outside a trace, weight violations.
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
