#include "bpdyn/oracle.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "bpdyn/detail/combinations.hpp"
#include "bpdyn/errors.hpp"

namespace bpdyn::oracle {

namespace {

using detail::binomial;
using detail::first_combination;
using detail::next_combination;

constexpr double kEnumerationBudget = 1e6;
constexpr double kFeasibilityTol = 1e-9;
constexpr double kValueTie = 1e-9;
constexpr double kOptimizerTie = 1e-9;

// Visits every feasible basic solution of [A, -A] z = b, z >= 0, mapped
// back to x-space. Degenerate (singular) bases are skipped.
template <typename Callback>
std::uint64_t for_each_basic_solution(const model::Instance& inst, Callback&& visit) {
    const Index m = inst.rows();
    const Index n = inst.cols();
    std::vector<Index> basis = first_combination(m);

    std::uint64_t examined = 0;
    Matrix B(m, m);
    Vector x(n);
    do {
        ++examined;
        for (Index c = 0; c < m; ++c) {
            const Index j = basis[static_cast<std::size_t>(c)];
            // Split-variable column j < n is A.col(j); j >= n is -A.col(j-n).
            B.col(c) = j < n ? Vector(inst.A.col(j)) : Vector(-inst.A.col(j - n));
        }
        Eigen::FullPivLU<Matrix> lu(B);
        if (!lu.isInvertible()) continue;
        Vector z = lu.solve(inst.b);
        if ((z.array() < -kFeasibilityTol).any()) continue;

        x.setZero();
        for (Index c = 0; c < m; ++c) {
            const Index j = basis[static_cast<std::size_t>(c)];
            if (j < n) {
                x[j] += z[c];
            } else {
                x[j - n] -= z[c];
            }
        }
        visit(x);
    } while (next_combination(basis, 2 * n));
    return examined;
}

} // namespace

OracleResult solve_l1_exact(const model::Instance& inst) {
    const Index m = inst.rows();
    const Index n = inst.cols();
    if (binomial(2 * n, m) > kEnumerationBudget) {
        throw TooLargeForOracle("basis count C(" + std::to_string(2 * n) + "," +
                                std::to_string(m) + ") exceeds the enumeration budget");
    }

    // First sweep: the exact minimum over feasible basic solutions.
    double min_value = std::numeric_limits<double>::infinity();
    OracleResult best;
    best.bases_examined = for_each_basic_solution(inst, [&](const Vector& x) {
        min_value = std::min(min_value, x.lpNorm<1>());
    });
    if (!std::isfinite(min_value)) {
        // make_instance certifies reachability, so a feasible basic
        // solution must exist; reaching here means the instance bypassed
        // validation.
        throw InfeasibleOnSupport("no feasible basic solution found");
    }

    // Second sweep: representative optimizer plus uniqueness within the
    // tie tolerance, deduplicated in the max norm.
    std::vector<Vector> optima;
    for_each_basic_solution(inst, [&](const Vector& x) {
        if (x.lpNorm<1>() > min_value + kValueTie || optima.size() >= 2) return;
        for (const Vector& seen : optima) {
            if ((x - seen).lpNorm<Eigen::Infinity>() <= kOptimizerTie) return;
        }
        optima.push_back(x);
    });

    best.optimal_value = min_value;
    best.optimizer = optima.front();
    best.unique = optima.size() == 1;
    return best;
}

PathCensus bfs_shortest_path(const model::GraphSpec& g) {
    // Structure only: an unreachable sink is a census result (-1), not an
    // input error here.
    g.validate_structure();
    std::vector<std::vector<Index>> adj(static_cast<std::size_t>(g.vertex_count));
    for (const auto& [u, v] : g.edges) {
        adj[static_cast<std::size_t>(u)].push_back(v);
        adj[static_cast<std::size_t>(v)].push_back(u);
    }

    std::vector<Index> dist(static_cast<std::size_t>(g.vertex_count), -1);
    std::vector<std::uint64_t> count(static_cast<std::size_t>(g.vertex_count), 0);
    dist[static_cast<std::size_t>(g.source)] = 0;
    count[static_cast<std::size_t>(g.source)] = 1;
    std::deque<Index> queue{g.source};
    while (!queue.empty()) {
        const Index u = queue.front();
        queue.pop_front();
        for (Index v : adj[static_cast<std::size_t>(u)]) {
            auto& dv = dist[static_cast<std::size_t>(v)];
            if (dv < 0) {
                dv = dist[static_cast<std::size_t>(u)] + 1;
                count[static_cast<std::size_t>(v)] = count[static_cast<std::size_t>(u)];
                queue.push_back(v);
            } else if (dv == dist[static_cast<std::size_t>(u)] + 1) {
                count[static_cast<std::size_t>(v)] += count[static_cast<std::size_t>(u)];
            }
        }
    }

    PathCensus census;
    census.length = dist[static_cast<std::size_t>(g.sink)];
    census.path_count = count[static_cast<std::size_t>(g.sink)];
    return census;
}

} // namespace bpdyn::oracle
