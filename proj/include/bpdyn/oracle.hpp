#pragma once

// Independent ground truth for min ||x||_1 s.t. Ax = b: brute-force
// enumeration of the basic feasible solutions of the split LP
//
//   min 1'x+ + 1'x-   s.t.  [A, -A] (x+; x-) = b,  x+, x- >= 0,
//
// for desk-scale instances. Deliberately shares no algorithmic idea with
// the iterative solvers it validates. A breadth-first shortest-path census
// acts as a second, equally independent oracle for graph instances.

#include <cstdint>

#include "bpdyn/model.hpp"
#include "bpdyn/types.hpp"

namespace bpdyn::oracle {

struct OracleResult {
    double optimal_value = 0.0;
    Vector optimizer;              // arg min, mapped back to x-space
    bool unique = false;           // exactly one optimal x within tolerance
    std::uint64_t bases_examined = 0;
};

// Enumerates all m-column bases of [A, -A] (C(2n, m) of them; throws
// TooLargeForOracle beyond 10^6), solves each square system, keeps
// candidates whose split variables are >= -1e-9, and returns the feasible
// point of minimum l1 norm. `unique` is true iff all optimal bases map to
// the same x within 1e-9 in the max norm.
OracleResult solve_l1_exact(const model::Instance& inst);

struct PathCensus {
    Index length = -1;             // -1 when sink is unreachable
    std::uint64_t path_count = 0;  // number of distinct shortest paths
};

// Unweighted shortest source-sink path in the undirected sense, with a
// count of how many shortest paths exist. For unit s-t flow instances the
// shortest-path length equals the optimal l1 value, and a count of one
// certifies uniqueness.
PathCensus bfs_shortest_path(const model::GraphSpec& g);

} // namespace bpdyn::oracle
