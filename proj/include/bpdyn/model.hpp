#pragma once

// Problem instances for min ||x||_1 s.t. Ax = b: explicit (A, b) pairs,
// seeded Gaussian generators with planted sparse solutions, and instances
// derived from graphs through signed incidence matrices.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bpdyn/types.hpp"

namespace bpdyn::model {

enum class Provenance { explicit_instance, random_gaussian, graph };

struct GraphSpec {
    Index vertex_count = 0;
    std::vector<std::pair<Index, Index>> edges;  // (tail, head)
    Index source = 0;
    Index sink = 0;

    // No self-loops, source != sink, indices in range. Throws on violation.
    void validate_structure() const;

    // validate_structure plus: the undirected graph connects source to
    // sink. Throws DisconnectedInstance when it does not.
    void validate() const;

    bool operator==(const GraphSpec&) const = default;
};

struct Instance {
    Matrix A;
    Vector b;
    Provenance provenance = Provenance::explicit_instance;
    std::uint64_t seed = 0;                  // random_gaussian only
    std::optional<GraphSpec> graph;          // graph provenance only
    std::vector<std::string> column_names;   // may be empty
    std::string id;                          // stable label echoed in traces

    Index rows() const { return A.rows(); }
    Index cols() const { return A.cols(); }
};

// Validates rank(A) = m (pivoted QR) and that b is certified reachable
// (least-squares residual <= 1e-8 * (1 + ||b||_inf)). Throws RankDeficient
// or NonFiniteInput.
Instance make_instance(Matrix A, Vector b, std::string id = "explicit");

// Signed incidence matrix (tail -1, head +1) with the highest-index vertex
// row removed to restore full row rank; b is e_sink - e_source restricted
// the same way. Column names are "u<i>-u<j>".
Instance build_graph_instance(const GraphSpec& g);

struct CounterexampleStart {
    Instance instance;
    Vector y0;  // strictly positive feasible start
};

// The 8-vertex network with two length-4 source-sink arcs joined by a
// chord, together with the full-support feasible start that makes the
// first reweighted step drop the chord out of the support for good even
// though the optimal path uses it.
CounterexampleStart irls_counterexample();

// GraphSpec of the instance above (vertices 0..7, nine edges, s=0, t=7).
GraphSpec counterexample_graph();

struct RandomInstance {
    Instance instance;
    Vector planted;  // sparse vector with b = A * planted
};

// A has independent standard-normal entries; planted has `sparsity`
// nonzeros at random positions with magnitudes in [0.5, 2] and random
// signs. Deterministic in the seed.
RandomInstance random_instance(Index m, Index n, Index sparsity, std::uint64_t seed);

// Text formats. Instances (.bpinst): "m n", m rows of n decimals, then one
// row of m decimals for b. Graphs (.bpgraph): "V E s t", then E lines
// "tail head".
void write_instance(const Instance& inst, const std::string& path);
Instance read_instance(const std::string& path);
void write_graph(const GraphSpec& g, const std::string& path);
GraphSpec read_graph(const std::string& path);

} // namespace bpdyn::model
