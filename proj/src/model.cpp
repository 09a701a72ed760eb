#include "bpdyn/model.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <deque>
#include <fstream>
#include <random>
#include <sstream>

#include "bpdyn/errors.hpp"

namespace bpdyn::model {

namespace {

constexpr double kFeasibilityTol = 1e-8;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool source_reaches_sink(const GraphSpec& g) {
    std::vector<std::vector<Index>> adj(static_cast<std::size_t>(g.vertex_count));
    for (const auto& [u, v] : g.edges) {
        adj[static_cast<std::size_t>(u)].push_back(v);
        adj[static_cast<std::size_t>(v)].push_back(u);
    }
    std::vector<char> seen(static_cast<std::size_t>(g.vertex_count), 0);
    std::deque<Index> queue{g.source};
    seen[static_cast<std::size_t>(g.source)] = 1;
    while (!queue.empty()) {
        Index u = queue.front();
        queue.pop_front();
        if (u == g.sink) return true;
        for (Index v : adj[static_cast<std::size_t>(u)]) {
            if (!seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = 1;
                queue.push_back(v);
            }
        }
    }
    return false;
}

} // namespace

void GraphSpec::validate_structure() const {
    if (vertex_count < 2) {
        throw InvalidArgument("graph needs at least two vertices");
    }
    if (source == sink) {
        throw InvalidArgument("source and sink coincide");
    }
    auto in_range = [&](Index v) { return v >= 0 && v < vertex_count; };
    if (!in_range(source) || !in_range(sink)) {
        throw InvalidArgument("source or sink out of range");
    }
    for (const auto& [u, v] : edges) {
        if (!in_range(u) || !in_range(v)) {
            throw InvalidArgument("edge endpoint out of range");
        }
        if (u == v) {
            throw InvalidArgument("self-loops are not allowed");
        }
    }
}

void GraphSpec::validate() const {
    validate_structure();
    if (!source_reaches_sink(*this)) {
        throw DisconnectedInstance("no path between source and sink");
    }
}

Instance make_instance(Matrix A, Vector b, std::string id) {
    if (!A.allFinite() || !b.allFinite()) {
        throw NonFiniteInput("instance data contains NaN or Inf");
    }
    if (A.rows() == 0 || A.cols() == 0) {
        throw InvalidArgument("instance matrix is empty");
    }
    if (b.size() != A.rows()) {
        throw InvalidArgument("right-hand side length does not match row count");
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(A);
    if (qr.rank() < A.rows()) {
        throw RankDeficient("constraint matrix does not have full row rank");
    }
    Vector x = qr.solve(b);
    const double residual = (A * x - b).lpNorm<Eigen::Infinity>();
    if (residual > kFeasibilityTol * (1.0 + b.lpNorm<Eigen::Infinity>())) {
        throw RankDeficient("right-hand side is not certified reachable");
    }
    Instance inst;
    inst.A = std::move(A);
    inst.b = std::move(b);
    inst.id = std::move(id);
    return inst;
}

Instance build_graph_instance(const GraphSpec& g) {
    g.validate();
    const Index V = g.vertex_count;
    const Index E = static_cast<Index>(g.edges.size());

    Matrix full = Matrix::Zero(V, E);
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(E));
    for (Index j = 0; j < E; ++j) {
        const auto& [tail, head] = g.edges[static_cast<std::size_t>(j)];
        full(tail, j) = -1.0;
        full(head, j) = 1.0;
        names.push_back("u" + std::to_string(tail) + "-u" + std::to_string(head));
    }
    Vector b_full = Vector::Zero(V);
    b_full[g.source] = -1.0;
    b_full[g.sink] = 1.0;

    // The incidence rows sum to zero; dropping the highest-index vertex row
    // restores full row rank for a connected graph.
    Instance inst = make_instance(full.topRows(V - 1), b_full.head(V - 1),
                                  "graph:V" + std::to_string(V) + "E" + std::to_string(E));
    inst.provenance = Provenance::graph;
    inst.graph = g;
    inst.column_names = std::move(names);
    return inst;
}

GraphSpec counterexample_graph() {
    GraphSpec g;
    g.vertex_count = 8;
    g.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {0, 4}, {3, 7}};
    g.source = 0;
    g.sink = 7;
    return g;
}

CounterexampleStart irls_counterexample() {
    CounterexampleStart out;
    out.instance = build_graph_instance(counterexample_graph());
    out.instance.id = "graph:irls-counterexample";
    // Unit flow: 3/4 along the long top arc, 1/4 across the chord at each
    // end, 1/2 on the middle edge 3-4. All entries run with the edge
    // orientation, so the start is strictly positive.
    out.y0.resize(9);
    out.y0 << 0.75, 0.75, 0.75, 0.5, 0.75, 0.75, 0.75, 0.25, 0.25;
    return out;
}

RandomInstance random_instance(Index m, Index n, Index sparsity, std::uint64_t seed) {
    if (!(sparsity <= m && m < n) || sparsity < 1) {
        throw InvalidArgument("random_instance requires 1 <= sparsity <= m < n");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix A(m, n);
    for (Index i = 0; i < m; ++i) {
        for (Index j = 0; j < n; ++j) {
            A(i, j) = gauss(rng);
        }
    }

    std::vector<Index> positions(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) positions[static_cast<std::size_t>(j)] = j;
    std::shuffle(positions.begin(), positions.end(), rng);

    std::uniform_real_distribution<double> magnitude(0.5, 2.0);
    std::bernoulli_distribution flip(0.5);
    Vector planted = Vector::Zero(n);
    for (Index s = 0; s < sparsity; ++s) {
        const double value = magnitude(rng);
        planted[positions[static_cast<std::size_t>(s)]] = flip(rng) ? -value : value;
    }

    std::ostringstream id;
    id << "random:m" << m << "n" << n << "s" << sparsity << ":seed" << seed;
    Vector b = A * planted;
    Instance inst = make_instance(std::move(A), std::move(b), id.str());
    inst.provenance = Provenance::random_gaussian;
    inst.seed = seed;
    return RandomInstance{std::move(inst), std::move(planted)};
}

void write_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << inst.rows() << " " << inst.cols() << "\n";
    for (Index i = 0; i < inst.rows(); ++i) {
        for (Index j = 0; j < inst.cols(); ++j) {
            out << (j ? " " : "") << format_double(inst.A(i, j));
        }
        out << "\n";
    }
    for (Index i = 0; i < inst.rows(); ++i) {
        out << (i ? " " : "") << format_double(inst.b[i]);
    }
    out << "\n";
    if (!out) throw IoError("write failed: " + path);
}

Instance read_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    Index m = 0, n = 0;
    if (!(in >> m >> n) || m < 1 || n < 1) {
        throw IoError("bad instance header in " + path);
    }
    Matrix A(m, n);
    for (Index i = 0; i < m; ++i) {
        for (Index j = 0; j < n; ++j) {
            if (!(in >> A(i, j))) {
                throw IoError("truncated matrix in " + path);
            }
        }
    }
    Vector b(m);
    for (Index i = 0; i < m; ++i) {
        if (!(in >> b[i])) {
            throw IoError("truncated right-hand side in " + path);
        }
    }
    return make_instance(std::move(A), std::move(b), "file:" + path);
}

void write_graph(const GraphSpec& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << g.vertex_count << " " << g.edges.size() << " " << g.source << " " << g.sink << "\n";
    for (const auto& [u, v] : g.edges) {
        out << u << " " << v << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

GraphSpec read_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    GraphSpec g;
    std::size_t edge_count = 0;
    if (!(in >> g.vertex_count >> edge_count >> g.source >> g.sink)) {
        throw IoError("bad graph header in " + path);
    }
    g.edges.reserve(edge_count);
    for (std::size_t e = 0; e < edge_count; ++e) {
        Index u = 0, v = 0;
        if (!(in >> u >> v)) {
            throw IoError("truncated edge list in " + path);
        }
        g.edges.emplace_back(u, v);
    }
    g.validate();
    return g;
}

} // namespace bpdyn::model
