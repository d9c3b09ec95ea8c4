#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <algorithm>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "specpart/common.hpp"

namespace specpart {

template <class Scalar>
struct Edge {
    Index u = 0;
    Index v = 0;
    Scalar weight = Scalar(1);
};

/// Undirected weighted graph. Immutable after construction; the adjacency
/// matrix is symmetric with both triangles stored so column iteration gives
/// full neighborhoods.
template <class Scalar>
class Graph {
public:
    Graph() = default;

    /// Builds a graph on `n` vertices from an undirected edge list.
    /// Rejects self-loops, out-of-range endpoints, non-positive weights and
    /// duplicate edges (in either orientation).
    static Graph from_edges(Index n, std::vector<Edge<Scalar>> edges) {
        if (n < 1) throw std::invalid_argument("graph needs at least one vertex");
        std::unordered_set<std::uint64_t> seen;
        seen.reserve(edges.size() * 2);
        for (auto& e : edges) {
            if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
                throw std::invalid_argument("edge endpoint out of range");
            if (e.u == e.v)
                throw std::invalid_argument("self-loop on vertex " + std::to_string(e.u));
            if (!(e.weight > Scalar(0)))
                throw std::invalid_argument("edge weight must be strictly positive");
            if (e.u > e.v) std::swap(e.u, e.v);
            const std::uint64_t key =
                (static_cast<std::uint64_t>(e.u) << 32) | static_cast<std::uint64_t>(e.v);
            if (!seen.insert(key).second)
                throw std::invalid_argument("duplicate edge " + std::to_string(e.u) + "-" +
                                            std::to_string(e.v));
        }
        Graph g;
        g.n_ = n;
        g.edges_ = std::move(edges);
        g.build_adjacency();
        return g;
    }

    Index n() const { return n_; }
    Index edge_count() const { return static_cast<Index>(edges_.size()); }
    const std::vector<Edge<Scalar>>& edges() const { return edges_; }
    const Eigen::SparseMatrix<Scalar>& adjacency() const { return adjacency_; }

    /// Weighted degrees d_i = sum_j A_ij.
    const Vector<Scalar>& degrees() const { return degrees_; }

    Scalar total_weight() const { return degrees_.sum() / Scalar(2); }

private:
    void build_adjacency() {
        std::vector<Eigen::Triplet<Scalar>> triplets;
        triplets.reserve(edges_.size() * 2);
        for (const auto& e : edges_) {
            triplets.emplace_back(e.u, e.v, e.weight);
            triplets.emplace_back(e.v, e.u, e.weight);
        }
        adjacency_.resize(n_, n_);
        adjacency_.setFromTriplets(triplets.begin(), triplets.end());
        degrees_ = adjacency_ * Vector<Scalar>::Ones(n_);
    }

    Index n_ = 0;
    std::vector<Edge<Scalar>> edges_;
    Eigen::SparseMatrix<Scalar> adjacency_;
    Vector<Scalar> degrees_;
};

using Graphd = Graph<double>;

/// A division of the vertices into k groups.
template <class Scalar>
struct Partition {
    std::vector<int> assignment;  // per-vertex group index in 0..k-1
    int k = 0;
    std::vector<Index> sizes;  // realized group sizes
    Scalar cut = Scalar(0);
};

using Partitiond = Partition<double>;

/// Total weight of edges whose endpoints lie in different groups.
template <class Scalar>
Scalar cut_size(const Graph<Scalar>& g, const std::vector<int>& assignment, int k) {
    if (static_cast<Index>(assignment.size()) != g.n())
        throw std::invalid_argument("assignment length does not match vertex count");
    for (int a : assignment)
        if (a < 0 || a >= k) throw std::invalid_argument("group index out of range");
    Scalar cut = Scalar(0);
    for (const auto& e : g.edges())
        if (assignment[e.u] != assignment[e.v]) cut += e.weight;
    return cut;
}

template <class Scalar>
Scalar cut_size(const Graph<Scalar>& g, const Partition<Scalar>& p) {
    return cut_size(g, p.assignment, p.k);
}

/// Assembles a Partition from an assignment: realized sizes plus exact cut.
template <class Scalar>
Partition<Scalar> make_partition(const Graph<Scalar>& g, std::vector<int> assignment, int k) {
    Partition<Scalar> p;
    p.cut = cut_size(g, assignment, k);
    p.k = k;
    p.sizes.assign(k, 0);
    for (int a : assignment) ++p.sizes[a];
    p.assignment = std::move(assignment);
    return p;
}

/// Laplacian action Lx = (d_i x_i - sum_j A_ij x_j), column-wise; the dense
/// n-by-n Laplacian is never formed.
template <class Scalar, class Derived>
typename Derived::PlainObject laplacian_apply(const Graph<Scalar>& g,
                                              const Eigen::MatrixBase<Derived>& x) {
    if (x.rows() != g.n()) throw std::invalid_argument("row count does not match vertex count");
    typename Derived::PlainObject out = g.degrees().asDiagonal() * x.derived();
    out -= g.adjacency() * x.derived();
    return out;
}

/// True iff the graph has a single connected component.
template <class Scalar>
bool connected(const Graph<Scalar>& g) {
    const Index n = g.n();
    if (n <= 1) return true;
    std::vector<char> visited(n, 0);
    std::deque<Index> queue{0};
    visited[0] = 1;
    Index reached = 1;
    const auto& adj = g.adjacency();
    while (!queue.empty()) {
        const Index u = queue.front();
        queue.pop_front();
        for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(adj, u); it; ++it) {
            if (!visited[it.index()]) {
                visited[it.index()] = 1;
                ++reached;
                queue.push_back(it.index());
            }
        }
    }
    return reached == n;
}

/// Complete weighted graph on data points with Gaussian affinities
/// A_ij = exp(-|r_i - r_j|^2 / 2 sigma^2). Weights that underflow to zero
/// are omitted.
template <class Scalar>
Graph<Scalar> affinity_graph(const Matrix<Scalar>& points, Scalar sigma) {
    if (!(sigma > Scalar(0))) throw std::invalid_argument("sigma must be positive");
    const Index n = points.rows();
    if (n < 2) throw std::invalid_argument("need at least 2 points");
    std::vector<Edge<Scalar>> edges;
    edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    const Scalar inv = Scalar(1) / (Scalar(2) * sigma * sigma);
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            const Scalar d2 = (points.row(i) - points.row(j)).squaredNorm();
            const Scalar w = std::exp(-d2 * inv);
            if (w > Scalar(0)) edges.push_back({i, j, w});
        }
    }
    return Graph<Scalar>::from_edges(n, std::move(edges));
}

namespace detail {

inline bool blank_or_comment(const std::string& line) {
    const auto pos = line.find_first_not_of(" \t\r\n");
    return pos == std::string::npos || line[pos] == '#';
}

}  // namespace detail

/// Parses "u v [w]" edge-list text. Lines starting with '#' and blank lines
/// are skipped; vertex ids are 0-based; a missing weight means 1.0. The
/// vertex count is 1 + the largest id seen.
template <class Scalar = double>
Graph<Scalar> load_edge_list(std::istream& in) {
    std::vector<Edge<Scalar>> edges;
    std::string line;
    Index max_id = -1;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::blank_or_comment(line)) continue;
        std::istringstream fields(line);
        long long u = 0, v = 0;
        double w = 1.0;
        if (!(fields >> u >> v))
            throw std::invalid_argument("parse error at line " + std::to_string(line_no) +
                                        ": expected 'u v [w]'");
        if (fields >> w) {
            std::string trailing;
            if (fields >> trailing)
                throw std::invalid_argument("parse error at line " + std::to_string(line_no) +
                                            ": trailing token '" + trailing + "'");
        } else if (!fields.eof()) {
            throw std::invalid_argument("parse error at line " + std::to_string(line_no) +
                                        ": bad weight");
        }
        if (u < 0 || v < 0)
            throw std::invalid_argument("parse error at line " + std::to_string(line_no) +
                                        ": negative vertex id");
        if (u == v)
            throw std::invalid_argument("self-loop at line " + std::to_string(line_no));
        if (!(w > 0.0))
            throw std::invalid_argument("non-positive weight at line " + std::to_string(line_no));
        edges.push_back({static_cast<Index>(u), static_cast<Index>(v), static_cast<Scalar>(w)});
        max_id = std::max(max_id, static_cast<Index>(std::max(u, v)));
    }
    if (max_id < 0) throw std::invalid_argument("edge list is empty");
    return Graph<Scalar>::from_edges(max_id + 1, std::move(edges));
}

/// Writes the edge list in the same format load_edge_list reads.
template <class Scalar>
void save_edge_list(std::ostream& out, const Graph<Scalar>& g) {
    const auto precision = out.precision(std::numeric_limits<Scalar>::max_digits10);
    out << "# " << g.n() << " vertices, " << g.edge_count() << " edges\n";
    for (const auto& e : g.edges()) out << e.u << ' ' << e.v << ' ' << e.weight << '\n';
    out.precision(precision);
}

}  // namespace specpart
