#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qopt {

/// One undirected edge in canonical orientation (u < v).
struct Edge {
    int u = 0;
    int v = 0;
    double weight = 1.0;
};

struct Neighbor {
    int to = 0;
    double weight = 1.0;
};

/// Immutable undirected weighted graph.
///
/// Construction canonicalizes every edge to u < v, rejects self-loops,
/// duplicate pairs and out-of-range indices, and keeps edge and neighbor
/// lists sorted by vertex index. Instances are safe for unsynchronized
/// concurrent reads. Connectivity is not enforced anywhere: generated or
/// parsed graphs may consist of several components.
class Graph {
public:
    Graph() = default;
    Graph(int n, std::vector<Edge> edges);

    int vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    /// Edges sorted lexicographically by (u, v); this is the canonical
    /// edge order referenced by repair and report code.
    const std::vector<Edge>& edges() const { return edges_; }

    const std::vector<Neighbor>& neighbors(int v) const { return adjacency_[v]; }
    int degree(int v) const { return static_cast<int>(adjacency_[v].size()); }
    double weighted_degree(int v) const;

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Neighbor>> adjacency_;
};

/// Random d-regular graph via the pairing (configuration) model: d stubs
/// per vertex, one seeded shuffle per attempt, stubs paired sequentially.
/// Attempts producing a self-loop or a multi-edge are discarded and
/// redrawn. Throws std::invalid_argument when n*d is odd or d >= n, and
/// std::runtime_error when the retry budget is exhausted.
Graph random_regular_graph(int n, int d, std::uint64_t seed, int max_attempts = 1000);

/// Gset text format: header "n m", then m lines "i j w" with 1-based
/// vertex indices and signed real weights.
Graph parse_gset(std::string_view text);
std::string to_gset(const Graph& g);

/// Same layout as the Gset format but 0-based; used for persisting
/// generated instances.
Graph parse_edge_list(std::string_view text);
std::string to_edge_list(const Graph& g);

} // namespace qopt
