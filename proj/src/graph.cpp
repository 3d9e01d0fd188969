#include "qopt/graph.hpp"

#include <algorithm>
#include <charconv>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace qopt {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n) {
    if (n < 0) {
        throw std::invalid_argument("graph: vertex count must be non-negative");
    }
    for (Edge& e : edges) {
        if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
            throw std::out_of_range("graph: edge index out of range");
        }
        if (e.u == e.v) {
            throw std::invalid_argument("graph: self-loop rejected");
        }
        if (e.u > e.v) {
            std::swap(e.u, e.v);
        }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::pair(a.u, a.v) < std::pair(b.u, b.v);
    });
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (edges[i - 1].u == edges[i].u && edges[i - 1].v == edges[i].v) {
            throw std::invalid_argument("graph: duplicate edge rejected");
        }
    }
    edges_ = std::move(edges);
    adjacency_.assign(n_, {});
    for (const Edge& e : edges_) {
        adjacency_[e.u].push_back({e.v, e.weight});
        adjacency_[e.v].push_back({e.u, e.weight});
    }
    for (auto& list : adjacency_) {
        std::sort(list.begin(), list.end(),
                  [](const Neighbor& a, const Neighbor& b) { return a.to < b.to; });
    }
}

double Graph::weighted_degree(int v) const {
    double total = 0.0;
    for (const Neighbor& nb : adjacency_[v]) {
        total += nb.weight;
    }
    return total;
}

Graph random_regular_graph(int n, int d, std::uint64_t seed, int max_attempts) {
    if (n <= 0 || d < 0) {
        throw std::invalid_argument("random_regular_graph: need n > 0 and d >= 0");
    }
    if (d >= n || (static_cast<long long>(n) * d) % 2 != 0) {
        throw std::invalid_argument("random_regular_graph: infeasible degree (need n*d even and d < n)");
    }

    std::mt19937_64 rng(seed);
    std::vector<int> stubs(static_cast<std::size_t>(n) * d);
    for (int v = 0; v < n; ++v) {
        for (int k = 0; k < d; ++k) {
            stubs[static_cast<std::size_t>(v) * d + k] = v;
        }
    }

    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::shuffle(stubs.begin(), stubs.end(), rng);
        std::set<std::pair<int, int>> seen;
        std::vector<Edge> edges;
        edges.reserve(stubs.size() / 2);
        bool ok = true;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            int u = stubs[i];
            int v = stubs[i + 1];
            if (u == v) {
                ok = false;
                break;
            }
            if (u > v) std::swap(u, v);
            if (!seen.insert({u, v}).second) {
                ok = false;
                break;
            }
            edges.push_back({u, v, 1.0});
        }
        if (ok) {
            return Graph(n, std::move(edges));
        }
    }
    throw std::runtime_error("random_regular_graph: generation failed, retry budget exhausted");
}

namespace {

// Splits into non-blank lines; blank lines are ignored wherever they occur.
std::vector<std::string> nonblank_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line = (nl == std::string_view::npos)
                                    ? text.substr(pos)
                                    : text.substr(pos, nl - pos);
        bool blank = true;
        for (char c : line) {
            if (!std::isspace(static_cast<unsigned char>(c))) {
                blank = false;
                break;
            }
        }
        if (!blank) {
            lines.emplace_back(line);
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return lines;
}

Graph parse_graph_text(std::string_view text, int index_base) {
    const std::vector<std::string> lines = nonblank_lines(text);
    if (lines.empty()) {
        throw std::runtime_error("graph parse: malformed header (empty input)");
    }
    long long n = 0;
    long long m = 0;
    {
        std::istringstream header(lines[0]);
        std::string extra;
        if (!(header >> n >> m) || (header >> extra) || n < 0 || m < 0) {
            throw std::runtime_error("graph parse: malformed header");
        }
    }
    if (static_cast<long long>(lines.size()) - 1 < m) {
        throw std::runtime_error("graph parse: edge count mismatch (fewer edge lines than header)");
    }
    if (static_cast<long long>(lines.size()) - 1 > m) {
        throw std::runtime_error("graph parse: edge count mismatch (more edge lines than header)");
    }
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long long k = 0; k < m; ++k) {
        std::istringstream line(lines[static_cast<std::size_t>(k) + 1]);
        long long i = 0;
        long long j = 0;
        double w = 0.0;
        std::string extra;
        if (!(line >> i >> j >> w) || (line >> extra)) {
            throw std::runtime_error("graph parse: malformed edge line: " + lines[static_cast<std::size_t>(k) + 1]);
        }
        edges.push_back({static_cast<int>(i - index_base), static_cast<int>(j - index_base), w});
    }
    return Graph(static_cast<int>(n), std::move(edges));
}

std::string format_graph_text(const Graph& g, int index_base) {
    std::ostringstream out;
    out.precision(17);
    out << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (const Edge& e : g.edges()) {
        out << (e.u + index_base) << ' ' << (e.v + index_base) << ' ' << e.weight << '\n';
    }
    return out.str();
}

} // namespace

Graph parse_gset(std::string_view text) { return parse_graph_text(text, 1); }

std::string to_gset(const Graph& g) { return format_graph_text(g, 1); }

Graph parse_edge_list(std::string_view text) { return parse_graph_text(text, 0); }

std::string to_edge_list(const Graph& g) { return format_graph_text(g, 0); }

} // namespace qopt
