#include "qopt/applications.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qopt {

namespace {

constexpr double kMatrixTolerance = 1e-9;

} // namespace

CorrelationMatrix::CorrelationMatrix(int n, std::vector<double> row_major)
    : n_(n), data_(std::move(row_major)) {
    if (n < 0) {
        throw std::invalid_argument("correlation matrix: negative size");
    }
    if (data_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
        throw std::invalid_argument("correlation matrix: entry count does not match size");
    }
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            const double v = (*this)(i, j);
            if (v < -1.0 - kMatrixTolerance || v > 1.0 + kMatrixTolerance) {
                throw std::invalid_argument("correlation matrix: entry outside [-1, 1]");
            }
            if (std::abs(v - (*this)(j, i)) > kMatrixTolerance) {
                throw std::invalid_argument("correlation matrix: asymmetric matrix");
            }
        }
        if (std::abs((*this)(i, i) - 1.0) > kMatrixTolerance) {
            throw std::invalid_argument("correlation matrix: diagonal entry differs from 1");
        }
    }
}

Graph threshold_correlation_graph(const CorrelationMatrix& c, double lambda) {
    if (lambda < 0.0 || lambda >= 1.0) {
        throw std::invalid_argument("threshold_correlation_graph: lambda must lie in [0, 1)");
    }
    std::vector<Edge> edges;
    for (int i = 0; i < c.size(); ++i) {
        for (int j = i + 1; j < c.size(); ++j) {
            if (std::abs(c(i, j)) > lambda) {
                edges.push_back({i, j, 1.0});
            }
        }
    }
    return Graph(c.size(), std::move(edges));
}

QuboInstance build_wmis_qubo(const Graph& g, const std::vector<double>& mu, double penalty) {
    if (mu.size() != static_cast<std::size_t>(g.vertex_count())) {
        throw std::invalid_argument("build_wmis_qubo: length mismatch");
    }
    if (penalty <= 0.0) {
        throw std::invalid_argument("build_wmis_qubo: penalty must be positive");
    }
    std::vector<QuboTerm> terms;
    terms.reserve(mu.size() + g.edges().size());
    for (int v = 0; v < g.vertex_count(); ++v) {
        terms.push_back({v, v, -mu[static_cast<std::size_t>(v)]});
    }
    for (const Edge& e : g.edges()) {
        terms.push_back({e.u, e.v, penalty});
    }
    return QuboInstance(g.vertex_count(), terms, 0.0);
}

Graph interval_graph(const std::vector<Interval>& intervals) {
    for (const Interval& iv : intervals) {
        if (!(iv.start < iv.end)) {
            throw std::invalid_argument("interval_graph: invalid interval (need start < end)");
        }
    }
    const int n = static_cast<int>(intervals.size());
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Interval& a = intervals[static_cast<std::size_t>(i)];
            const Interval& b = intervals[static_cast<std::size_t>(j)];
            if (a.start < b.end && b.start < a.end) {
                edges.push_back({i, j, 1.0});
            }
        }
    }
    return Graph(n, std::move(edges));
}

QuboInstance build_mvc_qubo(const Graph& g, const std::vector<double>& costs, double penalty,
                            std::string* warning) {
    if (costs.size() != static_cast<std::size_t>(g.vertex_count())) {
        throw std::invalid_argument("build_mvc_qubo: length mismatch");
    }
    for (double c : costs) {
        if (c < 0.0) {
            throw std::invalid_argument("build_mvc_qubo: negative cost");
        }
    }
    if (penalty <= 0.0) {
        throw std::invalid_argument("build_mvc_qubo: penalty must be positive");
    }
    const double max_cost = costs.empty() ? 0.0 : *std::max_element(costs.begin(), costs.end());
    if (penalty <= max_cost && warning) {
        *warning = "mvc penalty does not exceed the largest cost; covering may not be enforced";
    }
    std::vector<QuboTerm> terms;
    terms.reserve(costs.size() + g.edges().size());
    for (int v = 0; v < g.vertex_count(); ++v) {
        terms.push_back({v, v, costs[static_cast<std::size_t>(v)] - penalty * g.degree(v)});
    }
    for (const Edge& e : g.edges()) {
        terms.push_back({e.u, e.v, penalty});
    }
    return QuboInstance(g.vertex_count(), terms, penalty * g.edge_count());
}

namespace {

std::vector<std::string> nonblank_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
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
        if (!blank) lines.emplace_back(line);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return lines;
}

} // namespace

std::vector<Interval> parse_intervals_csv(std::string_view text) {
    std::vector<Interval> intervals;
    for (const std::string& line : nonblank_lines(text)) {
        std::string cleaned = line;
        std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
        std::istringstream in(cleaned);
        Interval iv;
        std::string extra;
        if (!(in >> iv.start >> iv.end) || (in >> extra)) {
            throw std::runtime_error("intervals csv: malformed line: " + line);
        }
        intervals.push_back(iv);
    }
    return intervals;
}

std::vector<double> parse_vector_csv(std::string_view text) {
    std::vector<double> values;
    for (const std::string& line : nonblank_lines(text)) {
        std::string cleaned = line;
        std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
        std::istringstream in(cleaned);
        double v = 0.0;
        while (in >> v) {
            values.push_back(v);
        }
        if (!in.eof()) {
            throw std::runtime_error("vector csv: malformed line: " + line);
        }
    }
    return values;
}

CorrelationMatrix parse_correlation_matrix(std::string_view text) {
    std::istringstream in{std::string(text)};
    int n = 0;
    if (!(in >> n) || n < 0) {
        throw std::runtime_error("correlation matrix: malformed header");
    }
    std::vector<double> data(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (auto& v : data) {
        if (!(in >> v)) {
            throw std::runtime_error("correlation matrix: truncated entries");
        }
    }
    std::string extra;
    if (in >> extra) {
        throw std::runtime_error("correlation matrix: trailing content");
    }
    return CorrelationMatrix(n, std::move(data));
}

} // namespace qopt
