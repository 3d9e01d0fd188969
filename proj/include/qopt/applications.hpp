#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qopt/graph.hpp"
#include "qopt/qubo.hpp"

namespace qopt {

/// Half-open time interval [start, end); start < end.
struct Interval {
    double start = 0.0;
    double end = 0.0;
};

/// Symmetric correlation matrix with unit diagonal (both within 1e-9)
/// and entries in [-1, 1].
class CorrelationMatrix {
public:
    CorrelationMatrix() = default;
    CorrelationMatrix(int n, std::vector<double> row_major);

    int size() const { return n_; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * n_ + j]; }

private:
    int n_ = 0;
    std::vector<double> data_;
};

/// Unweighted graph with an edge wherever |c_ij| exceeds lambda strictly.
Graph threshold_correlation_graph(const CorrelationMatrix& c, double lambda);

/// Weighted MIS Hamiltonian -sum_i mu_i x_i + P sum_edges x_i x_j.
/// With unit weights this reduces term-for-term to build_mis_qubo.
QuboInstance build_wmis_qubo(const Graph& g, const std::vector<double>& mu, double penalty);

/// Vertex per interval, edge wherever two intervals overlap. Half-open
/// convention: [a,b) and [c,d) overlap iff a < d and c < b, so intervals
/// sharing only an endpoint are compatible.
Graph interval_graph(const std::vector<Interval>& intervals);

/// Minimum vertex cover Hamiltonian
///   sum_i c_i x_i + P sum_edges (1 - x_i - x_j + x_i x_j):
/// offset P|E|, Q_ii = c_i - P deg(i), Q_ij = P per edge. A penalty not
/// exceeding the largest cost may fail to enforce covering; that case is
/// reported through `warning` (when given) rather than rejected.
QuboInstance build_mvc_qubo(const Graph& g, const std::vector<double>& costs, double penalty,
                            std::string* warning = nullptr);

/// One interval per line: "start,end". Blank lines ignored.
std::vector<Interval> parse_intervals_csv(std::string_view text);

/// One value per line (or comma-separated on one line).
std::vector<double> parse_vector_csv(std::string_view text);

/// Whitespace-delimited dense square matrix: "n" then n rows of n entries.
CorrelationMatrix parse_correlation_matrix(std::string_view text);

} // namespace qopt
