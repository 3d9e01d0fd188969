#pragma once

#include <cstdint>
#include <utility>

#include "qopt/graph.hpp"
#include "qopt/qubo.hpp"

namespace qopt {

/// Universal constant from the Sherrington-Kirkpatrick ground-state
/// energy entering the large-n MaxCut upper bound.
inline constexpr double kParisiConstant = 0.7632;

/// Best known independence ratios alpha_d / n for random d-regular graphs.
inline constexpr double kMisRatioDegree3 = 0.45537;
inline constexpr double kMisRatioDegree5 = 0.38443;

struct BruteForceResult {
    Bitstring bitstring;
    double energy = 0.0;
};

/// Exact minimizer by enumerating assignments m = 0 .. 2^n - 1 with
/// x_i = bit i of m; ties resolve to the smallest m. Guarded at n <= 26
/// unless allow_large is set.
BruteForceResult brute_force_min(const QuboInstance& q, bool allow_large = false);

/// Best cut over `repeats` uniform random bitstrings; deterministic per seed.
double random_cut_baseline(const Graph& g, std::uint64_t seed, int repeats);

/// Residual minimum-degree greedy independent set; ties toward the
/// smallest vertex index. Output is always independent.
Bitstring greedy_mis(const Graph& g);

enum class BoundProblem { maxcut, mis };

/// Analytical large-n estimates: maxcut -> (d/4 + P* sqrt(d/4)) n;
/// mis -> ratio(d) * n, with ratios tabulated for d = 3 and d = 5 only.
/// These drop the O(sqrt(d)) and o(n) correction terms of the underlying
/// theorems, matching the estimator used for benchmark ratios.
double theoretical_bounds(BoundProblem problem, int d, int n);

} // namespace qopt
