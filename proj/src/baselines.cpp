#include "qopt/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace qopt {

BruteForceResult brute_force_min(const QuboInstance& q, bool allow_large) {
    const int n = q.variable_count();
    if (n > 26 && !allow_large) {
        throw std::invalid_argument("brute_force_min: instance too large (n > 26)");
    }
    if (n > 62) {
        throw std::invalid_argument("brute_force_min: enumeration index would overflow");
    }

    Bitstring x(static_cast<std::size_t>(n), 0);
    // Incremental enumeration in increasing m: each increment flips the
    // trailing ones and the lowest zero bit, each flip updating the energy
    // via the variable's field in O(deg). Candidates within a small band
    // of the current best are re-evaluated exactly before comparison, so
    // accumulated rounding cannot change the reported minimizer.
    std::vector<double> field(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        field[static_cast<std::size_t>(k)] = q.diagonal(k);
    }
    double running = q.offset();

    BruteForceResult best;
    best.bitstring = x;
    best.energy = q.energy(x);

    auto flip = [&](int k) {
        const double sign = x[k] ? -1.0 : 1.0;
        running += sign * field[static_cast<std::size_t>(k)];
        x[k] ^= 1;
        for (const Neighbor& c : q.couplings(k)) {
            field[static_cast<std::size_t>(c.to)] += sign * c.weight;
        }
    };

    const std::uint64_t total = (n >= 1) ? (std::uint64_t{1} << n) : 1;
    for (std::uint64_t m = 1; m < total; ++m) {
        // Binary increment from m-1 to m.
        int bit = 0;
        while (x[bit]) {
            flip(bit);
            ++bit;
        }
        flip(bit);
        const double band = 1e-6 * (1.0 + std::abs(best.energy));
        if (running <= best.energy + band) {
            const double exact = q.energy(x);
            if (exact < best.energy) {
                best.energy = exact;
                best.bitstring = x;
            }
        }
    }
    return best;
}

double random_cut_baseline(const Graph& g, std::uint64_t seed, int repeats) {
    if (repeats < 1) {
        throw std::invalid_argument("random_cut_baseline: repeats must be >= 1");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coin(0, 1);
    const int n = g.vertex_count();
    Bitstring x(static_cast<std::size_t>(n));
    double best = 0.0;
    bool first = true;
    for (int r = 0; r < repeats; ++r) {
        for (int v = 0; v < n; ++v) {
            x[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(coin(rng));
        }
        const double cut = cut_size(g, x);
        if (first || cut > best) {
            best = cut;
            first = false;
        }
    }
    return best;
}

Bitstring greedy_mis(const Graph& g) {
    const int n = g.vertex_count();
    Bitstring selected(static_cast<std::size_t>(n), 0);
    std::vector<bool> alive(static_cast<std::size_t>(n), true);
    std::vector<int> residual_degree(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v) {
        residual_degree[static_cast<std::size_t>(v)] = g.degree(v);
    }
    int remaining = n;
    while (remaining > 0) {
        int pick = -1;
        for (int v = 0; v < n; ++v) {
            if (!alive[static_cast<std::size_t>(v)]) continue;
            if (pick < 0 || residual_degree[static_cast<std::size_t>(v)] <
                                residual_degree[static_cast<std::size_t>(pick)]) {
                pick = v;
            }
        }
        selected[static_cast<std::size_t>(pick)] = 1;
        // Remove the pick and its alive neighbors from the residual graph.
        std::vector<int> removed{pick};
        for (const Neighbor& nb : g.neighbors(pick)) {
            if (alive[static_cast<std::size_t>(nb.to)]) removed.push_back(nb.to);
        }
        for (int v : removed) {
            alive[static_cast<std::size_t>(v)] = false;
            --remaining;
        }
        for (int v : removed) {
            for (const Neighbor& nb : g.neighbors(v)) {
                if (alive[static_cast<std::size_t>(nb.to)]) {
                    --residual_degree[static_cast<std::size_t>(nb.to)];
                }
            }
        }
    }
    return selected;
}

double theoretical_bounds(BoundProblem problem, int d, int n) {
    if (n < 1) {
        throw std::invalid_argument("theoretical_bounds: need n >= 1");
    }
    switch (problem) {
        case BoundProblem::maxcut: {
            if (d < 1) {
                throw std::invalid_argument("theoretical_bounds: maxcut needs d >= 1");
            }
            const double quarter = static_cast<double>(d) / 4.0;
            return (quarter + kParisiConstant * std::sqrt(quarter)) * static_cast<double>(n);
        }
        case BoundProblem::mis: {
            double ratio = 0.0;
            if (d == 3) {
                ratio = kMisRatioDegree3;
            } else if (d == 5) {
                ratio = kMisRatioDegree5;
            } else {
                throw std::invalid_argument("theoretical_bounds: unsupported degree for mis (only 3 and 5)");
            }
            return ratio * static_cast<double>(n);
        }
    }
    throw std::invalid_argument("theoretical_bounds: unknown problem");
}

} // namespace qopt
