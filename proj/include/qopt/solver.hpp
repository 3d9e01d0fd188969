#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qopt/gcn.hpp"
#include "qopt/graph.hpp"
#include "qopt/qubo.hpp"

namespace qopt {

enum class ProblemKind { maxcut, mis, generic };

ProblemKind problem_kind_from_string(const std::string& name);
std::string to_string(ProblemKind kind);

/// Threshold projection of soft assignments: x_i = 1 iff p_i >= threshold.
/// Ties at the threshold map to 1.
Bitstring project(const std::vector<double>& p, double threshold = 0.5);

/// Removes independence violations by scanning violated edges in canonical
/// edge order; from each still-violated edge the endpoint with the larger
/// degree within the current set is dropped, ties broken toward the larger
/// index. Only ever shrinks the set.
Bitstring repair_mis(const Graph& g, const Bitstring& x);

/// Steepest-descent single-bit-flip local search: repeatedly applies the
/// flip with the largest energy decrease until no flip decreases the
/// energy. The result is 1-flip locally optimal.
Bitstring greedy_bitflip_polish(const QuboInstance& q, const Bitstring& x);

struct SolveResult {
    Bitstring bitstring;
    double energy = 0.0;
    double metric = 0.0;
    int shot_index = -1;
    std::int64_t epoch_found = -1;
    double wall_time_ms = 0.0;
    int shots_run = 0;
    bool repaired = false;
};

/// Flat key/value JSON record; bitstring encoded as a 0/1 string.
std::string solve_result_to_json(const SolveResult& result);

struct SolveOptions {
    bool polish = false;
    int threads = 1;
    /// When set, receives the trained parameters of the winning shot.
    TrainedModel* capture_model = nullptr;
};

struct SolveTiming {
    double training_ms = 0.0;
    double post_ms = 0.0;
};

/// Multi-shot solve: cfg.shots independent training runs with seeds
/// cfg.seed + shot_index, candidate pooling across shots, MIS repair and
/// optional bit-flip polish, deterministic merge (energy, then shot, then
/// epoch). The reported energy is always recomputed from the bitstring.
SolveResult solve(const Graph& g, const QuboInstance& q, ProblemKind kind,
                  const TrainConfig& cfg, const SolveOptions& options = {},
                  SolveTiming* timing = nullptr);

} // namespace qopt
