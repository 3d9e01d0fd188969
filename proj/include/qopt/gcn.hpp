#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qopt/graph.hpp"
#include "qopt/matrix.hpp"
#include "qopt/qubo.hpp"

namespace qopt {

/// Graph convolutional model of K stacked layers
///
///   h_v^k = act( W_k^T . mean_{u in N(v)} h_u^{k-1} + B_k^T . h_v^{k-1} )
///
/// with ReLU plus optional dropout on hidden layers and a sigmoid on the
/// final scalar output. W_k (neighbor path) and B_k (self path) are stored
/// as (d_{k-1} x d_k) and right-multiplied against row-major node features.
/// The neighbor mean of an isolated vertex is the zero vector, so only the
/// self path carries its signal.
struct GcnModel {
    std::vector<int> layer_dims;      // d_0 .. d_K, d_K == 1
    std::vector<Matrix> weights;      // W_1 .. W_K
    std::vector<Matrix> self_weights; // B_1 .. B_K
    double dropout_rate = 0.0;

    int layer_count() const { return static_cast<int>(layer_dims.size()) - 1; }
};

/// Trainable per-node input features h^0, one row per vertex.
struct EmbeddingTable {
    Matrix values;
};

struct AdamConfig {
    double learning_rate = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Adam moments; shapes mirror the parameter list they were built from.
struct AdamState {
    AdamConfig config;
    std::vector<Matrix> first_moment;
    std::vector<Matrix> second_moment;
    std::int64_t step_count = 0;
};

struct TrainConfig {
    std::int64_t max_epochs = 100000;
    double abs_tolerance = 1e-4;
    std::int64_t patience = 1000;
    double learning_rate = 1e-4;
    int shots = 5;
    std::uint64_t seed = 0;
    double dropout = 0.0;
    /// Architecture override; empty selects hyperparams_default(n).
    std::vector<int> layer_dims;

    void validate() const;
};

enum class StopReason { converged, max_epochs };

struct TrainTrace {
    std::vector<double> loss_history;              // one entry per epoch
    std::vector<double> candidate_energy_history;  // projected candidate energy per epoch
    Bitstring best_bitstring;
    double best_energy = 0.0;
    std::int64_t best_epoch = -1;
    std::int64_t epochs_run = 0;
    StopReason stop_reason = StopReason::max_epochs;
};

/// Embedding-size heuristic: d0 = floor(sqrt(n)) for n >= 1e5, else
/// floor(cbrt(n)); d1 = floor(d0/2); both clamped to at least 1.
std::pair<int, int> hyperparams_default(int n);

/// Embeddings i.i.d. N(0,1)/sqrt(d0); weights uniform in
/// +-sqrt(6/(fan_in+fan_out)). Deterministic per seed.
std::pair<EmbeddingTable, GcnModel> init_parameters(int n, const std::vector<int>& layer_dims,
                                                    std::uint64_t seed, double dropout_rate = 0.0);

/// Intermediates of one forward pass, kept for the backward pass.
struct ForwardCache {
    std::vector<Matrix> layer_inputs;    // H^0 .. H^{K-1}
    std::vector<Matrix> aggregates;      // neighbor means of each layer input
    std::vector<Matrix> preactivations;  // Z_1 .. Z_K
    std::vector<Matrix> dropout_masks;   // per hidden layer, entries 0 or 1/(1-rate)
    std::vector<double> probabilities;   // sigmoid outputs, clamped inside (0,1)
    int graph_vertices = -1;
    std::vector<int> dims;
    bool train_mode = false;
};

/// Full forward pass. rng is consumed only when train_mode is set and the
/// model has a nonzero dropout rate. Returns the soft assignments stored
/// in the cache; every entry lies strictly inside (0,1).
const std::vector<double>& forward(const GcnModel& model, const Graph& g,
                                   const EmbeddingTable& h0, bool train_mode,
                                   std::mt19937_64& rng, ForwardCache& cache);

struct GcnGradients {
    Matrix embeddings;
    std::vector<Matrix> weights;
    std::vector<Matrix> self_weights;
};

/// Exact reverse-mode gradients of the relaxed QUBO loss with respect to
/// every trainable parameter; returns the loss. The cache must come from
/// a forward call with the same graph and model shape.
double backward(const GcnModel& model, const Graph& g, const QuboInstance& q,
                const ForwardCache& cache, GcnGradients& grads);

AdamState make_adam_state(const AdamConfig& config, const EmbeddingTable& h0,
                          const GcnModel& model);

/// Canonical parameter order shared by the optimizer and the gradients:
/// embeddings, then W_k and B_k per layer.
std::vector<Matrix*> parameter_list(EmbeddingTable& h0, GcnModel& model);
std::vector<const Matrix*> gradient_list(const GcnGradients& grads);

/// One bias-corrected Adam update over a parameter list.
void adam_step(AdamState& state, const std::vector<Matrix*>& params,
               const std::vector<const Matrix*>& grads);

struct TrainedModel {
    EmbeddingTable embeddings;
    GcnModel model;
};

/// One full training run from a fresh random initialization: forward,
/// backward, Adam, per-epoch projection bookkeeping of the best candidate
/// by true QUBO energy, and early stopping once the best loss has not
/// improved by more than abs_tolerance for patience consecutive epochs.
/// Throws std::runtime_error when the loss turns non-finite.
TrainTrace train_single_shot(const Graph& g, const QuboInstance& q, const TrainConfig& cfg,
                             std::uint64_t shot_seed, TrainedModel* final_model = nullptr);

/// Checkpoint text format (hexfloat entries): write -> read -> forward
/// reproduces the soft assignments bit-identically.
void save_checkpoint(std::ostream& out, const EmbeddingTable& h0, const GcnModel& model,
                     std::uint64_t seed);
std::tuple<EmbeddingTable, GcnModel, std::uint64_t> load_checkpoint(std::istream& in);

} // namespace qopt
