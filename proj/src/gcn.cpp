#include "qopt/gcn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "qopt/solver.hpp"

namespace qopt {

namespace {

constexpr double kProbabilityClamp = 1e-12;

double stable_sigmoid(double z) {
    double p;
    if (z >= 0.0) {
        p = 1.0 / (1.0 + std::exp(-z));
    } else {
        const double e = std::exp(z);
        p = e / (1.0 + e);
    }
    // Keep outputs strictly inside (0,1) even when the sigmoid saturates
    // past double resolution.
    return std::min(1.0 - kProbabilityClamp, std::max(kProbabilityClamp, p));
}

void validate_dims(const std::vector<int>& dims) {
    if (dims.size() < 2) {
        throw std::invalid_argument("gcn: need at least one layer (two dims)");
    }
    for (int d : dims) {
        if (d < 1) throw std::invalid_argument("gcn: layer dimensions must be >= 1");
    }
    if (dims.back() != 1) {
        throw std::invalid_argument("gcn: final output dimension must be 1");
    }
}

void validate_model(const GcnModel& model) {
    validate_dims(model.layer_dims);
    const int layers = model.layer_count();
    if (static_cast<int>(model.weights.size()) != layers ||
        static_cast<int>(model.self_weights.size()) != layers) {
        throw std::invalid_argument("gcn: weight list does not match layer count");
    }
    for (int k = 0; k < layers; ++k) {
        const int din = model.layer_dims[k];
        const int dout = model.layer_dims[k + 1];
        if (model.weights[k].rows() != din || model.weights[k].cols() != dout ||
            model.self_weights[k].rows() != din || model.self_weights[k].cols() != dout) {
            throw std::invalid_argument("gcn: weight matrix shape mismatch");
        }
    }
    if (model.dropout_rate < 0.0 || model.dropout_rate >= 1.0) {
        throw std::invalid_argument("gcn: dropout rate must lie in [0,1)");
    }
}

// out = row-wise mean of h over each vertex's neighborhood; isolated
// vertices get a zero row.
void mean_aggregate(const Graph& g, const Matrix& h, Matrix& out) {
    const int n = g.vertex_count();
    const int d = h.cols();
    out.resize(n, d);
    for (int v = 0; v < n; ++v) {
        const auto& nbrs = g.neighbors(v);
        if (nbrs.empty()) continue;
        double* orow = out.row(v);
        for (const Neighbor& nb : nbrs) {
            const double* hrow = h.row(nb.to);
            for (int c = 0; c < d; ++c) {
                orow[c] += hrow[c];
            }
        }
        const double inv = 1.0 / static_cast<double>(nbrs.size());
        for (int c = 0; c < d; ++c) {
            orow[c] *= inv;
        }
    }
}

// out += M^T grad, i.e. out_u += sum_{v in N(u)} grad_v / deg(v).
void mean_aggregate_transpose_add(const Graph& g, const Matrix& grad, Matrix& out) {
    const int n = g.vertex_count();
    const int d = grad.cols();
    for (int u = 0; u < n; ++u) {
        double* orow = out.row(u);
        for (const Neighbor& nb : g.neighbors(u)) {
            const double inv = 1.0 / static_cast<double>(g.degree(nb.to));
            const double* grow = grad.row(nb.to);
            for (int c = 0; c < d; ++c) {
                orow[c] += inv * grow[c];
            }
        }
    }
}

} // namespace

void TrainConfig::validate() const {
    if (max_epochs < 1) throw std::invalid_argument("train config: max_epochs must be positive");
    if (!(abs_tolerance > 0.0)) throw std::invalid_argument("train config: abs_tolerance must be positive");
    if (patience < 1) throw std::invalid_argument("train config: patience must be positive");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("train config: learning_rate must be positive");
    if (shots < 1) throw std::invalid_argument("train config: shots must be positive");
    if (dropout < 0.0 || dropout >= 1.0) throw std::invalid_argument("train config: dropout must lie in [0,1)");
    if (!layer_dims.empty()) validate_dims(layer_dims);
}

std::pair<int, int> hyperparams_default(int n) {
    if (n < 1) throw std::invalid_argument("hyperparams_default: need n >= 1");
    const double root = (n >= 100000) ? std::sqrt(static_cast<double>(n))
                                      : std::cbrt(static_cast<double>(n));
    // Tiny nudge so exact cubes/squares are not floored to root-1.
    const int d0 = std::max(1, static_cast<int>(std::floor(root + 1e-9)));
    const int d1 = std::max(1, d0 / 2);
    return {d0, d1};
}

std::pair<EmbeddingTable, GcnModel> init_parameters(int n, const std::vector<int>& layer_dims,
                                                    std::uint64_t seed, double dropout_rate) {
    if (n < 1) {
        throw std::invalid_argument("init_parameters: empty graph");
    }
    validate_dims(layer_dims);
    if (dropout_rate < 0.0 || dropout_rate >= 1.0) {
        throw std::invalid_argument("init_parameters: dropout rate must lie in [0,1)");
    }

    std::mt19937_64 rng(seed);
    EmbeddingTable h0;
    h0.values.resize(n, layer_dims[0]);
    {
        std::normal_distribution<double> normal(0.0, 1.0);
        const double scale = 1.0 / std::sqrt(static_cast<double>(layer_dims[0]));
        double* data = h0.values.data();
        for (std::size_t i = 0; i < h0.values.size(); ++i) {
            data[i] = normal(rng) * scale;
        }
    }

    GcnModel model;
    model.layer_dims = layer_dims;
    model.dropout_rate = dropout_rate;
    const int layers = model.layer_count();
    model.weights.resize(layers);
    model.self_weights.resize(layers);
    for (int k = 0; k < layers; ++k) {
        const int fan_in = layer_dims[k];
        const int fan_out = layer_dims[k + 1];
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        std::uniform_real_distribution<double> uniform(-bound, bound);
        for (Matrix* m : {&model.weights[k], &model.self_weights[k]}) {
            m->resize(fan_in, fan_out);
            double* data = m->data();
            for (std::size_t i = 0; i < m->size(); ++i) {
                data[i] = uniform(rng);
            }
        }
    }
    return {std::move(h0), std::move(model)};
}

const std::vector<double>& forward(const GcnModel& model, const Graph& g,
                                   const EmbeddingTable& h0, bool train_mode,
                                   std::mt19937_64& rng, ForwardCache& cache) {
    validate_model(model);
    const int n = g.vertex_count();
    if (h0.values.rows() != n) {
        throw std::invalid_argument("forward: embedding rows do not match vertex count");
    }
    if (h0.values.cols() != model.layer_dims[0]) {
        throw std::invalid_argument("forward: embedding width does not match d0");
    }

    const int layers = model.layer_count();
    const bool use_dropout = train_mode && model.dropout_rate > 0.0;
    cache.layer_inputs.resize(layers);
    cache.aggregates.resize(layers);
    cache.preactivations.resize(layers);
    cache.dropout_masks.resize(use_dropout ? layers - 1 : 0);
    cache.graph_vertices = n;
    cache.dims = model.layer_dims;
    cache.train_mode = train_mode;

    cache.layer_inputs[0] = h0.values;
    for (int k = 0; k < layers; ++k) {
        const Matrix& input = cache.layer_inputs[k];
        mean_aggregate(g, input, cache.aggregates[k]);
        matmul(cache.aggregates[k], model.weights[k], cache.preactivations[k]);
        matmul_add(input, model.self_weights[k], cache.preactivations[k]);

        if (k + 1 < layers) {
            const Matrix& z = cache.preactivations[k];
            Matrix& next = cache.layer_inputs[k + 1];
            next.resize(z.rows(), z.cols());
            if (use_dropout) {
                // Inverted scaling: surviving units are multiplied by
                // 1/(1-rate) at train time so eval needs no rescaling.
                Matrix& mask = cache.dropout_masks[k];
                mask.resize(z.rows(), z.cols());
                std::uniform_real_distribution<double> uniform(0.0, 1.0);
                const double keep_scale = 1.0 / (1.0 - model.dropout_rate);
                for (std::size_t i = 0; i < z.size(); ++i) {
                    mask.data()[i] = (uniform(rng) < model.dropout_rate) ? 0.0 : keep_scale;
                    next.data()[i] = std::max(0.0, z.data()[i]) * mask.data()[i];
                }
            } else {
                for (std::size_t i = 0; i < z.size(); ++i) {
                    next.data()[i] = std::max(0.0, z.data()[i]);
                }
            }
        }
    }

    const Matrix& out = cache.preactivations[layers - 1];
    cache.probabilities.resize(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        cache.probabilities[static_cast<std::size_t>(v)] = stable_sigmoid(out(v, 0));
    }
    return cache.probabilities;
}

double backward(const GcnModel& model, const Graph& g, const QuboInstance& q,
                const ForwardCache& cache, GcnGradients& grads) {
    validate_model(model);
    const int n = g.vertex_count();
    if (cache.graph_vertices != n || cache.dims != model.layer_dims ||
        cache.probabilities.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("backward: stale cache (graph or model changed since forward)");
    }
    if (q.variable_count() != n) {
        throw std::invalid_argument("backward: qubo size does not match graph");
    }

    std::vector<double> loss_grad;
    const double loss = q.relaxed_loss_and_gradient(cache.probabilities, loss_grad);

    const int layers = model.layer_count();
    grads.weights.resize(layers);
    grads.self_weights.resize(layers);

    // dL/dZ_K through the sigmoid.
    Matrix dz(n, 1);
    for (int v = 0; v < n; ++v) {
        const double p = cache.probabilities[static_cast<std::size_t>(v)];
        dz(v, 0) = loss_grad[static_cast<std::size_t>(v)] * p * (1.0 - p);
    }

    Matrix dinput;
    Matrix dagg;
    for (int k = layers - 1; k >= 0; --k) {
        matmul_at_b(cache.aggregates[k], dz, grads.weights[k]);
        matmul_at_b(cache.layer_inputs[k], dz, grads.self_weights[k]);

        matmul_a_bt(dz, model.self_weights[k], dinput);
        matmul_a_bt(dz, model.weights[k], dagg);
        mean_aggregate_transpose_add(g, dagg, dinput);

        if (k > 0) {
            // Chain through dropout and the rectifier of hidden layer k.
            const Matrix& z = cache.preactivations[k - 1];
            dz.resize(z.rows(), z.cols());
            const bool use_mask = !cache.dropout_masks.empty();
            for (std::size_t i = 0; i < z.size(); ++i) {
                double v = dinput.data()[i];
                if (use_mask) v *= cache.dropout_masks[k - 1].data()[i];
                dz.data()[i] = (z.data()[i] > 0.0) ? v : 0.0;
            }
        } else {
            grads.embeddings = dinput;
        }
    }
    return loss;
}

AdamState make_adam_state(const AdamConfig& config, const EmbeddingTable& h0,
                          const GcnModel& model) {
    AdamState state;
    state.config = config;
    auto shapes = [&](std::vector<Matrix>& moments) {
        moments.emplace_back(h0.values.rows(), h0.values.cols());
        for (int k = 0; k < model.layer_count(); ++k) {
            moments.emplace_back(model.weights[k].rows(), model.weights[k].cols());
            moments.emplace_back(model.self_weights[k].rows(), model.self_weights[k].cols());
        }
    };
    shapes(state.first_moment);
    shapes(state.second_moment);
    return state;
}

std::vector<Matrix*> parameter_list(EmbeddingTable& h0, GcnModel& model) {
    std::vector<Matrix*> params;
    params.push_back(&h0.values);
    for (int k = 0; k < model.layer_count(); ++k) {
        params.push_back(&model.weights[k]);
        params.push_back(&model.self_weights[k]);
    }
    return params;
}

std::vector<const Matrix*> gradient_list(const GcnGradients& grads) {
    std::vector<const Matrix*> list;
    list.push_back(&grads.embeddings);
    for (std::size_t k = 0; k < grads.weights.size(); ++k) {
        list.push_back(&grads.weights[k]);
        list.push_back(&grads.self_weights[k]);
    }
    return list;
}

void adam_step(AdamState& state, const std::vector<Matrix*>& params,
               const std::vector<const Matrix*>& grads) {
    if (params.size() != grads.size() || params.size() != state.first_moment.size()) {
        throw std::invalid_argument("adam_step: parameter list shape mismatch");
    }
    state.step_count += 1;
    const double b1 = state.config.beta1;
    const double b2 = state.config.beta2;
    const double correction1 = 1.0 - std::pow(b1, static_cast<double>(state.step_count));
    const double correction2 = 1.0 - std::pow(b2, static_cast<double>(state.step_count));
    for (std::size_t t = 0; t < params.size(); ++t) {
        Matrix& p = *params[t];
        const Matrix& g = *grads[t];
        Matrix& m = state.first_moment[t];
        Matrix& v = state.second_moment[t];
        if (!p.same_shape(g) || !p.same_shape(m)) {
            throw std::invalid_argument("adam_step: tensor shape mismatch");
        }
        double* pd = p.data();
        const double* gd = g.data();
        double* md = m.data();
        double* vd = v.data();
        for (std::size_t i = 0; i < p.size(); ++i) {
            md[i] = b1 * md[i] + (1.0 - b1) * gd[i];
            vd[i] = b2 * vd[i] + (1.0 - b2) * gd[i] * gd[i];
            const double mhat = md[i] / correction1;
            const double vhat = vd[i] / correction2;
            pd[i] -= state.config.learning_rate * mhat / (std::sqrt(vhat) + state.config.epsilon);
        }
    }
}

TrainTrace train_single_shot(const Graph& g, const QuboInstance& q, const TrainConfig& cfg,
                             std::uint64_t shot_seed, TrainedModel* final_model) {
    cfg.validate();
    if (q.variable_count() != g.vertex_count()) {
        throw std::invalid_argument("train_single_shot: qubo size does not match graph");
    }

    std::vector<int> dims = cfg.layer_dims;
    if (dims.empty()) {
        const auto [d0, d1] = hyperparams_default(g.vertex_count());
        dims = {d0, d1, 1};
    }
    auto [h0, model] = init_parameters(g.vertex_count(), dims, shot_seed, cfg.dropout);

    AdamConfig adam_cfg;
    adam_cfg.learning_rate = cfg.learning_rate;
    AdamState adam = make_adam_state(adam_cfg, h0, model);
    const std::vector<Matrix*> params = parameter_list(h0, model);

    // Separate stream so dropout draws do not disturb init reproducibility.
    std::mt19937_64 dropout_rng(shot_seed ^ 0x9e3779b97f4a7c15ULL);

    ForwardCache cache;
    GcnGradients grads;
    TrainTrace trace;
    trace.loss_history.reserve(1024);

    double best_loss = std::numeric_limits<double>::infinity();
    std::int64_t stall = 0;

    for (std::int64_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        const std::vector<double>& p = forward(model, g, h0, true, dropout_rng, cache);
        const double loss = backward(model, g, q, cache, grads);
        if (!std::isfinite(loss)) {
            throw std::runtime_error("train_single_shot: training diverged (non-finite loss) at epoch " +
                                     std::to_string(epoch));
        }
        trace.loss_history.push_back(loss);
        trace.epochs_run = epoch + 1;

        const Bitstring candidate = project(p);
        const double energy = q.energy(candidate);
        trace.candidate_energy_history.push_back(energy);
        if (trace.best_epoch < 0 || energy < trace.best_energy) {
            trace.best_energy = energy;
            trace.best_bitstring = candidate;
            trace.best_epoch = epoch;
        }

        adam_step(adam, params, gradient_list(grads));

        if (loss < best_loss - cfg.abs_tolerance) {
            best_loss = loss;
            stall = 0;
        } else if (++stall >= cfg.patience) {
            trace.stop_reason = StopReason::converged;
            break;
        }
    }

    if (final_model) {
        final_model->embeddings = std::move(h0);
        final_model->model = std::move(model);
    }
    return trace;
}

namespace {

void write_matrix(std::ostream& out, const char* tag, const Matrix& m) {
    out << tag << ' ' << m.rows() << ' ' << m.cols() << '\n';
    out << std::hexfloat;
    for (int r = 0; r < m.rows(); ++r) {
        const double* row = m.row(r);
        for (int c = 0; c < m.cols(); ++c) {
            out << row[c] << (c + 1 < m.cols() ? ' ' : '\n');
        }
    }
    out << std::defaultfloat;
}

// istream hexfloat extraction is unreliable; parse tokens with strtod.
double read_double(std::istream& in) {
    std::string token;
    if (!(in >> token)) {
        throw std::runtime_error("checkpoint: truncated input");
    }
    char* end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') {
        throw std::runtime_error("checkpoint: malformed number: " + token);
    }
    return value;
}

Matrix read_matrix(std::istream& in, const std::string& expected_tag) {
    std::string tag;
    int rows = 0;
    int cols = 0;
    if (!(in >> tag >> rows >> cols) || tag != expected_tag || rows < 0 || cols < 0) {
        throw std::runtime_error("checkpoint: expected matrix tag " + expected_tag);
    }
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            m(r, c) = read_double(in);
        }
    }
    return m;
}

} // namespace

void save_checkpoint(std::ostream& out, const EmbeddingTable& h0, const GcnModel& model,
                     std::uint64_t seed) {
    validate_model(model);
    out << "qopt-gcn-checkpoint 1\n";
    out << "seed " << seed << '\n';
    out << "dropout " << std::hexfloat << model.dropout_rate << std::defaultfloat << '\n';
    out << "dims " << model.layer_dims.size();
    for (int d : model.layer_dims) {
        out << ' ' << d;
    }
    out << '\n';
    write_matrix(out, "h0", h0.values);
    for (int k = 0; k < model.layer_count(); ++k) {
        write_matrix(out, ("W" + std::to_string(k + 1)).c_str(), model.weights[k]);
        write_matrix(out, ("B" + std::to_string(k + 1)).c_str(), model.self_weights[k]);
    }
}

std::tuple<EmbeddingTable, GcnModel, std::uint64_t> load_checkpoint(std::istream& in) {
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "qopt-gcn-checkpoint" || version != 1) {
        throw std::runtime_error("checkpoint: unrecognized header");
    }
    std::string key;
    std::uint64_t seed = 0;
    if (!(in >> key >> seed) || key != "seed") {
        throw std::runtime_error("checkpoint: missing seed");
    }
    if (!(in >> key) || key != "dropout") {
        throw std::runtime_error("checkpoint: missing dropout");
    }
    const double dropout = read_double(in);
    std::size_t dim_count = 0;
    if (!(in >> key >> dim_count) || key != "dims" || dim_count < 2) {
        throw std::runtime_error("checkpoint: missing dims");
    }
    std::vector<int> dims(dim_count);
    for (std::size_t i = 0; i < dim_count; ++i) {
        if (!(in >> dims[i])) {
            throw std::runtime_error("checkpoint: truncated dims");
        }
    }
    EmbeddingTable h0;
    h0.values = read_matrix(in, "h0");
    GcnModel model;
    model.layer_dims = dims;
    model.dropout_rate = dropout;
    const int layers = static_cast<int>(dims.size()) - 1;
    model.weights.resize(layers);
    model.self_weights.resize(layers);
    for (int k = 0; k < layers; ++k) {
        model.weights[k] = read_matrix(in, "W" + std::to_string(k + 1));
        model.self_weights[k] = read_matrix(in, "B" + std::to_string(k + 1));
    }
    validate_model(model);
    if (h0.values.cols() != dims[0]) {
        throw std::runtime_error("checkpoint: embedding width does not match dims");
    }
    return {std::move(h0), std::move(model), seed};
}

} // namespace qopt
