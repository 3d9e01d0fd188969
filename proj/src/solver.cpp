#include "qopt/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <json.hpp>

namespace qopt {

ProblemKind problem_kind_from_string(const std::string& name) {
    if (name == "maxcut") return ProblemKind::maxcut;
    if (name == "mis") return ProblemKind::mis;
    if (name == "generic" || name == "qubo") return ProblemKind::generic;
    throw std::invalid_argument("unknown problem kind: " + name);
}

std::string to_string(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::maxcut: return "maxcut";
        case ProblemKind::mis: return "mis";
        case ProblemKind::generic: return "generic";
    }
    return "generic";
}

Bitstring project(const std::vector<double>& p, double threshold) {
    Bitstring x(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        x[i] = (p[i] >= threshold) ? 1 : 0;
    }
    return x;
}

Bitstring repair_mis(const Graph& g, const Bitstring& x) {
    if (x.size() != static_cast<std::size_t>(g.vertex_count())) {
        throw std::invalid_argument("repair_mis: length mismatch");
    }
    Bitstring repaired = x;
    // Degree within the currently selected set.
    std::vector<int> set_degree(x.size(), 0);
    for (const Edge& e : g.edges()) {
        if (repaired[e.u] && repaired[e.v]) {
            ++set_degree[e.u];
            ++set_degree[e.v];
        }
    }
    for (const Edge& e : g.edges()) {
        if (!(repaired[e.u] && repaired[e.v])) continue;
        int drop;
        if (set_degree[e.u] > set_degree[e.v]) {
            drop = e.u;
        } else if (set_degree[e.v] > set_degree[e.u]) {
            drop = e.v;
        } else {
            drop = std::max(e.u, e.v);
        }
        repaired[drop] = 0;
        for (const Neighbor& nb : g.neighbors(drop)) {
            if (repaired[nb.to]) --set_degree[nb.to];
        }
        set_degree[drop] = 0;
    }
    return repaired;
}

Bitstring greedy_bitflip_polish(const QuboInstance& q, const Bitstring& x) {
    if (x.size() != static_cast<std::size_t>(q.variable_count())) {
        throw std::invalid_argument("greedy_bitflip_polish: length mismatch");
    }
    const int n = q.variable_count();
    Bitstring current = x;
    // Field of variable k: Q_kk + sum_{j != k} Q_kj x_j. Flipping k changes
    // the energy by +field (0 -> 1) or -field (1 -> 0).
    std::vector<double> field(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        double f = q.diagonal(k);
        for (const Neighbor& c : q.couplings(k)) {
            if (current[c.to]) f += c.weight;
        }
        field[static_cast<std::size_t>(k)] = f;
    }
    while (true) {
        int best = -1;
        double best_delta = 0.0;
        for (int k = 0; k < n; ++k) {
            const double delta = current[k] ? -field[static_cast<std::size_t>(k)]
                                            : field[static_cast<std::size_t>(k)];
            if (delta < best_delta) {
                best_delta = delta;
                best = k;
            }
        }
        if (best < 0) break;
        const double sign = current[best] ? -1.0 : 1.0;
        current[best] ^= 1;
        for (const Neighbor& c : q.couplings(best)) {
            field[static_cast<std::size_t>(c.to)] += sign * c.weight;
        }
    }
    return current;
}

std::string solve_result_to_json(const SolveResult& result) {
    nlohmann::json j;
    std::string bits(result.bitstring.size(), '0');
    for (std::size_t i = 0; i < result.bitstring.size(); ++i) {
        if (result.bitstring[i]) bits[i] = '1';
    }
    j["bitstring"] = bits;
    j["energy"] = result.energy;
    j["metric"] = result.metric;
    j["shot_index"] = result.shot_index;
    j["epoch_found"] = result.epoch_found;
    j["wall_time_ms"] = result.wall_time_ms;
    j["shots_run"] = result.shots_run;
    j["repaired"] = result.repaired;
    return j.dump(2);
}

namespace {

struct ShotOutcome {
    TrainTrace trace;
    TrainedModel model;
};

} // namespace

SolveResult solve(const Graph& g, const QuboInstance& q, ProblemKind kind,
                  const TrainConfig& cfg, const SolveOptions& options, SolveTiming* timing) {
    cfg.validate();
    if (q.variable_count() != g.vertex_count()) {
        throw std::invalid_argument("solve: qubo size does not match graph");
    }
    const auto start = std::chrono::steady_clock::now();

    const int shots = cfg.shots;
    std::vector<ShotOutcome> outcomes(static_cast<std::size_t>(shots));
    const bool capture = options.capture_model != nullptr;

    auto run_shot = [&](int s) {
        ShotOutcome& out = outcomes[static_cast<std::size_t>(s)];
        out.trace = train_single_shot(g, q, cfg, cfg.seed + static_cast<std::uint64_t>(s),
                                      capture ? &out.model : nullptr);
    };

    const int worker_count = std::max(1, std::min(options.threads, shots));
    if (worker_count == 1) {
        for (int s = 0; s < shots; ++s) run_shot(s);
    } else {
        std::vector<std::thread> workers;
        std::exception_ptr failure;
        std::mutex failure_mutex;
        for (int w = 0; w < worker_count; ++w) {
            workers.emplace_back([&, w]() {
                try {
                    for (int s = w; s < shots; s += worker_count) run_shot(s);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
        for (auto& t : workers) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    const auto trained = std::chrono::steady_clock::now();

    // Deterministic merge: each shot contributes its best candidate; repair
    // and polish are applied per candidate before comparison.
    SolveResult result;
    bool have_best = false;
    double best_key_energy = 0.0;
    for (int s = 0; s < shots; ++s) {
        const TrainTrace& trace = outcomes[static_cast<std::size_t>(s)].trace;
        if (trace.best_epoch < 0) continue;
        Bitstring candidate = trace.best_bitstring;
        bool repaired = false;
        if (kind == ProblemKind::mis) {
            Bitstring fixed = repair_mis(g, candidate);
            repaired = fixed != candidate;
            candidate = std::move(fixed);
        }
        if (options.polish) {
            candidate = greedy_bitflip_polish(q, candidate);
            if (kind == ProblemKind::mis) {
                Bitstring fixed = repair_mis(g, candidate);
                repaired = repaired || fixed != candidate;
                candidate = std::move(fixed);
            }
        }
        const double energy = q.energy(candidate);
        const bool better = !have_best || energy < best_key_energy;
        if (better) {
            have_best = true;
            best_key_energy = energy;
            result.bitstring = std::move(candidate);
            result.energy = energy;
            result.shot_index = s;
            result.epoch_found = trace.best_epoch;
            result.repaired = repaired;
            if (capture) {
                *options.capture_model = std::move(outcomes[static_cast<std::size_t>(s)].model);
            }
        }
    }
    if (!have_best) {
        throw std::runtime_error("solve: empty candidate pool");
    }

    switch (kind) {
        case ProblemKind::maxcut:
            result.metric = cut_size(g, result.bitstring);
            break;
        case ProblemKind::mis:
            result.metric = independence_check(g, result.bitstring).size;
            break;
        case ProblemKind::generic:
            result.metric = -result.energy;
            break;
    }
    result.shots_run = shots;

    const auto finished = std::chrono::steady_clock::now();
    result.wall_time_ms =
        std::chrono::duration<double, std::milli>(finished - start).count();
    if (timing) {
        timing->training_ms =
            std::chrono::duration<double, std::milli>(trained - start).count();
        timing->post_ms =
            std::chrono::duration<double, std::milli>(finished - trained).count();
    }
    return result;
}

} // namespace qopt
