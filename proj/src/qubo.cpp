#include "qopt/qubo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qopt {

namespace {

constexpr double kProbabilityTolerance = 1e-9;

void check_length(std::size_t got, int expected, const char* what) {
    if (got != static_cast<std::size_t>(expected)) {
        throw std::invalid_argument(std::string(what) + ": length mismatch");
    }
}

double clamp_probability(double p, const char* what) {
    if (p < -kProbabilityTolerance || p > 1.0 + kProbabilityTolerance) {
        throw std::invalid_argument(std::string(what) + ": probability out of [0,1]");
    }
    return std::min(1.0, std::max(0.0, p));
}

} // namespace

QuboInstance::QuboInstance(int n, const std::vector<QuboTerm>& terms, double offset)
    : n_(n), offset_(offset) {
    if (n < 0) {
        throw std::invalid_argument("qubo: variable count must be non-negative");
    }
    std::map<std::pair<int, int>, double> folded;
    for (const QuboTerm& t : terms) {
        if (t.i < 0 || t.i >= n || t.j < 0 || t.j >= n) {
            throw std::out_of_range("qubo: term index out of range");
        }
        int i = t.i;
        int j = t.j;
        if (i > j) std::swap(i, j);
        folded[{i, j}] += t.coeff;
    }
    diag_.assign(n_, 0.0);
    coupling_.assign(n_, {});
    for (const auto& [key, c] : folded) {
        if (c == 0.0) continue;
        terms_.push_back({key.first, key.second, c});
        if (key.first == key.second) {
            diag_[key.first] = c;
        } else {
            coupling_[key.first].push_back({key.second, c});
            coupling_[key.second].push_back({key.first, c});
        }
    }
    for (auto& list : coupling_) {
        std::sort(list.begin(), list.end(),
                  [](const Neighbor& a, const Neighbor& b) { return a.to < b.to; });
    }
}

double QuboInstance::energy(const Bitstring& x) const {
    check_length(x.size(), n_, "qubo energy");
    double e = offset_;
    for (const QuboTerm& t : terms_) {
        if (x[t.i] && x[t.j]) {
            e += t.coeff;
        }
    }
    return e;
}

double QuboInstance::flip_delta(const Bitstring& x, int k) const {
    check_length(x.size(), n_, "qubo flip_delta");
    double field = diag_[k];
    for (const Neighbor& c : coupling_[k]) {
        if (x[c.to]) field += c.weight;
    }
    return x[k] ? -field : field;
}

double QuboInstance::relaxed_loss(const std::vector<double>& p) const {
    check_length(p.size(), n_, "qubo relaxed_loss");
    double loss = offset_;
    for (const QuboTerm& t : terms_) {
        const double pi = clamp_probability(p[t.i], "qubo relaxed_loss");
        const double pj = clamp_probability(p[t.j], "qubo relaxed_loss");
        loss += t.coeff * pi * pj;
    }
    return loss;
}

double QuboInstance::relaxed_loss_and_gradient(const std::vector<double>& p,
                                               std::vector<double>& grad) const {
    check_length(p.size(), n_, "qubo relaxed_loss_and_gradient");
    std::vector<double> pc(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        pc[i] = clamp_probability(p[i], "qubo relaxed_loss_and_gradient");
    }
    grad.assign(n_, 0.0);
    double loss = offset_;
    for (int i = 0; i < n_; ++i) {
        loss += diag_[i] * pc[i] * pc[i];
        grad[i] += 2.0 * diag_[i] * pc[i];
    }
    for (int i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (const Neighbor& c : coupling_[i]) {
            acc += c.weight * pc[c.to];
            if (c.to > i) {
                loss += c.weight * pc[i] * pc[c.to];
            }
        }
        grad[i] += acc;
    }
    return loss;
}

PuboInstance::PuboInstance(int n, std::vector<PuboTerm> terms, double offset)
    : n_(n), offset_(offset) {
    if (n < 0) {
        throw std::invalid_argument("pubo: variable count must be non-negative");
    }
    std::map<std::vector<int>, double> folded;
    for (PuboTerm& t : terms) {
        if (t.vars.empty()) {
            throw std::invalid_argument("pubo: empty variable tuple (use the offset for constants)");
        }
        std::sort(t.vars.begin(), t.vars.end());
        for (std::size_t k = 0; k < t.vars.size(); ++k) {
            if (t.vars[k] < 0 || t.vars[k] >= n) {
                throw std::out_of_range("pubo: term index out of range");
            }
            if (k > 0 && t.vars[k] == t.vars[k - 1]) {
                throw std::invalid_argument("pubo: repeated index within a tuple");
            }
        }
        folded[t.vars] += t.coeff;
    }
    for (auto& [vars, c] : folded) {
        if (c == 0.0) continue;
        terms_.push_back({vars, c});
    }
}

double PuboInstance::energy(const Bitstring& x) const {
    check_length(x.size(), n_, "pubo energy");
    double e = offset_;
    for (const PuboTerm& t : terms_) {
        bool all_set = true;
        for (int v : t.vars) {
            if (!x[v]) {
                all_set = false;
                break;
            }
        }
        if (all_set) e += t.coeff;
    }
    return e;
}

double PuboInstance::relaxed_loss(const std::vector<double>& p) const {
    check_length(p.size(), n_, "pubo relaxed_loss");
    double loss = offset_;
    for (const PuboTerm& t : terms_) {
        double prod = t.coeff;
        for (int v : t.vars) {
            prod *= clamp_probability(p[v], "pubo relaxed_loss");
        }
        loss += prod;
    }
    return loss;
}

double PuboInstance::relaxed_loss_and_gradient(const std::vector<double>& p,
                                               std::vector<double>& grad) const {
    check_length(p.size(), n_, "pubo relaxed_loss_and_gradient");
    std::vector<double> pc(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        pc[i] = clamp_probability(p[i], "pubo relaxed_loss_and_gradient");
    }
    grad.assign(n_, 0.0);
    double loss = offset_;
    for (const PuboTerm& t : terms_) {
        double prod = t.coeff;
        for (int v : t.vars) {
            prod *= pc[v];
        }
        loss += prod;
        // Product rule: d/dp_v = coeff * prod over the other factors.
        for (int v : t.vars) {
            double partial = t.coeff;
            for (int u : t.vars) {
                if (u != v) partial *= pc[u];
            }
            grad[v] += partial;
        }
    }
    return loss;
}

IsingInstance::IsingInstance(int n, const std::vector<QuboTerm>& couplings,
                             std::vector<double> fields, double offset)
    : n_(n), offset_(offset) {
    if (n < 0) {
        throw std::invalid_argument("ising: variable count must be non-negative");
    }
    if (fields.empty()) {
        fields.assign(n_, 0.0);
    }
    check_length(fields.size(), n_, "ising fields");
    fields_ = std::move(fields);
    std::map<std::pair<int, int>, double> folded;
    for (const QuboTerm& t : couplings) {
        if (t.i < 0 || t.i >= n || t.j < 0 || t.j >= n) {
            throw std::out_of_range("ising: coupling index out of range");
        }
        if (t.i == t.j) {
            throw std::invalid_argument("ising: self-coupling rejected");
        }
        int i = t.i;
        int j = t.j;
        if (i > j) std::swap(i, j);
        folded[{i, j}] += t.coeff;
    }
    for (const auto& [key, c] : folded) {
        if (c == 0.0) continue;
        couplings_.push_back({key.first, key.second, c});
    }
}

double IsingInstance::energy(const std::vector<int>& spins) const {
    check_length(spins.size(), n_, "ising energy");
    for (int s : spins) {
        if (s != -1 && s != 1) {
            throw std::invalid_argument("ising energy: spins must be -1 or +1");
        }
    }
    double e = offset_;
    for (const QuboTerm& c : couplings_) {
        e += c.coeff * spins[c.i] * spins[c.j];
    }
    for (int i = 0; i < n_; ++i) {
        e += fields_[i] * spins[i];
    }
    return e;
}

QuboInstance ising_to_qubo(const IsingInstance& ising) {
    // Substitute z_i = 2 x_i - 1 and expand:
    //   J z_i z_j = 4J x_i x_j - 2J x_i - 2J x_j + J
    //   h z_i     = 2h x_i - h
    const int n = ising.variable_count();
    std::vector<QuboTerm> terms;
    double offset = ising.offset();
    for (const QuboTerm& c : ising.couplings()) {
        terms.push_back({c.i, c.j, 4.0 * c.coeff});
        terms.push_back({c.i, c.i, -2.0 * c.coeff});
        terms.push_back({c.j, c.j, -2.0 * c.coeff});
        offset += c.coeff;
    }
    for (int i = 0; i < n; ++i) {
        const double h = ising.fields()[i];
        if (h != 0.0) {
            terms.push_back({i, i, 2.0 * h});
            offset -= h;
        }
    }
    return QuboInstance(n, terms, offset);
}

IsingInstance qubo_to_ising(const QuboInstance& q) {
    // Substitute x_i = (z_i + 1)/2 and expand:
    //   Q_ij x_i x_j = Q/4 (z_i z_j + z_i + z_j + 1),  i < j
    //   Q_ii x_i     = Q/2 z_i + Q/2
    const int n = q.variable_count();
    std::vector<QuboTerm> couplings;
    std::vector<double> fields(n, 0.0);
    double offset = q.offset();
    for (const QuboTerm& t : q.terms()) {
        if (t.i == t.j) {
            fields[t.i] += 0.5 * t.coeff;
            offset += 0.5 * t.coeff;
        } else {
            couplings.push_back({t.i, t.j, 0.25 * t.coeff});
            fields[t.i] += 0.25 * t.coeff;
            fields[t.j] += 0.25 * t.coeff;
            offset += 0.25 * t.coeff;
        }
    }
    return IsingInstance(n, couplings, std::move(fields), offset);
}

QuboInstance build_maxcut_qubo(const Graph& g) {
    std::vector<QuboTerm> terms;
    terms.reserve(static_cast<std::size_t>(g.vertex_count()) + g.edges().size());
    for (int v = 0; v < g.vertex_count(); ++v) {
        terms.push_back({v, v, -g.weighted_degree(v)});
    }
    for (const Edge& e : g.edges()) {
        terms.push_back({e.u, e.v, 2.0 * e.weight});
    }
    return QuboInstance(g.vertex_count(), terms, 0.0);
}

QuboInstance build_mis_qubo(const Graph& g, double penalty) {
    if (penalty <= 0.0) {
        throw std::invalid_argument("build_mis_qubo: penalty must be positive");
    }
    std::vector<QuboTerm> terms;
    terms.reserve(static_cast<std::size_t>(g.vertex_count()) + g.edges().size());
    for (int v = 0; v < g.vertex_count(); ++v) {
        terms.push_back({v, v, -1.0});
    }
    for (const Edge& e : g.edges()) {
        terms.push_back({e.u, e.v, penalty});
    }
    return QuboInstance(g.vertex_count(), terms, 0.0);
}

double cut_size(const Graph& g, const Bitstring& x) {
    check_length(x.size(), g.vertex_count(), "cut_size");
    double cut = 0.0;
    for (const Edge& e : g.edges()) {
        if (x[e.u] != x[e.v]) {
            cut += e.weight;
        }
    }
    return cut;
}

IndependenceReport independence_check(const Graph& g, const Bitstring& x) {
    check_length(x.size(), g.vertex_count(), "independence_check");
    IndependenceReport report;
    for (std::uint8_t b : x) {
        report.size += b ? 1 : 0;
    }
    for (const Edge& e : g.edges()) {
        if (x[e.u] && x[e.v]) {
            report.violated_edges.emplace_back(e.u, e.v);
        }
    }
    return report;
}

namespace {

std::vector<std::string> split_lines(std::string_view text) {
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
        if (!blank) lines.emplace_back(line);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return lines;
}

} // namespace

QuboInstance parse_qubo_text(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty()) {
        throw std::runtime_error("qubo parse: empty input");
    }
    int n = 0;
    {
        std::istringstream header(lines[0]);
        std::string extra;
        if (!(header >> n) || (header >> extra) || n < 0) {
            throw std::runtime_error("qubo parse: malformed header");
        }
    }
    std::vector<QuboTerm> terms;
    double offset = 0.0;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        std::istringstream line(lines[k]);
        std::string first;
        line >> first;
        if (first == "offset") {
            std::string extra;
            if (!(line >> offset) || (line >> extra)) {
                throw std::runtime_error("qubo parse: malformed offset line");
            }
            continue;
        }
        int i = 0;
        int j = 0;
        double c = 0.0;
        std::istringstream full(lines[k]);
        std::string extra;
        if (!(full >> i >> j >> c) || (full >> extra)) {
            throw std::runtime_error("qubo parse: malformed term line: " + lines[k]);
        }
        terms.push_back({i, j, c});
    }
    return QuboInstance(n, terms, offset);
}

std::string to_qubo_text(const QuboInstance& q) {
    std::ostringstream out;
    out.precision(17);
    out << q.variable_count() << '\n';
    for (const QuboTerm& t : q.terms()) {
        out << t.i << ' ' << t.j << ' ' << t.coeff << '\n';
    }
    out << "offset " << q.offset() << '\n';
    return out.str();
}

PuboInstance parse_pubo_text(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty()) {
        throw std::runtime_error("pubo parse: empty input");
    }
    int n = 0;
    {
        std::istringstream header(lines[0]);
        std::string extra;
        if (!(header >> n) || (header >> extra) || n < 0) {
            throw std::runtime_error("pubo parse: malformed header");
        }
    }
    std::vector<PuboTerm> terms;
    double offset = 0.0;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        std::istringstream line(lines[k]);
        std::string first;
        line >> first;
        if (first == "offset") {
            std::string extra;
            if (!(line >> offset) || (line >> extra)) {
                throw std::runtime_error("pubo parse: malformed offset line");
            }
            continue;
        }
        std::istringstream full(lines[k]);
        int arity = 0;
        if (!(full >> arity) || arity < 1) {
            throw std::runtime_error("pubo parse: malformed term line: " + lines[k]);
        }
        PuboTerm term;
        term.vars.resize(static_cast<std::size_t>(arity));
        for (int v = 0; v < arity; ++v) {
            if (!(full >> term.vars[static_cast<std::size_t>(v)])) {
                throw std::runtime_error("pubo parse: malformed term line: " + lines[k]);
            }
        }
        std::string extra;
        if (!(full >> term.coeff) || (full >> extra)) {
            throw std::runtime_error("pubo parse: malformed term line: " + lines[k]);
        }
        terms.push_back(std::move(term));
    }
    return PuboInstance(n, std::move(terms), offset);
}

std::string to_pubo_text(const PuboInstance& p) {
    std::ostringstream out;
    out.precision(17);
    out << p.variable_count() << '\n';
    for (const PuboTerm& t : p.terms()) {
        out << t.vars.size();
        for (int v : t.vars) {
            out << ' ' << v;
        }
        out << ' ' << t.coeff << '\n';
    }
    out << "offset " << p.offset() << '\n';
    return out.str();
}

} // namespace qopt
