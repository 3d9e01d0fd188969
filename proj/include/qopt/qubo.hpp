#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qopt/graph.hpp"

namespace qopt {

/// Binary assignment; entries are 0 or 1.
using Bitstring = std::vector<std::uint8_t>;

/// One upper-triangular coefficient, i <= j. Diagonal entries (i == j)
/// carry the linear part, folded in via x_i^2 = x_i.
struct QuboTerm {
    int i = 0;
    int j = 0;
    double coeff = 0.0;
};

/// Sparse QUBO Hamiltonian
///
///   H(x) = offset + sum_{i<=j} Q_ij x_i x_j,  x in {0,1}^n.
///
/// Terms are stored upper-triangular only; symmetric or duplicate inputs
/// are folded by summation at construction and exact-zero coefficients
/// are dropped. Note the x2 relation to the symmetric-matrix convention:
/// a symmetric Q' with Q'_ij = Q'_ji = c contributes 2c to the single
/// stored coefficient here. Instances are immutable and evaluation is
/// safe for concurrent use.
class QuboInstance {
public:
    QuboInstance() = default;
    QuboInstance(int n, const std::vector<QuboTerm>& terms, double offset = 0.0);

    int variable_count() const { return n_; }
    double offset() const { return offset_; }

    /// Canonical term list: sorted by (i, j), i <= j, no zero coefficients.
    const std::vector<QuboTerm>& terms() const { return terms_; }

    double diagonal(int i) const { return diag_[i]; }

    /// Off-diagonal couplings of variable i, symmetric view (each stored
    /// coefficient appears in both endpoint lists).
    const std::vector<Neighbor>& couplings(int i) const { return coupling_[i]; }

    double energy(const Bitstring& x) const;

    /// Energy change if bit k were flipped in x. O(deg k).
    double flip_delta(const Bitstring& x, int k) const;

    /// Relaxed loss L(p) = offset + sum_{i<=j} Q_ij p_i p_j with
    /// p in [0,1]^n. Entries may stray from the unit interval by at most
    /// 1e-9 (they are clamped); anything further is rejected.
    double relaxed_loss(const std::vector<double>& p) const;

    /// Same loss; also writes dL/dp_k = 2 Q_kk p_k + sum_{j != k} Q_kj p_j.
    double relaxed_loss_and_gradient(const std::vector<double>& p,
                                     std::vector<double>& grad) const;

private:
    int n_ = 0;
    double offset_ = 0.0;
    std::vector<QuboTerm> terms_;
    std::vector<double> diag_;
    std::vector<std::vector<Neighbor>> coupling_;
};

/// One k-local monomial: coeff * prod_{v in vars} x_v, k >= 1.
struct PuboTerm {
    std::vector<int> vars;   // sorted ascending, distinct
    double coeff = 0.0;
};

/// Sparse PUBO Hamiltonian: offset + sum of k-local monomials.
/// Duplicate tuples are folded by summation; zero coefficients dropped.
class PuboInstance {
public:
    PuboInstance() = default;
    PuboInstance(int n, std::vector<PuboTerm> terms, double offset = 0.0);

    int variable_count() const { return n_; }
    double offset() const { return offset_; }
    const std::vector<PuboTerm>& terms() const { return terms_; }

    double energy(const Bitstring& x) const;
    double relaxed_loss(const std::vector<double>& p) const;
    double relaxed_loss_and_gradient(const std::vector<double>& p,
                                     std::vector<double>& grad) const;

private:
    int n_ = 0;
    double offset_ = 0.0;
    std::vector<PuboTerm> terms_;
};

/// Ising Hamiltonian over spins z in {-1,+1}^n:
///   H(z) = offset + sum_{i<j} J_ij z_i z_j + sum_i h_i z_i.
class IsingInstance {
public:
    IsingInstance() = default;
    IsingInstance(int n, const std::vector<QuboTerm>& couplings,
                  std::vector<double> fields, double offset = 0.0);

    int variable_count() const { return n_; }
    double offset() const { return offset_; }
    const std::vector<QuboTerm>& couplings() const { return couplings_; }
    const std::vector<double>& fields() const { return fields_; }

    /// spins entries must be -1 or +1.
    double energy(const std::vector<int>& spins) const;

private:
    int n_ = 0;
    double offset_ = 0.0;
    std::vector<QuboTerm> couplings_;   // i < j strictly
    std::vector<double> fields_;
};

/// Exact change of variables z_i = 2 x_i - 1; energies agree pointwise,
/// offsets included.
QuboInstance ising_to_qubo(const IsingInstance& ising);
IsingInstance qubo_to_ising(const QuboInstance& q);

/// MaxCut Hamiltonian sum_{i<j} A_ij (2 x_i x_j - x_i - x_j):
/// Q_ii = -(weighted degree of i), Q_ij = 2 A_ij per edge, offset 0.
/// Minimizing it maximizes the cut; cut(x) = -energy(x).
QuboInstance build_maxcut_qubo(const Graph& g);

/// MIS Hamiltonian -sum_i x_i + P sum_edges x_i x_j; penalty P > 0
/// (default 2) makes independence violations energetically unfavorable.
QuboInstance build_mis_qubo(const Graph& g, double penalty = 2.0);

/// Total weight of edges with endpoints on opposite sides.
double cut_size(const Graph& g, const Bitstring& x);

struct IndependenceReport {
    int size = 0;
    std::vector<std::pair<int, int>> violated_edges;
};

/// Set size and all edges with both endpoints selected.
IndependenceReport independence_check(const Graph& g, const Bitstring& x);

/// Line-oriented text formats, 0-based indices:
///   QUBO: "n", then "i j c" per term (i <= j), then "offset c".
///   PUBO: "n", then "k i1 ... ik c" per term, then "offset c".
QuboInstance parse_qubo_text(std::string_view text);
std::string to_qubo_text(const QuboInstance& q);
PuboInstance parse_pubo_text(std::string_view text);
std::string to_pubo_text(const PuboInstance& p);

} // namespace qopt
