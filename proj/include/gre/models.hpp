#ifndef GRE_MODELS_HPP
#define GRE_MODELS_HPP

#include <cstdint>
#include <vector>

#include "gre/rng.hpp"
#include "gre/symmetric_matrix.hpp"

namespace gre {

/// One-parameter edge-weight family; theta is the mean in both cases.
enum class WeightFamily { Exponential, Poisson };

/// Upper bound R on all parameter entries (theta in [0, R]).
struct RBound {
  double R = 0.0;
};

/// Small dense K-by-K symmetric block matrix with strictly positive entries.
class BlockMatrix {
 public:
  BlockMatrix() = default;
  BlockMatrix(int k, std::vector<double> row_major);

  int blocks() const { return k_; }
  double operator()(int i, int j) const {
    return values_[static_cast<std::size_t>(i) * k_ + j];
  }
  double max_entry() const;

 private:
  int k_ = 0;
  std::vector<double> values_;
};

/// Uncontaminated weighted SBM: block parameter matrix B, block
/// proportions rho, and the edge-weight family.
struct WsbmSpec {
  BlockMatrix B;
  std::vector<double> rho;
  WeightFamily family = WeightFamily::Exponential;

  int blocks() const { return B.blocks(); }
  void validate() const;
};

/// Contamination component: block matrix B' and per-edge contamination
/// probability epsilon. The contamination shares the block assignment tau.
struct ContaminationSpec {
  BlockMatrix Bprime;
  double epsilon = 0.0;

  void validate() const;
};

/// Block labels, 0-based, one per vertex.
struct BlockAssignment {
  std::vector<int> labels;

  int n() const { return static_cast<int>(labels.size()); }
};

/// i.i.d. categorical block labels from rho. The caller holds tau fixed
/// across all m graphs of a population.
BlockAssignment sample_tau(const WsbmSpec& spec, int n, RandomStream rng);

/// P_ij = B[tau_i][tau_j]; the diagonal stores B[tau_i][tau_i] for reference
/// but samplers never read it (graphs are hollow).
SymmetricMatrix block_parameter_matrix(const BlockMatrix& b,
                                       const BlockAssignment& tau);
SymmetricMatrix build_P(const WsbmSpec& spec, const BlockAssignment& tau);

/// One graph draw: for each i<j independently, with probability 1-epsilon
/// the weight comes from f_{P_ij}, otherwise from f_{C_ij}; mirrored, hollow.
/// Each edge consumes its own (i,j)-keyed substream, so the output is
/// bit-identical for a given stream regardless of scheduling.
SymmetricMatrix sample_graph(const SymmetricMatrix& P, const SymmetricMatrix& C,
                             double epsilon, WeightFamily family,
                             RandomStream rng);

struct Population {
  BlockAssignment tau;
  SymmetricMatrix P;
  SymmetricMatrix C;
  std::vector<SymmetricMatrix> graphs;

  Population(int n) : P(n), C(n) {}
};

/// One tau draw, P from B and C from B' sharing that tau, then m i.i.d.
/// graphs from the contaminated mixture.
Population sample_population(const WsbmSpec& spec, const ContaminationSpec& cont,
                             int n, int m, RandomStream rng);

}  // namespace gre

#endif
