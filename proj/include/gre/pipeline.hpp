#ifndef GRE_PIPELINE_HPP
#define GRE_PIPELINE_HPP

#include <optional>
#include <span>
#include <vector>

#include "gre/estimators.hpp"
#include "gre/models.hpp"
#include "gre/symmetric_matrix.hpp"

namespace gre {

/// Outcome of scree-based dimension selection.
struct DimSelection {
  std::vector<int> elbows;            // strictly increasing candidate dims
  int chosen = 0;                     // the elbow actually used
  std::vector<double> profile_loglik; // first-pass trace, one entry per split
};

struct DimMode {
  enum class Kind { Fixed, ZhuGhodsiElbow };
  Kind kind = Kind::Fixed;
  int value = 1;  // Fixed: the dimension d; ZhuGhodsiElbow: the elbow index k

  static DimMode fixed(int d) { return {Kind::Fixed, d}; }
  static DimMode zhu_ghodsi(int elbow = 3) {
    return {Kind::ZhuGhodsiElbow, elbow};
  }
};

enum class Augmentation { None, MarchettePlusOneScheinerman };

struct PipelineConfig {
  QParam q{1.0};
  DimMode dim_mode = DimMode::fixed(1);
  Augmentation augmentation = Augmentation::MarchettePlusOneScheinerman;
  bool clamp_negative = true;
  std::optional<RBound> truncation;  // off by default
};

/// Step 1 of the augmentation: a_ii <- (sum_{j != i} a_ij) / (n-1).
/// Off-diagonals are copied bit-exactly. Requires a hollow input.
SymmetricMatrix marchette_row_average(const SymmetricMatrix& a);

/// Row-average diagonal followed by one Scheinerman refresh: the diagonal is
/// replaced by the diagonal of lowrank_d of the row-averaged matrix.
SymmetricMatrix augment_diagonal(const SymmetricMatrix& a, int d);

/// Scree-gap dimension selection: elbow 1 maximizes the two-segment Gaussian
/// profile log-likelihood (pooled ML variance) over split points; elbow k+1
/// re-runs on the tail after elbow k. `chosen` is elbow number num_elbows.
/// A constant list has zero pooled variance everywhere and returns split 1.
DimSelection zhu_ghodsi_elbows(std::span<const double> eigs, int num_elbows);

struct LowRankEstimate {
  SymmetricMatrix estimate;
  DimSelection dims;

  LowRankEstimate(int n) : estimate(n) {}
};

/// Rank truncation of an already-computed entry-wise estimate: dimension
/// selection, diagonal augmentation, lowrank_d, nonnegativity clamp and the
/// optional truncation, in that order.
LowRankEstimate refine_low_rank(const SymmetricMatrix& entrywise,
                                const PipelineConfig& cfg);

/// Full pipeline from graphs: entry-wise estimate at cfg.q, then
/// refine_low_rank.
LowRankEstimate low_rank_estimate(std::span<const SymmetricMatrix> graphs,
                                  const PipelineConfig& cfg, WeightFamily family);

}  // namespace gre

#endif
