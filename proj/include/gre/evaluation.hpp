#ifndef GRE_EVALUATION_HPP
#define GRE_EVALUATION_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "gre/models.hpp"
#include "gre/pipeline.hpp"
#include "gre/symmetric_matrix.hpp"

namespace gre {

/// The four estimators compared throughout: the entry-wise MLE and MLqE,
/// and their low-rank refinements.
enum class Estimator : int { Mle = 0, Mlqe = 1, AseMle = 2, AseMlqe = 3 };
inline constexpr std::array<const char*, 4> kEstimatorNames = {
    "mle", "mlqe", "ase_mle", "ase_mlqe"};

/// Full Monte Carlo experiment description. The grids multiply out; each
/// cell runs `replicates` paired draws. cfg.pipeline.q is overridden per
/// cell by the q grid.
struct McConfig {
  WsbmSpec spec;
  ContaminationSpec cont_template;  // epsilon ignored; comes from the grid
  std::vector<double> epsilon_grid;
  std::vector<double> q_grid;
  std::vector<int> n_grid;
  std::vector<int> m_grid;
  int replicates = 1;
  std::uint64_t base_seed = 0;
  PipelineConfig pipeline;

  void validate() const;
  std::size_t cell_count() const {
    return epsilon_grid.size() * q_grid.size() * n_grid.size() * m_grid.size();
  }
};

struct CellIndex {
  int eps = 0, q = 0, n = 0, m = 0;
};

/// One replicate's paired result: all four estimators on the same draw.
struct CellResult {
  std::array<double, 4> mse{};
  std::uint64_t draw_digest = 0;  // digest of the shared graph sample
};

struct CellStats {
  double epsilon = 0.0, q = 1.0;
  int n = 0, m = 0, replicates = 0;
  std::array<double, 4> mse_mean{};
  std::array<double, 4> mse_se{};
};

/// Cells in grid order: epsilon outermost, then q, n, m.
struct McResult {
  std::vector<CellStats> cells;
};

/// Mean of (estimate_ij - truth_ij)^2 over i<j; the diagonal never counts.
double mse_offdiag(const SymmetricMatrix& estimate, const SymmetricMatrix& truth);

/// Seed for one (cell, replicate): a chained hash of the base seed and the
/// grid indices, so reshaping one grid axis leaves other cells untouched.
std::uint64_t cell_seed(const McConfig& cfg, const CellIndex& cell, int replicate);

/// Runs the four estimators on one fresh population draw. Paired by
/// construction: a single sample feeds all four.
CellResult run_cell(const McConfig& cfg, const CellIndex& cell, int replicate);

/// Full grid sweep. Deterministic given base_seed: replicates execute in
/// parallel but aggregate in index order, so the result is identical for any
/// worker count.
McResult run_experiment(const McConfig& cfg, int max_threads = 0);

/// Empirical variance ratios var(lowrank)/var(entrywise) at a fixed tracked
/// edge (the lexicographically first pair inside block 1), per n. The block
/// assignment is drawn once per n and held fixed across replicates, so the
/// variances are conditional on tau as in the theory.
struct VarianceRatioPoint {
  int n = 0;
  double var_entry_mle = 0.0, var_lowrank_mle = 0.0, ratio_mle = 0.0;
  double var_entry_mlqe = 0.0, var_lowrank_mlqe = 0.0, ratio_mlqe = 0.0;
  bool has_mlqe = false;
};

std::vector<VarianceRatioPoint> variance_ratio_probe(
    const WsbmSpec& spec, const ContaminationSpec& cont, QParam q,
    std::span<const int> n_list, int m, int replicates, std::uint64_t seed,
    const PipelineConfig& pipeline, bool include_mlqe = true,
    int max_threads = 0);

}  // namespace gre

#endif
