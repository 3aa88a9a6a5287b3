#include "gre/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gre/eigen.hpp"
#include "gre/errors.hpp"

namespace gre {

SymmetricMatrix marchette_row_average(const SymmetricMatrix& a) {
  if (!a.is_hollow())
    throw InputError("marchette_row_average: input must be hollow");
  const int n = a.size();
  SymmetricMatrix out(n);
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      sum += a(i, j);
      if (j > i) out.set_pair(i, j, a(i, j));
    }
    out.set_pair(i, i, sum / static_cast<double>(n - 1));
  }
  return out;
}

SymmetricMatrix augment_diagonal(const SymmetricMatrix& a, int d) {
  const int n = a.size();
  if (d < 1 || d > n) throw InputError("augment_diagonal: d out of range");
  SymmetricMatrix step1 = marchette_row_average(a);
  SymmetricMatrix low = lowrank_d(step1, d);
  for (int i = 0; i < n; ++i) step1.set_pair(i, i, low(i, i));
  return step1;
}

namespace {

// Two-segment Gaussian profile log-likelihood with a pooled ML variance.
// Returns -inf when the pooled variance vanishes.
double split_loglik(std::span<const double> vals, int split) {
  const int n = static_cast<int>(vals.size());
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < split; ++i) m1 += vals[i];
  for (int i = split; i < n; ++i) m2 += vals[i];
  m1 /= split;
  m2 /= (n - split);
  double ss = 0.0;
  for (int i = 0; i < split; ++i) ss += (vals[i] - m1) * (vals[i] - m1);
  for (int i = split; i < n; ++i) ss += (vals[i] - m2) * (vals[i] - m2);
  double var = ss / n;
  if (var <= 0.0) return -std::numeric_limits<double>::infinity();
  // sum of log N(x; mu_g, var) collapses to -n/2 (log(2 pi var) + 1)
  return -0.5 * n * (std::log(2.0 * std::numbers::pi * var) + 1.0);
}

// First elbow of one segment: argmax split, lowest index on ties.
int first_elbow(std::span<const double> vals, std::vector<double>* trace) {
  const int n = static_cast<int>(vals.size());
  int best = 1;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (int s = 1; s < n; ++s) {
    double ll = split_loglik(vals, s);
    if (trace) trace->push_back(ll);
    if (ll > best_ll) {
      best_ll = ll;
      best = s;
    }
  }
  if (best_ll == -std::numeric_limits<double>::infinity()) return 1;
  return best;
}

}  // namespace

DimSelection zhu_ghodsi_elbows(std::span<const double> eigs, int num_elbows) {
  const int n = static_cast<int>(eigs.size());
  if (num_elbows < 1) throw InputError("zhu_ghodsi_elbows: need num_elbows >= 1");
  if (n < num_elbows + 1)
    throw InputError("zhu_ghodsi_elbows: need at least num_elbows+1 eigenvalues");
  for (int i = 1; i < n; ++i)
    if (eigs[i] > eigs[i - 1])
      throw InputError("zhu_ghodsi_elbows: eigenvalues must be non-increasing");

  DimSelection out;
  int offset = 0;
  for (int e = 0; e < num_elbows; ++e) {
    std::span<const double> tail = eigs.subspan(offset);
    if (tail.size() < 2)
      throw InputError("zhu_ghodsi_elbows: ran out of eigenvalues at elbow " +
                       std::to_string(e + 1));
    int local = first_elbow(tail, e == 0 ? &out.profile_loglik : nullptr);
    offset += local;
    out.elbows.push_back(offset);
  }
  out.chosen = out.elbows.back();
  return out;
}

LowRankEstimate refine_low_rank(const SymmetricMatrix& entrywise,
                                const PipelineConfig& cfg) {
  const int n = entrywise.size();
  const bool augmented = cfg.augmentation == Augmentation::MarchettePlusOneScheinerman;

  LowRankEstimate out(n);
  int d = 0;
  if (cfg.dim_mode.kind == DimMode::Kind::Fixed) {
    d = cfg.dim_mode.value;
    if (d < 1 || d > n) throw InputError("pipeline: fixed dimension out of range");
    out.dims.elbows = {d};
    out.dims.chosen = d;
  } else {
    // The Scheinerman refresh needs d, so dimension selection reads the
    // spectrum of the row-average-augmented estimate (step 1 only).
    SymmetricMatrix source =
        augmented ? marchette_row_average(entrywise) : entrywise;
    EigenPair eig = eig_sym(source);
    out.dims = zhu_ghodsi_elbows(eig.eigenvalues, cfg.dim_mode.value);
    d = out.dims.chosen;
  }

  SymmetricMatrix base = augmented ? augment_diagonal(entrywise, d) : entrywise;
  SymmetricMatrix q = lowrank_d(base, d);

  if (cfg.clamp_negative) {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        if (q(i, j) < 0.0) q.set_pair(i, j, 0.0);
  }
  if (cfg.truncation) q = truncate_estimate(q, entrywise, *cfg.truncation);

  out.estimate = std::move(q);
  return out;
}

LowRankEstimate low_rank_estimate(std::span<const SymmetricMatrix> graphs,
                                  const PipelineConfig& cfg, WeightFamily family) {
  SymmetricMatrix entrywise = estimate_matrix(graphs, cfg.q, family);
  return refine_low_rank(entrywise, cfg);
}

}  // namespace gre
