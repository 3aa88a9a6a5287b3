#include "gre/evaluation.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "gre/errors.hpp"
#include "gre/estimators.hpp"
#include "gre/parallel.hpp"

namespace gre {

void McConfig::validate() const {
  spec.validate();
  cont_template.validate();
  if (epsilon_grid.empty() || q_grid.empty() || n_grid.empty() || m_grid.empty())
    throw InputError("McConfig: every grid must be nonempty");
  for (double e : epsilon_grid)
    if (!(e >= 0.0 && e < 1.0))
      throw InputError("McConfig: epsilon values must lie in [0,1)");
  for (double q : q_grid) QParam{q};
  for (int n : n_grid)
    if (n < 2) throw InputError("McConfig: n values must be >= 2");
  for (int m : m_grid)
    if (m < 1) throw InputError("McConfig: m values must be >= 1");
  if (replicates < 1) throw InputError("McConfig: replicates must be >= 1");
}

double mse_offdiag(const SymmetricMatrix& estimate, const SymmetricMatrix& truth) {
  if (estimate.size() != truth.size())
    throw InputError("mse_offdiag: size mismatch");
  const int n = estimate.size();
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double d = estimate(i, j) - truth(i, j);
      sum += d * d;
    }
  return sum / (static_cast<double>(n) * (n - 1) / 2.0);
}

std::uint64_t cell_seed(const McConfig& cfg, const CellIndex& cell, int replicate) {
  std::uint64_t s = detail::mix64(cfg.base_seed);
  s = detail::mix64(s ^ detail::mix64(static_cast<std::uint64_t>(cell.eps) + 1));
  s = detail::mix64(s ^ detail::mix64(static_cast<std::uint64_t>(cell.q) + 2));
  s = detail::mix64(s ^ detail::mix64(static_cast<std::uint64_t>(cell.n) + 3));
  s = detail::mix64(s ^ detail::mix64(static_cast<std::uint64_t>(cell.m) + 4));
  s = detail::mix64(s ^ detail::mix64(static_cast<std::uint64_t>(replicate) + 5));
  return s;
}

namespace {

std::uint64_t fnv1a_bytes(std::uint64_t h, const void* data, std::size_t len) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t digest_graphs(std::span<const SymmetricMatrix> graphs) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& g : graphs)
    h = fnv1a_bytes(h, g.data().data(), g.data().size() * sizeof(double));
  return h;
}

}  // namespace

CellResult run_cell(const McConfig& cfg, const CellIndex& cell, int replicate) {
  if (cell.eps < 0 || cell.eps >= static_cast<int>(cfg.epsilon_grid.size()) ||
      cell.q < 0 || cell.q >= static_cast<int>(cfg.q_grid.size()) ||
      cell.n < 0 || cell.n >= static_cast<int>(cfg.n_grid.size()) ||
      cell.m < 0 || cell.m >= static_cast<int>(cfg.m_grid.size()) ||
      replicate < 0 || replicate >= cfg.replicates)
    throw InputError("run_cell: index out of range");

  ContaminationSpec cont = cfg.cont_template;
  cont.epsilon = cfg.epsilon_grid[cell.eps];
  const QParam q{cfg.q_grid[cell.q]};
  const int n = cfg.n_grid[cell.n];
  const int m = cfg.m_grid[cell.m];

  RandomStream rng(cell_seed(cfg, cell, replicate));
  Population pop = sample_population(cfg.spec, cont, n, m, rng);

  SymmetricMatrix mle = estimate_matrix(pop.graphs, QParam{1.0}, cfg.spec.family);
  SymmetricMatrix mlqe = q.is_mle()
                             ? mle
                             : estimate_matrix(pop.graphs, q, cfg.spec.family);

  PipelineConfig ase_cfg = cfg.pipeline;
  ase_cfg.q = QParam{1.0};
  SymmetricMatrix ase_mle = refine_low_rank(mle, ase_cfg).estimate;
  ase_cfg.q = q;
  SymmetricMatrix ase_mlqe = refine_low_rank(mlqe, ase_cfg).estimate;

  CellResult out;
  out.draw_digest = digest_graphs(pop.graphs);
  out.mse[static_cast<int>(Estimator::Mle)] = mse_offdiag(mle, pop.P);
  out.mse[static_cast<int>(Estimator::Mlqe)] = mse_offdiag(mlqe, pop.P);
  out.mse[static_cast<int>(Estimator::AseMle)] = mse_offdiag(ase_mle, pop.P);
  out.mse[static_cast<int>(Estimator::AseMlqe)] = mse_offdiag(ase_mlqe, pop.P);
  return out;
}

McResult run_experiment(const McConfig& cfg, int max_threads) {
  cfg.validate();
  const std::size_t cells = cfg.cell_count();
  const std::size_t reps = static_cast<std::size_t>(cfg.replicates);
  const std::size_t jobs = cells * reps;

  std::vector<CellResult> results(jobs);
  std::vector<CellIndex> index(cells);
  {
    std::size_t c = 0;
    for (std::size_t e = 0; e < cfg.epsilon_grid.size(); ++e)
      for (std::size_t qi = 0; qi < cfg.q_grid.size(); ++qi)
        for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni)
          for (std::size_t mi = 0; mi < cfg.m_grid.size(); ++mi)
            index[c++] = {static_cast<int>(e), static_cast<int>(qi),
                          static_cast<int>(ni), static_cast<int>(mi)};
  }

  parallel_for(jobs, [&](std::size_t job) {
    std::size_t c = job / reps;
    int r = static_cast<int>(job % reps);
    try {
      results[job] = run_cell(cfg, index[c], r);
    } catch (const std::exception& err) {
      const CellIndex& ix = index[c];
      throw NumericalError("cell (eps=" + std::to_string(cfg.epsilon_grid[ix.eps]) +
                           ", q=" + std::to_string(cfg.q_grid[ix.q]) +
                           ", n=" + std::to_string(cfg.n_grid[ix.n]) +
                           ", m=" + std::to_string(cfg.m_grid[ix.m]) +
                           ", replicate=" + std::to_string(r) +
                           ") failed: " + err.what());
    }
  }, max_threads);

  McResult out;
  out.cells.resize(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    CellStats& stats = out.cells[c];
    stats.epsilon = cfg.epsilon_grid[index[c].eps];
    stats.q = cfg.q_grid[index[c].q];
    stats.n = cfg.n_grid[index[c].n];
    stats.m = cfg.m_grid[index[c].m];
    stats.replicates = cfg.replicates;
    for (int est = 0; est < 4; ++est) {
      double mean = 0.0;
      for (std::size_t r = 0; r < reps; ++r)
        mean += results[c * reps + r].mse[est];
      mean /= static_cast<double>(reps);
      double ss = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        double d = results[c * reps + r].mse[est] - mean;
        ss += d * d;
      }
      stats.mse_mean[est] = mean;
      stats.mse_se[est] =
          reps > 1 ? std::sqrt(ss / (static_cast<double>(reps) - 1.0) /
                               static_cast<double>(reps))
                   : 0.0;
    }
  }
  return out;
}

namespace {

double sample_variance(std::span<const double> v) {
  const std::size_t n = v.size();
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / (static_cast<double>(n) - 1.0);
}

}  // namespace

std::vector<VarianceRatioPoint> variance_ratio_probe(
    const WsbmSpec& spec, const ContaminationSpec& cont, QParam q,
    std::span<const int> n_list, int m, int replicates, std::uint64_t seed,
    const PipelineConfig& pipeline, bool include_mlqe, int max_threads) {
  if (n_list.size() < 1) throw InputError("variance_ratio_probe: empty n list");
  if (replicates < 2)
    throw InputError("variance_ratio_probe: need at least 2 replicates");

  std::vector<VarianceRatioPoint> out;
  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    const int n = n_list[ni];
    RandomStream base(detail::mix64(seed ^ detail::mix64(ni + 17)));
    BlockAssignment tau = sample_tau(spec, n, base.substream(1));
    SymmetricMatrix P = block_parameter_matrix(spec.B, tau);
    SymmetricMatrix C = block_parameter_matrix(cont.Bprime, tau);

    // Tracked edge: first (i,j), i<j, with both endpoints in block 1.
    int ei = -1, ej = -1;
    for (int i = 0; i < n && ei < 0; ++i)
      for (int j = i + 1; j < n; ++j)
        if (tau.labels[i] == 0 && tau.labels[j] == 0) {
          ei = i;
          ej = j;
          break;
        }
    if (ei < 0)
      throw NumericalError("variance_ratio_probe: no within-block-1 pair in tau");

    std::vector<double> entry_mle(replicates), low_mle(replicates);
    std::vector<double> entry_mlqe(replicates), low_mlqe(replicates);

    parallel_for(static_cast<std::size_t>(replicates), [&](std::size_t r) {
      RandomStream rng = base.substream(2, r);
      std::vector<SymmetricMatrix> graphs;
      graphs.reserve(m);
      for (int t = 0; t < m; ++t)
        graphs.push_back(sample_graph(P, C, cont.epsilon, spec.family,
                                      rng.substream(static_cast<std::uint64_t>(t))));

      SymmetricMatrix mle = estimate_matrix(graphs, QParam{1.0}, spec.family);
      PipelineConfig cfg = pipeline;
      cfg.q = QParam{1.0};
      entry_mle[r] = mle(ei, ej);
      low_mle[r] = refine_low_rank(mle, cfg).estimate(ei, ej);
      if (include_mlqe) {
        SymmetricMatrix mlqe = estimate_matrix(graphs, q, spec.family);
        cfg.q = q;
        entry_mlqe[r] = mlqe(ei, ej);
        low_mlqe[r] = refine_low_rank(mlqe, cfg).estimate(ei, ej);
      }
    }, max_threads);

    VarianceRatioPoint point;
    point.n = n;
    point.var_entry_mle = sample_variance(entry_mle);
    point.var_lowrank_mle = sample_variance(low_mle);
    point.ratio_mle = point.var_lowrank_mle / point.var_entry_mle;
    point.has_mlqe = include_mlqe;
    if (include_mlqe) {
      point.var_entry_mlqe = sample_variance(entry_mlqe);
      point.var_lowrank_mlqe = sample_variance(low_mlqe);
      point.ratio_mlqe = point.var_lowrank_mlqe / point.var_entry_mlqe;
    }
    out.push_back(point);
  }
  return out;
}

}  // namespace gre
