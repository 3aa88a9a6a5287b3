#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gre/eigen.hpp"
#include "gre/errors.hpp"
#include "gre/evaluation.hpp"
#include "gre/io.hpp"
#include "gre/pipeline.hpp"

namespace fs = std::filesystem;
using namespace gre;

namespace {

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

io::GraphFileFormat parse_format(const std::string& s) {
  if (s == "dense") return io::GraphFileFormat::DenseMatrixTsv;
  if (s == "edgelist") return io::GraphFileFormat::EdgeListCsv;
  throw InputError("--format must be 'dense' or 'edgelist'");
}

WeightFamily parse_family(const std::string& s) {
  if (s == "exponential") return WeightFamily::Exponential;
  if (s == "poisson") return WeightFamily::Poisson;
  throw InputError("--family must be 'exponential' or 'poisson'");
}

int run_simulate(const std::string& config_path, const std::string& out_dir,
                 long seed_override, int replicates_override,
                 const std::string& dump_dir) {
  McConfig cfg = io::parse_mc_config(config_path);
  if (seed_override >= 0) cfg.base_seed = static_cast<std::uint64_t>(seed_override);
  if (replicates_override > 0) cfg.replicates = replicates_override;

  fs::create_directories(out_dir);

  if (!dump_dir.empty()) {
    // Dump the graphs of the first cell's first replicate for reproduction.
    fs::create_directories(dump_dir);
    ContaminationSpec cont = cfg.cont_template;
    cont.epsilon = cfg.epsilon_grid.front();
    RandomStream rng(cell_seed(cfg, CellIndex{0, 0, 0, 0}, 0));
    Population pop = sample_population(cfg.spec, cont, cfg.n_grid.front(),
                                       cfg.m_grid.front(), rng);
    for (std::size_t t = 0; t < pop.graphs.size(); ++t) {
      char name[32];
      std::snprintf(name, sizeof(name), "graph_%03zu.tsv", t);
      io::write_dense_tsv(pop.graphs[t], fs::path(dump_dir) / name);
    }
  }

  McResult result = run_experiment(cfg);
  fs::path mse_path = fs::path(out_dir) / "mse.csv";
  io::write_mse_csv(result, mse_path);

  io::RunManifest manifest;
  manifest.config_digest = io::config_digest(config_path);
  manifest.base_seed = cfg.base_seed;
  manifest.artifact_version = io::kArtifactVersion;
  manifest.timestamp = utc_timestamp();
  manifest.outputs = {mse_path.filename().string()};  // relative to out_dir
  io::write_manifest(manifest, fs::path(out_dir) / "manifest.json");
  return 0;
}

int run_estimate(const std::string& graph_dir, const std::string& format,
                 double q, const std::string& dim, int elbow,
                 const std::string& family, const std::string& out_path,
                 bool no_clamp, double truncate) {
  std::vector<SymmetricMatrix> graphs =
      io::read_graph_dir(graph_dir, parse_format(format));
  PipelineConfig cfg;
  cfg.q = QParam{q};
  if (dim == "auto") {
    if (elbow < 1) throw InputError("--elbow must be >= 1");
    cfg.dim_mode = DimMode::zhu_ghodsi(elbow);
  } else {
    int d = std::atoi(dim.c_str());
    if (d < 1 || d > graphs.front().size())
      throw InputError("--dim must be 'auto' or an integer in [1, n]");
    cfg.dim_mode = DimMode::fixed(d);
  }
  cfg.clamp_negative = !no_clamp;
  if (truncate > 0.0) cfg.truncation = RBound{truncate};

  LowRankEstimate est = low_rank_estimate(graphs, cfg, parse_family(family));
  io::write_dense_tsv(est.estimate, out_path);
  io::write_dim_sidecar(est.dims, out_path + ".meta.json");
  return 0;
}

int run_scree(const std::string& graph_dir, const std::string& format,
              const std::string& out_path) {
  std::vector<SymmetricMatrix> graphs =
      io::read_graph_dir(graph_dir, parse_format(format));
  const int n = graphs.front().size();
  SymmetricMatrix mean(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (const auto& g : graphs) s += g(i, j);
      mean.set_pair(i, j, s / static_cast<double>(graphs.size()));
    }
  // d = n makes the Scheinerman refresh a no-op; the scree sees the
  // row-average-augmented mean graph.
  SymmetricMatrix augmented = augment_diagonal(mean, n);
  EigenPair eig = eig_sym(augmented);
  io::write_scree_csv(eig.eigenvalues, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust low-rank estimation for populations of weighted graphs"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run a Monte Carlo experiment");
  std::string sim_config, sim_out, sim_dump;
  long sim_seed = -1;
  int sim_reps = 0;
  sim->add_option("--config", sim_config, "Experiment config file")->required();
  sim->add_option("--out", sim_out, "Output directory")->required();
  sim->add_option("--seed", sim_seed, "Override the config base seed");
  sim->add_option("--replicates", sim_reps, "Override the replicate count");
  sim->add_option("--dump-graphs", sim_dump,
                  "Also write the first cell/replicate graphs to this directory");

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate from graph files");
  std::string est_dir, est_format = "dense", est_dim = "auto",
              est_family = "exponential", est_out;
  double est_q = 0.9, est_truncate = 0.0;
  int est_elbow = 3;
  bool est_noclamp = false;
  est->add_option("graph_dir", est_dir, "Directory of graph files")->required();
  est->add_option("--format", est_format, "Graph file format: dense | edgelist");
  est->add_option("--q", est_q, "Lq distortion parameter in (0,1]; 1 = MLE");
  est->add_option("--dim", est_dim, "Embedding dimension: auto | INT");
  est->add_option("--elbow", est_elbow, "Elbow index for dim auto (default 3)");
  est->add_option("--family", est_family, "Weight family: exponential | poisson");
  est->add_option("--out", est_out, "Output matrix path")->required();
  est->add_flag("--no-clamp", est_noclamp, "Skip the nonnegativity clamp");
  est->add_option("--truncate", est_truncate,
                  "Truncation bound R (off when omitted)");

  // scree
  auto* scr = app.add_subcommand("scree", "Eigenvalues of the augmented mean graph");
  std::string scr_dir, scr_format = "dense", scr_out;
  scr->add_option("graph_dir", scr_dir, "Directory of graph files")->required();
  scr->add_option("--format", scr_format, "Graph file format: dense | edgelist");
  scr->add_option("--out", scr_out, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed())
      return run_simulate(sim_config, sim_out, sim_seed, sim_reps, sim_dump);
    if (est->parsed())
      return run_estimate(est_dir, est_format, est_q, est_dim, est_elbow,
                          est_family, est_out, est_noclamp, est_truncate);
    if (scr->parsed()) return run_scree(scr_dir, scr_format, scr_out);
  } catch (const io::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
