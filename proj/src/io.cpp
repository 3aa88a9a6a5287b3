#include "gre/io.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gre/errors.hpp"

namespace gre::io {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& tok, int line) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size() || tok.empty() || errno == ERANGE)
    throw ConfigError(line, "expected a number, got '" + tok + "'");
  return v;
}

long parse_long(const std::string& tok, int line) {
  errno = 0;
  char* end = nullptr;
  long v = std::strtol(tok.c_str(), &end, 10);
  if (end != tok.c_str() + tok.size() || tok.empty() || errno == ERANGE)
    throw ConfigError(line, "expected an integer, got '" + tok + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& tok, int line) {
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
  if (end != tok.c_str() + tok.size() || tok.empty() || errno == ERANGE)
    throw ConfigError(line, "expected an unsigned integer, got '" + tok + "'");
  return static_cast<std::uint64_t>(v);
}

struct ConfigEntry {
  std::string value;
  int line = 0;
};
using ConfigMap = std::map<std::string, std::map<std::string, ConfigEntry>>;

ConfigMap read_config_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file " + path.string());
  ConfigMap out;
  std::string section;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3)
        throw ConfigError(line, "malformed section header '" + s + "'");
      section = trim(s.substr(1, s.size() - 2));
      out[section];
      continue;
    }
    std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError(line, "expected key = value, got '" + s + "'");
    if (section.empty())
      throw ConfigError(line, "key outside of any [section]");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "empty key");
    if (out[section].count(key))
      throw ConfigError(line, "duplicate key '" + key + "'");
    out[section][key] = {value, line};
  }
  return out;
}

const ConfigEntry& require_key(const ConfigMap& m, const std::string& section,
                               const std::string& key) {
  auto s = m.find(section);
  if (s == m.end()) throw ConfigError(0, "missing [" + section + "] section");
  auto k = s->second.find(key);
  if (k == s->second.end())
    throw ConfigError(0, "missing key '" + key + "' in [" + section + "]");
  return k->second;
}

BlockMatrix parse_block_matrix(const ConfigEntry& entry) {
  std::vector<std::vector<double>> rows;
  std::stringstream in(entry.value);
  std::string row;
  while (std::getline(in, row, ';')) {
    std::vector<double> vals;
    for (const auto& tok : split_ws(row)) vals.push_back(parse_double(tok, entry.line));
    if (!vals.empty()) rows.push_back(vals);
  }
  if (rows.empty()) throw ConfigError(entry.line, "empty block matrix");
  const int k = static_cast<int>(rows.size());
  std::vector<double> flat;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != k)
      throw ConfigError(entry.line, "block matrix must be square");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  try {
    return BlockMatrix(k, std::move(flat));
  } catch (const InputError& e) {
    throw ConfigError(entry.line, e.what());
  }
}

std::vector<double> parse_double_list(const ConfigEntry& entry) {
  std::vector<double> out;
  for (const auto& tok : split_ws(entry.value)) out.push_back(parse_double(tok, entry.line));
  if (out.empty()) throw ConfigError(entry.line, "expected a nonempty list");
  return out;
}

std::vector<int> parse_int_list(const ConfigEntry& entry) {
  std::vector<int> out;
  for (const auto& tok : split_ws(entry.value))
    out.push_back(static_cast<int>(parse_long(tok, entry.line)));
  if (out.empty()) throw ConfigError(entry.line, "expected a nonempty list");
  return out;
}

bool parse_bool(const ConfigEntry& entry) {
  std::string v = entry.value;
  std::transform(v.begin(), v.end(), v.begin(), ::tolower);
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw ConfigError(entry.line, "expected on/off, got '" + entry.value + "'");
}

WeightFamily parse_family_value(const std::string& v, int line) {
  if (v == "exponential") return WeightFamily::Exponential;
  if (v == "poisson") return WeightFamily::Poisson;
  throw ConfigError(line, "family must be 'exponential' or 'poisson'");
}

const std::set<std::string> kKnownSections = {"model", "grid", "run", "pipeline"};
const std::map<std::string, std::set<std::string>> kKnownKeys = {
    {"model", {"family", "B", "rho", "Bprime"}},
    {"grid", {"epsilon", "q", "n", "m"}},
    {"run", {"replicates", "seed"}},
    {"pipeline", {"dim", "elbow", "clamp", "truncate"}},
};

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

McConfig parse_mc_config(const std::filesystem::path& path) {
  ConfigMap m = read_config_map(path);
  for (const auto& [section, keys] : m) {
    if (!kKnownSections.count(section))
      throw ConfigError(keys.empty() ? 0 : keys.begin()->second.line,
                        "unknown section [" + section + "]");
    for (const auto& [key, entry] : keys)
      if (!kKnownKeys.at(section).count(key))
        throw ConfigError(entry.line,
                          "unknown key '" + key + "' in [" + section + "]");
  }

  McConfig cfg;
  const ConfigEntry& family = require_key(m, "model", "family");
  cfg.spec.family = parse_family_value(family.value, family.line);
  cfg.spec.B = parse_block_matrix(require_key(m, "model", "B"));
  cfg.spec.rho = parse_double_list(require_key(m, "model", "rho"));
  cfg.cont_template.Bprime = parse_block_matrix(require_key(m, "model", "Bprime"));
  cfg.cont_template.epsilon = 0.0;

  cfg.epsilon_grid = parse_double_list(require_key(m, "grid", "epsilon"));
  cfg.q_grid = parse_double_list(require_key(m, "grid", "q"));
  cfg.n_grid = parse_int_list(require_key(m, "grid", "n"));
  cfg.m_grid = parse_int_list(require_key(m, "grid", "m"));

  const ConfigEntry& reps = require_key(m, "run", "replicates");
  cfg.replicates = static_cast<int>(parse_long(reps.value, reps.line));
  const ConfigEntry& seed = require_key(m, "run", "seed");
  cfg.base_seed = parse_u64(seed.value, seed.line);

  const ConfigEntry& dim = require_key(m, "pipeline", "dim");
  if (dim.value == "auto") {
    int elbow = 3;
    if (m.count("pipeline") && m.at("pipeline").count("elbow")) {
      const ConfigEntry& e = m.at("pipeline").at("elbow");
      elbow = static_cast<int>(parse_long(e.value, e.line));
      if (elbow < 1) throw ConfigError(e.line, "elbow must be >= 1");
    }
    cfg.pipeline.dim_mode = DimMode::zhu_ghodsi(elbow);
  } else {
    int d = static_cast<int>(parse_long(dim.value, dim.line));
    if (d < 1) throw ConfigError(dim.line, "dim must be >= 1 or 'auto'");
    cfg.pipeline.dim_mode = DimMode::fixed(d);
  }
  if (m.at("pipeline").count("clamp"))
    cfg.pipeline.clamp_negative = parse_bool(m.at("pipeline").at("clamp"));
  if (m.at("pipeline").count("truncate")) {
    const ConfigEntry& t = m.at("pipeline").at("truncate");
    if (t.value != "off") {
      double r = parse_double(t.value, t.line);
      if (r <= 0.0) throw ConfigError(t.line, "truncate bound must be > 0 or 'off'");
      cfg.pipeline.truncation = RBound{r};
    }
  }

  try {
    cfg.validate();
  } catch (const InputError& e) {
    throw ConfigError(0, e.what());
  }
  return cfg;
}

std::string config_digest(const std::filesystem::path& path) {
  ConfigMap m = read_config_map(path);
  std::string canon;
  for (const auto& [section, keys] : m) {  // std::map iterates sorted
    canon += "[" + section + "]\n";
    for (const auto& [key, entry] : keys) canon += key + "=" + entry.value + "\n";
  }
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016" PRIx64, h);
  return buf;
}

SymmetricMatrix read_dense_tsv(const std::filesystem::path& path,
                               bool require_hollow) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty()) continue;
    std::vector<double> vals;
    for (const auto& tok : split_ws(s)) vals.push_back(parse_double(tok, line));
    rows.push_back(std::move(vals));
  }
  const int n = static_cast<int>(rows.size());
  if (n < 2) throw ConfigError(0, path.string() + ": matrix must be at least 2x2");
  for (int i = 0; i < n; ++i)
    if (static_cast<int>(rows[i].size()) != n)
      throw ConfigError(0, path.string() + ": row " + std::to_string(i + 1) +
                               " has " + std::to_string(rows[i].size()) +
                               " values, expected " + std::to_string(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(rows[i][j] - rows[j][i]) > 1e-9)
        throw ConfigError(0, path.string() + ": asymmetric beyond 1e-9 at (" +
                                 std::to_string(i) + "," + std::to_string(j) + ")");
  SymmetricMatrix out(n);
  for (int i = 0; i < n; ++i) {
    if (require_hollow && rows[i][i] != 0.0)
      throw ConfigError(0, path.string() + ": nonzero diagonal at row " +
                               std::to_string(i + 1));
    out.set_pair(i, i, rows[i][i]);
    for (int j = i + 1; j < n; ++j) out.set_pair(i, j, rows[i][j]);
  }
  return out;
}

void write_dense_tsv(const SymmetricMatrix& a, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError(0, "cannot write " + path.string());
  const int n = a.size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j) out << '\t';
      out << format_double(a(i, j));
    }
    out << '\n';
  }
}

SymmetricMatrix read_edge_list_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open " + path.string());
  struct Row {
    int i, j;
    double w;
  };
  std::vector<Row> entries;
  std::set<std::pair<int, int>> seen;
  std::string raw;
  int line = 0;
  int max_index = -1;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty()) continue;
    std::replace(s.begin(), s.end(), ',', ' ');
    auto toks = split_ws(s);
    if (toks.size() != 3)
      throw ConfigError(line, path.string() + ": expected 'i,j,weight'");
    int i = static_cast<int>(parse_long(toks[0], line));
    int j = static_cast<int>(parse_long(toks[1], line));
    double w = parse_double(toks[2], line);
    if (i < 0 || j < 0)
      throw ConfigError(line, path.string() + ": negative vertex index");
    if (i == j) throw ConfigError(line, path.string() + ": self-loop row i == j");
    if (i > j)
      throw ConfigError(line, path.string() + ": rows must satisfy i < j");
    if (!std::isfinite(w) || w < 0.0)
      throw ConfigError(line, path.string() + ": weight must be finite and >= 0");
    if (!seen.insert({i, j}).second)
      throw ConfigError(line, path.string() + ": duplicate edge (" +
                                  std::to_string(i) + "," + std::to_string(j) + ")");
    entries.push_back({i, j, w});
    max_index = std::max(max_index, j);
  }
  if (max_index < 1)
    throw ConfigError(0, path.string() + ": needs at least one edge (n >= 2)");
  SymmetricMatrix out(max_index + 1);
  for (const auto& e : entries) out.set_pair(e.i, e.j, e.w);
  return out;
}

std::vector<SymmetricMatrix> read_graph_dir(const std::filesystem::path& dir,
                                            GraphFileFormat format) {
  if (!std::filesystem::is_directory(dir))
    throw ConfigError(0, dir.string() + " is not a directory");
  const std::string ext =
      format == GraphFileFormat::DenseMatrixTsv ? ".tsv" : ".csv";
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ext)
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw ConfigError(0, "no " + ext + " graph files in " + dir.string());

  std::vector<SymmetricMatrix> graphs;
  for (const auto& f : files) {
    SymmetricMatrix g = format == GraphFileFormat::DenseMatrixTsv
                            ? read_dense_tsv(f, /*require_hollow=*/true)
                            : read_edge_list_csv(f);
    if (!graphs.empty() && g.size() != graphs.front().size())
      throw ConfigError(0, f.string() + ": size " + std::to_string(g.size()) +
                               " differs from first graph (" +
                               std::to_string(graphs.front().size()) + ")");
    graphs.push_back(std::move(g));
  }
  return graphs;
}

void write_mse_csv(const McResult& result, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError(0, "cannot write " + path.string());
  out << "epsilon,q,n,m,estimator,mse_mean,mse_se,replicates\n";
  for (const auto& cell : result.cells) {
    for (int est = 0; est < 4; ++est) {
      out << format_double(cell.epsilon) << ',' << format_double(cell.q) << ','
          << cell.n << ',' << cell.m << ',' << kEstimatorNames[est] << ','
          << format_double(cell.mse_mean[est]) << ','
          << format_double(cell.mse_se[est]) << ',' << cell.replicates << '\n';
    }
  }
}

void write_scree_csv(const std::vector<double>& eigenvalues,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError(0, "cannot write " + path.string());
  out << "eigenvalue,normalized\n";
  if (eigenvalues.empty()) return;
  const double top = eigenvalues.front();
  for (double v : eigenvalues)
    out << format_double(v) << ',' << format_double(v / top) << '\n';
}

void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
  nlohmann::json j;
  j["artifact_version"] = m.artifact_version;
  j["base_seed"] = m.base_seed;
  j["config_digest"] = m.config_digest;
  j["timestamp"] = m.timestamp;
  j["outputs"] = m.outputs;
  std::ofstream out(path);
  if (!out) throw ConfigError(0, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_dim_sidecar(const DimSelection& dims, const std::filesystem::path& path) {
  nlohmann::json j;
  j["chosen"] = dims.chosen;
  j["elbows"] = dims.elbows;
  j["profile_loglik"] = dims.profile_loglik;
  std::ofstream out(path);
  if (!out) throw ConfigError(0, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace gre::io
