#ifndef GRE_IO_HPP
#define GRE_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "gre/evaluation.hpp"
#include "gre/pipeline.hpp"
#include "gre/symmetric_matrix.hpp"

namespace gre::io {

enum class GraphFileFormat { EdgeListCsv, DenseMatrixTsv };

/// Config-file error with the offending 1-based line number (0 = file level).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& msg)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg
                                    : msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Round-trip decimal formatting (17 significant digits).
std::string format_double(double v);

/// Dense whitespace-separated n x n matrix, symmetric within 1e-9.
/// `require_hollow` enforces a zero diagonal (graph ingestion).
SymmetricMatrix read_dense_tsv(const std::filesystem::path& path,
                               bool require_hollow);
void write_dense_tsv(const SymmetricMatrix& a, const std::filesystem::path& path);

/// "i,j,weight" rows with 0-based i<j; missing edges are weight 0.
/// Duplicate pairs, i==j rows and out-of-range indices are rejected with
/// row-numbered errors. n is the largest index + 1.
SymmetricMatrix read_edge_list_csv(const std::filesystem::path& path);

/// All graph files in a directory (sorted by filename). Throws ConfigError
/// naming the offending file on inconsistent sizes.
std::vector<SymmetricMatrix> read_graph_dir(const std::filesystem::path& dir,
                                            GraphFileFormat format);

/// Key-value experiment config -> McConfig. Throws ConfigError with line
/// numbers on malformed input.
McConfig parse_mc_config(const std::filesystem::path& path);

/// FNV-1a over the canonicalized (section- and key-sorted) config text;
/// stable under key reordering.
std::string config_digest(const std::filesystem::path& path);

void write_mse_csv(const McResult& result, const std::filesystem::path& path);

/// Eigenvalues plus the same values normalized by the largest one.
void write_scree_csv(const std::vector<double>& eigenvalues,
                     const std::filesystem::path& path);

struct RunManifest {
  std::string config_digest;
  std::uint64_t base_seed = 0;
  std::string artifact_version;
  std::string timestamp;
  std::vector<std::string> outputs;
};

void write_manifest(const RunManifest& m, const std::filesystem::path& path);

/// Sidecar with the chosen dimension and the elbow trace.
void write_dim_sidecar(const DimSelection& dims, const std::filesystem::path& path);

inline constexpr const char* kArtifactVersion = "0.1.0";

}  // namespace gre::io

#endif
