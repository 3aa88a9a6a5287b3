#include "gre/models.hpp"

#include <cmath>
#include <string>

#include "gre/errors.hpp"

namespace gre {

BlockMatrix::BlockMatrix(int k, std::vector<double> row_major)
    : k_(k), values_(std::move(row_major)) {
  if (k < 1) throw InputError("BlockMatrix: K must be >= 1");
  if (values_.size() != static_cast<std::size_t>(k) * k)
    throw InputError("BlockMatrix: expected K*K values");
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      double v = (*this)(i, j);
      if (!std::isfinite(v) || v <= 0.0)
        throw InputError("BlockMatrix: entries must be finite and > 0");
      if (v != (*this)(j, i)) throw InputError("BlockMatrix: must be symmetric");
    }
}

double BlockMatrix::max_entry() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, v);
  return m;
}

void WsbmSpec::validate() const {
  if (B.blocks() < 1) throw InputError("WsbmSpec: missing block matrix");
  if (static_cast<int>(rho.size()) != B.blocks())
    throw InputError("WsbmSpec: rho length must equal K");
  double sum = 0.0;
  for (double r : rho) {
    if (!(r > 0.0 && r < 1.0) && !(B.blocks() == 1 && r == 1.0))
      throw InputError("WsbmSpec: rho entries must lie in (0,1)");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw InputError("WsbmSpec: rho must sum to 1 within 1e-12");
}

void ContaminationSpec::validate() const {
  if (Bprime.blocks() < 1) throw InputError("ContaminationSpec: missing B'");
  if (!(epsilon >= 0.0 && epsilon < 1.0))
    throw InputError("ContaminationSpec: epsilon must lie in [0,1)");
}

namespace {
// Substream tags keeping the per-purpose streams disjoint.
constexpr std::uint64_t kTagTau = 0x7461750000000001ULL;
constexpr std::uint64_t kTagGraph = 0x6772617000000002ULL;

double draw_weight(RandomStream& s, WeightFamily family, double mean) {
  switch (family) {
    case WeightFamily::Exponential:
      return s.next_exponential(mean);
    case WeightFamily::Poisson:
      return static_cast<double>(s.next_poisson(mean));
  }
  throw InputError("unknown weight family");
}
}  // namespace

BlockAssignment sample_tau(const WsbmSpec& spec, int n, RandomStream rng) {
  spec.validate();
  if (n < 2) throw InputError("sample_tau: n must be >= 2");
  BlockAssignment tau;
  tau.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    RandomStream s = rng.substream(kTagTau, static_cast<std::uint64_t>(i));
    tau.labels[i] = s.next_categorical(spec.rho);
  }
  return tau;
}

SymmetricMatrix block_parameter_matrix(const BlockMatrix& b,
                                       const BlockAssignment& tau) {
  const int n = tau.n();
  SymmetricMatrix out(n);
  for (int i = 0; i < n; ++i) {
    int bi = tau.labels[i];
    if (bi < 0 || bi >= b.blocks())
      throw InputError("block label out of range at vertex " + std::to_string(i));
    for (int j = i; j < n; ++j) out.set_pair(i, j, b(bi, tau.labels[j]));
  }
  return out;
}

SymmetricMatrix build_P(const WsbmSpec& spec, const BlockAssignment& tau) {
  return block_parameter_matrix(spec.B, tau);
}

SymmetricMatrix sample_graph(const SymmetricMatrix& P, const SymmetricMatrix& C,
                             double epsilon, WeightFamily family,
                             RandomStream rng) {
  if (P.size() != C.size()) throw InputError("sample_graph: P and C sizes differ");
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw InputError("sample_graph: epsilon must lie in [0,1]");
  const int n = P.size();
  SymmetricMatrix a(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      RandomStream s = rng.substream(static_cast<std::uint64_t>(i),
                                     static_cast<std::uint64_t>(j));
      bool contaminated = s.next_unit() <= epsilon;
      double mean = contaminated ? C(i, j) : P(i, j);
      a.set_pair(i, j, draw_weight(s, family, mean));
    }
  }
  return a;
}

Population sample_population(const WsbmSpec& spec, const ContaminationSpec& cont,
                             int n, int m, RandomStream rng) {
  spec.validate();
  cont.validate();
  if (cont.Bprime.blocks() != spec.blocks())
    throw InputError("sample_population: B and B' block counts differ");
  if (m < 1) throw InputError("sample_population: m must be >= 1");

  Population pop(n);
  pop.tau = sample_tau(spec, n, rng.substream(kTagTau));
  pop.P = block_parameter_matrix(spec.B, pop.tau);
  pop.C = block_parameter_matrix(cont.Bprime, pop.tau);
  pop.graphs.reserve(m);
  for (int t = 0; t < m; ++t)
    pop.graphs.push_back(sample_graph(pop.P, pop.C, cont.epsilon, spec.family,
                                      rng.substream(kTagGraph,
                                                    static_cast<std::uint64_t>(t))));
  return pop;
}

}  // namespace gre
