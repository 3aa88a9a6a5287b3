#ifndef GRE_EIGEN_HPP
#define GRE_EIGEN_HPP

#include <cstddef>
#include <vector>

#include "gre/symmetric_matrix.hpp"

namespace gre {

/// Full spectrum of a symmetric matrix.
///
/// Eigenvalues are sorted in non-increasing *algebraic* order (not by
/// magnitude). Eigenvector k is stored as column k and pairs with
/// eigenvalues[k]; each vector's largest-magnitude entry is made positive
/// (ties broken by lowest index) so output is deterministic.
struct EigenPair {
  int n = 0;
  std::vector<double> eigenvalues;
  std::vector<double> eigenvectors;  // column-major n*n

  double vector(int i, int k) const {
    return eigenvectors[static_cast<std::size_t>(k) * n + i];
  }
};

/// Per-vertex latent coordinates; rows are vertices, columns dimensions.
struct LatentPositions {
  int n = 0;
  int d = 0;
  std::vector<double> coords;  // row-major n*d

  double operator()(int i, int k) const {
    return coords[static_cast<std::size_t>(i) * d + k];
  }

  /// Gram product coords * coords^T.
  SymmetricMatrix gram() const;
};

/// Symmetric eigendecomposition via cyclic Jacobi rotations.
/// Converges when the off-diagonal Frobenius norm drops below
/// 1e-12 * ||a||_F; throws NumericalError after 100 sweeps.
EigenPair eig_sym(const SymmetricMatrix& a);

/// Rank-d reconstruction from the d algebraically largest eigenpairs.
/// Negative eigenvalues among the kept ones are retained as-is.
SymmetricMatrix lowrank_d(const SymmetricMatrix& a, int d);

/// As lowrank_d but reusing an existing decomposition of the same matrix.
SymmetricMatrix lowrank_from(const EigenPair& eig, int d);

/// Spectral embedding U * S^{1/2} from the d algebraically largest
/// eigenpairs. Throws SpectralError if any kept eigenvalue is negative.
LatentPositions ase_embed(const SymmetricMatrix& a, int d);

}  // namespace gre

#endif
