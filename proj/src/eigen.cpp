#include "gre/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gre/errors.hpp"

namespace gre {

namespace {

double offdiag_frobenius(const std::vector<double>& w, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double v = w[static_cast<std::size_t>(i) * n + j];
      s += 2.0 * v * v;
    }
  return std::sqrt(s);
}

}  // namespace

EigenPair eig_sym(const SymmetricMatrix& a) {
  if (!a.all_finite()) throw InputError("eig_sym: input has non-finite entries");

  const int n = a.size();
  const std::size_t nn = static_cast<std::size_t>(n);
  std::vector<double> w = a.data();
  std::vector<double> v(nn * nn, 0.0);
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;

  const double target = 1e-12 * a.frobenius_norm();
  const int max_sweeps = 100;
  int sweep = 0;
  while (offdiag_frobenius(w, n) > target) {
    if (++sweep > max_sweeps)
      throw NumericalError("eig_sym: Jacobi failed to converge within " +
                           std::to_string(max_sweeps) + " sweeps");
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = w[static_cast<std::size_t>(p) * n + q];
        if (apq == 0.0) continue;
        double app = w[static_cast<std::size_t>(p) * n + p];
        double aqq = w[static_cast<std::size_t>(q) * n + q];
        // Skip rotations that cannot change anything at double precision.
        if (std::abs(apq) < 1e-300 ||
            std::abs(apq) <= 1e-18 * (std::abs(app) + std::abs(aqq)))
          continue;
        double theta = (aqq - app) / (2.0 * apq);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        double tau = s / (1.0 + c);

        w[static_cast<std::size_t>(p) * n + p] = app - t * apq;
        w[static_cast<std::size_t>(q) * n + q] = aqq + t * apq;
        w[static_cast<std::size_t>(p) * n + q] = 0.0;
        w[static_cast<std::size_t>(q) * n + p] = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          double& wrp = w[static_cast<std::size_t>(r) * n + p];
          double& wrq = w[static_cast<std::size_t>(r) * n + q];
          double g = wrp, h = wrq;
          wrp = g - s * (h + g * tau);
          wrq = h + s * (g - h * tau);
          w[static_cast<std::size_t>(p) * n + r] = wrp;
          w[static_cast<std::size_t>(q) * n + r] = wrq;
        }
        for (int r = 0; r < n; ++r) {
          double& vrp = v[static_cast<std::size_t>(p) * n + r];
          double& vrq = v[static_cast<std::size_t>(q) * n + r];
          double g = vrp, h = vrq;
          vrp = g - s * (h + g * tau);
          vrq = h + s * (g - h * tau);
        }
      }
    }
  }

  // v currently holds eigenvectors as rows; sort by eigenvalue descending.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return w[static_cast<std::size_t>(x) * n + x] >
           w[static_cast<std::size_t>(y) * n + y];
  });

  EigenPair out;
  out.n = n;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(nn * nn);
  for (int k = 0; k < n; ++k) {
    int src = order[k];
    out.eigenvalues[k] = w[static_cast<std::size_t>(src) * n + src];
    // Sign convention: entry of largest magnitude positive, lowest index wins ties.
    int arg = 0;
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
      double mag = std::abs(v[static_cast<std::size_t>(src) * n + i]);
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    double flip = v[static_cast<std::size_t>(src) * n + arg] < 0.0 ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i)
      out.eigenvectors[static_cast<std::size_t>(k) * n + i] =
          flip * v[static_cast<std::size_t>(src) * n + i];
  }
  return out;
}

SymmetricMatrix lowrank_from(const EigenPair& eig, int d) {
  const int n = eig.n;
  if (d < 1 || d > n) throw InputError("lowrank_d: d out of range");
  SymmetricMatrix out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < d; ++k)
        s += eig.eigenvalues[k] * eig.vector(i, k) * eig.vector(j, k);
      out.set_pair(i, j, s);
    }
  }
  return out;
}

SymmetricMatrix lowrank_d(const SymmetricMatrix& a, int d) {
  if (d < 1 || d > a.size()) throw InputError("lowrank_d: d out of range");
  return lowrank_from(eig_sym(a), d);
}

LatentPositions ase_embed(const SymmetricMatrix& a, int d) {
  const int n = a.size();
  if (d < 1 || d > n) throw InputError("ase_embed: d out of range");
  EigenPair eig = eig_sym(a);
  for (int k = 0; k < d; ++k) {
    if (eig.eigenvalues[k] < 0.0)
      throw SpectralError("ase_embed: eigenvalue " + std::to_string(k) +
                              " is negative (" +
                              std::to_string(eig.eigenvalues[k]) +
                              "); reduce d",
                          k);
  }
  LatentPositions out;
  out.n = n;
  out.d = d;
  out.coords.resize(static_cast<std::size_t>(n) * d);
  for (int k = 0; k < d; ++k) {
    double root = std::sqrt(eig.eigenvalues[k]);
    for (int i = 0; i < n; ++i)
      out.coords[static_cast<std::size_t>(i) * d + k] = root * eig.vector(i, k);
  }
  return out;
}

SymmetricMatrix LatentPositions::gram() const {
  SymmetricMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += (*this)(i, k) * (*this)(j, k);
      out.set_pair(i, j, s);
    }
  return out;
}

}  // namespace gre
