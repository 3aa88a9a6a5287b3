#include "gre/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "gre/errors.hpp"
#include "gre/parallel.hpp"

namespace gre {

QParam::QParam(double q) : q_(q) {
  if (!(q > 0.0 && q <= 1.0)) throw InputError("QParam: q must lie in (0,1]");
}

namespace {

void check_sample(std::span<const double> x) {
  if (x.empty()) throw InputError("edge sample is empty");
  for (double v : x) {
    if (!std::isfinite(v) || v < 0.0)
      throw InputError("edge sample values must be finite and >= 0");
  }
}

double mean_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

bool all_equal(std::span<const double> x) {
  for (double v : x)
    if (v != x.front()) return false;
  return true;
}

// Exponent clamp: weights whose log argument falls below -700 underflow to 0
// anyway; mapping them explicitly keeps the sign of the sum free of noise.
inline double clamped_exp(double arg) { return arg < -700.0 ? 0.0 : std::exp(arg); }

double g_exponential(std::span<const double> x, double q, double theta) {
  double s = 0.0;
  const double c = 1.0 - q;
  for (double xi : x) s += clamped_exp(-c * xi / theta) * (xi - theta);
  return s;
}

double poisson_score(std::span<const double> x, double q, double theta) {
  double s = 0.0;
  const double c = 1.0 - q;
  const double log_theta = std::log(theta);
  for (double xi : x) {
    double logw = c * (xi * log_theta - theta - std::lgamma(xi + 1.0));
    s += clamped_exp(logw) * (xi / theta - 1.0);
  }
  return s;
}

template <typename F>
double bisect(F&& f, double lo, double hi, double f_lo, double tol) {
  // Invariant: sign(f(lo)) == sign(f_lo) != sign(f(hi)), zero counted on lo's side.
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double fm = f(mid);
    if ((f_lo >= 0.0 && fm >= 0.0) || (f_lo < 0.0 && fm < 0.0)) {
      lo = mid;
      f_lo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double mle_entry(std::span<const double> x, WeightFamily) {
  check_sample(x);
  return mean_of(x);
}

double mlqe_exponential(std::span<const double> x, QParam q) {
  check_sample(x);
  const double xbar = mean_of(x);
  if (q.is_mle() || all_equal(x)) return xbar;
  if (xbar == 0.0) return 0.0;

  const double qv = q.value();
  const double xmin = *std::min_element(x.begin(), x.end());
  const double tol = 1e-10 * std::max(1.0, xbar);

  // g(xbar) < 0 for non-constant samples; walk down geometrically until the
  // sign flips, which happens at or before x_min. "Closest to the MLE" is
  // the first bracket met on the way down.
  double lo = xbar;
  const double floor_theta = std::max(xbar * 1e-14,
                                      std::numeric_limits<double>::min() * 1e4);
  while (lo > floor_theta) {
    double next = lo * 0.99;
    double g_next = g_exponential(x, qv, next);
    if (g_next >= 0.0)
      return bisect([&](double t) { return g_exponential(x, qv, t); }, next, lo,
                    g_next, tol);
    lo = next;
  }
  // Without a sign change the Lq-likelihood is maximized at the boundary;
  // that occurs only when zeros are present in the sample.
  if (xmin == 0.0) return 0.0;
  throw NumericalError("mlqe_exponential: no sign change in (" +
                       std::to_string(floor_theta) + ", " +
                       std::to_string(xbar) + ")");
}

double mlqe_poisson(std::span<const double> x, QParam q) {
  check_sample(x);
  for (double v : x) {
    if (std::floor(v) != v)
      throw InputError("mlqe_poisson: sample values must be integers");
  }
  const double xbar = mean_of(x);
  if (q.is_mle() || all_equal(x)) return xbar;
  if (xbar == 0.0) return 0.0;

  const double qv = q.value();
  const double cap = std::exp(1.0) * xbar;
  const double tol = 1e-10 * std::max(1.0, xbar);
  auto score = [&](double t) { return poisson_score(x, qv, t); };

  const double s_bar = score(xbar);
  if (s_bar == 0.0) return xbar;

  // Scan both directions from the mean; keep the nearest root on each side
  // and return whichever is closer to the mean.
  double root_below = std::numeric_limits<double>::quiet_NaN();
  double root_above = std::numeric_limits<double>::quiet_NaN();

  {
    double upper = xbar;
    double f_upper = s_bar;
    const double floor_theta = std::max(xbar * 1e-14,
                                        std::numeric_limits<double>::min() * 1e4);
    while (upper > floor_theta) {
      double next = upper * 0.99;
      double f_next = score(next);
      if ((f_upper < 0.0) != (f_next < 0.0)) {
        root_below = bisect(score, next, upper, f_next, tol);
        break;
      }
      upper = next;
      f_upper = f_next;
    }
  }
  {
    double lower = xbar;
    double f_lower = s_bar;
    while (lower < cap) {
      double next = std::min(lower / 0.99, cap);
      double f_next = score(next);
      if ((f_lower < 0.0) != (f_next < 0.0)) {
        root_above = bisect(score, lower, next, f_lower, tol);
        break;
      }
      lower = next;
      f_lower = f_next;
      if (next == cap) break;
    }
  }

  const bool has_below = !std::isnan(root_below);
  const bool has_above = !std::isnan(root_above);
  if (has_below && has_above)
    return (xbar - root_below <= root_above - xbar) ? root_below : root_above;
  if (has_below) return root_below;
  if (has_above) return root_above;
  throw NumericalError("mlqe_poisson: no root bracketed in (0, " +
                       std::to_string(cap) + "]");
}

double estimate_entry(std::span<const double> x, QParam q, WeightFamily family) {
  if (q.is_mle()) return mle_entry(x, family);
  switch (family) {
    case WeightFamily::Exponential:
      return mlqe_exponential(x, q);
    case WeightFamily::Poisson:
      return mlqe_poisson(x, q);
  }
  throw InputError("unknown weight family");
}

SymmetricMatrix estimate_matrix(std::span<const SymmetricMatrix> graphs,
                                QParam q, WeightFamily family) {
  if (graphs.empty()) throw InputError("estimate_matrix: no graphs");
  const int n = graphs.front().size();
  for (const auto& g : graphs) {
    if (g.size() != n) throw InputError("estimate_matrix: graph sizes differ");
    if (!g.is_hollow())
      throw InputError("estimate_matrix: graphs must have a zero diagonal");
  }
  const int m = static_cast<int>(graphs.size());

  struct Edge {
    int i, j;
  };
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.push_back({i, j});

  std::vector<double> result(edges.size());
  parallel_for(edges.size(), [&](std::size_t e) {
    std::vector<double> values(m);
    for (int t = 0; t < m; ++t) values[t] = graphs[t](edges[e].i, edges[e].j);
    result[e] = estimate_entry(values, q, family);
  });

  SymmetricMatrix out(n);
  for (std::size_t e = 0; e < edges.size(); ++e)
    out.set_pair(edges[e].i, edges[e].j, result[e]);
  return out;
}

double population_mlq_root(double p, double c, double epsilon, QParam q) {
  if (!(p > 0.0) || !(c >= p)) throw InputError("population_mlq_root: need 0 < p <= c");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw InputError("population_mlq_root: epsilon must lie in (0,1)");
  if (q.value() >= 1.0) throw InputError("population_mlq_root: q must lie in (0,1)");

  const double qv = q.value();
  auto h = [&](double t) {
    double u = c * (1.0 - qv) + t;
    double v = p * (1.0 - qv) + t;
    return u * u * (1.0 - epsilon) * (p * qv - t) - v * v * epsilon * (t - c * qv);
  };

  double lo = qv * p;                              // h(lo) >= 0, zero iff p == c
  double hi = (1.0 - epsilon) * p + epsilon * c;   // h(hi) < 0 for q in (0,1)
  double h_lo = h(lo);
  if (h_lo == 0.0) return lo;
  double root = bisect(h, lo, hi, h_lo, 1e-15 * hi);
  // One Newton polish against the cubic's derivative.
  double u = c * (1.0 - qv) + root;
  double v = p * (1.0 - qv) + root;
  double dh = 2.0 * u * (1.0 - epsilon) * (p * qv - root) - u * u * (1.0 - epsilon) -
              2.0 * v * epsilon * (root - c * qv) - v * v * epsilon;
  if (dh != 0.0) {
    double polished = root - h(root) / dh;
    if (polished > lo && polished < hi) root = polished;
  }
  return root;
}

SymmetricMatrix truncate_estimate(const SymmetricMatrix& raw,
                                  const SymmetricMatrix& cap, RBound r) {
  if (raw.size() != cap.size())
    throw InputError("truncate_estimate: size mismatch");
  const int n = raw.size();
  SymmetricMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double upper = std::min(cap(i, j), r.R);
      out.set_pair(i, j, std::clamp(raw(i, j), 0.0, std::max(upper, 0.0)));
    }
  return out;
}

}  // namespace gre
