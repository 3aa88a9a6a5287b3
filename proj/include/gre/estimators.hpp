#ifndef GRE_ESTIMATORS_HPP
#define GRE_ESTIMATORS_HPP

#include <span>

#include "gre/models.hpp"
#include "gre/symmetric_matrix.hpp"

namespace gre {

/// Distortion parameter of the Lq-likelihood L_q(u) = (u^{1-q} - 1)/(1-q).
/// q == 1 recovers the plain MLE.
class QParam {
 public:
  explicit QParam(double q);
  double value() const { return q_; }
  bool is_mle() const { return q_ == 1.0; }

 private:
  double q_;
};

/// Entry-wise MLE of the mean parameter: the sample mean for both families.
double mle_entry(std::span<const double> x, WeightFamily family);

/// Exponential-family MLqE: the root of
///   g(theta) = sum_i exp(-(1-q) x_i / theta) (x_i - theta)
/// closest to the sample mean. The root lies in (x_min, x_mean); it is
/// located by a descending geometric scan from the mean (ratio 0.99)
/// followed by bisection to 1e-10 * max(1, x_mean).
double mlqe_exponential(std::span<const double> x, QParam q);

/// Poisson-family MLqE: the root of
///   sum_i f_theta(x_i)^{1-q} (x_i/theta - 1)
/// inside (0, e * x_mean], closest to the sample mean when several exist.
/// Weights are computed in log space with a log-factorial.
double mlqe_poisson(std::span<const double> x, QParam q);

/// Dispatch on family; q == 1 short-circuits to the sample mean.
double estimate_entry(std::span<const double> x, QParam q, WeightFamily family);

/// Applies the per-edge estimator to every i<j of the m graphs; the result
/// diagonal is zero (the pipeline's augmentation fills it later).
SymmetricMatrix estimate_matrix(std::span<const SymmetricMatrix> graphs,
                                QParam q, WeightFamily family);

/// Unique real root theta(F) of the population MLq cubic for the exponential
/// mixture (1-eps) Exp(p) + eps Exp(c):
///   h(t) = (c(1-q)+t)^2 (1-eps)(pq-t) - (p(1-q)+t)^2 eps (t-cq).
/// Satisfies q*p <= theta(F) < (1-eps)p + eps*c, with the lower bound strict
/// for p < c and attained exactly when p == c.
double population_mlq_root(double p, double c, double epsilon, QParam q);

/// Entry-wise projection of `raw` onto [0, min(cap_ij, R)]. Off by default
/// in the pipeline; exposed for the truncated-estimator variant.
SymmetricMatrix truncate_estimate(const SymmetricMatrix& raw,
                                  const SymmetricMatrix& cap, RBound r);

}  // namespace gre

#endif
