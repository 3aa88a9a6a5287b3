#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "gre/models.hpp"
#include "test_support.hpp"

using namespace gre;
using namespace gre::test;

namespace {

WsbmSpec two_block_spec() {
  WsbmSpec spec;
  spec.B = BlockMatrix(2, {4, 2, 2, 7});
  spec.rho = {0.5, 0.5};
  spec.family = WeightFamily::Exponential;
  return spec;
}

ContaminationSpec two_block_cont(double eps) {
  ContaminationSpec cont;
  cont.Bprime = BlockMatrix(2, {9, 6, 6, 13});
  cont.epsilon = eps;
  return cont;
}

}  // namespace

TEST_CASE("sample_tau with a single block is constant") {
  WsbmSpec spec;
  spec.B = BlockMatrix(1, {3});
  spec.rho = {1.0};
  auto tau = sample_tau(spec, 5, RandomStream(1));
  for (int label : tau.labels) CHECK(label == 0);
}

TEST_CASE("sample_tau replays deterministically") {
  auto spec = two_block_spec();
  auto a = sample_tau(spec, 8, RandomStream(42));
  auto b = sample_tau(spec, 8, RandomStream(42));
  CHECK(a.labels == b.labels);
}

TEST_CASE("sample_tau block fraction concentrates at rho") {
  auto spec = two_block_spec();
  auto tau = sample_tau(spec, 100000, RandomStream(7));
  int count = 0;
  for (int label : tau.labels) count += label == 0;
  double frac = count / 100000.0;
  CHECK(std::abs(frac - 0.5) <= 0.01);
}

TEST_CASE("build_P maps block pairs to B entries") {
  auto spec = two_block_spec();
  BlockAssignment tau{{0, 0, 1}};
  auto p = build_P(spec, tau);
  CHECK(p(0, 1) == 4.0);
  CHECK(p(0, 2) == 2.0);
  CHECK(p(1, 2) == 2.0);
  CHECK(p(0, 0) == 4.0);  // stored for reference
  CHECK(p(2, 2) == 7.0);
}

TEST_CASE("build_P with one block is constant") {
  WsbmSpec spec;
  spec.B = BlockMatrix(1, {3});
  spec.rho = {1.0};
  BlockAssignment tau{{0, 0, 0, 0}};
  auto p = build_P(spec, tau);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(p(i, j) == 3.0);
}

TEST_CASE("permuting tau permutes P identically") {
  auto spec = two_block_spec();
  BlockAssignment tau{{0, 1, 0, 1, 1}};
  std::vector<int> perm = {4, 2, 0, 1, 3};
  BlockAssignment tau_p{{}};
  for (int i : perm) tau_p.labels.push_back(tau.labels[i]);
  auto p = build_P(spec, tau);
  auto pp = build_P(spec, tau_p);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(pp(i, j) == p(perm[i], perm[j]));
}

TEST_CASE("sample_graph with epsilon 0 matches the clean mean") {
  SymmetricMatrix p(2), c(2);
  p.set_pair(0, 1, 4.0);
  c.set_pair(0, 1, 9.0);
  RandomStream rng(11);
  double sum = 0.0;
  const int reps = 100000;
  for (int r = 0; r < reps; ++r)
    sum += sample_graph(p, c, 0.0, WeightFamily::Exponential, rng.substream(r))(0, 1);
  CHECK(std::abs(sum / reps - 4.0) <= 0.02 * 4.0);
}

TEST_CASE("sample_graph with epsilon 1 is pure contamination") {
  SymmetricMatrix p(2), c(2);
  p.set_pair(0, 1, 4.0);
  c.set_pair(0, 1, 9.0);
  RandomStream rng(13);
  double sum = 0.0;
  const int reps = 100000;
  for (int r = 0; r < reps; ++r)
    sum += sample_graph(p, c, 1.0, WeightFamily::Exponential, rng.substream(r))(0, 1);
  CHECK(std::abs(sum / reps - 9.0) <= 0.02 * 9.0);
}

TEST_CASE("sample_graph mixture mean") {
  SymmetricMatrix p(2), c(2);
  p.set_pair(0, 1, 4.0);
  c.set_pair(0, 1, 9.0);
  RandomStream rng(17);
  double sum = 0.0;
  const int reps = 100000;
  for (int r = 0; r < reps; ++r)
    sum += sample_graph(p, c, 0.1, WeightFamily::Exponential, rng.substream(r))(0, 1);
  CHECK(std::abs(sum / reps - 4.5) <= 0.02 * 4.5);
}

TEST_CASE("Poisson graphs have integer weights and the mixture mean") {
  SymmetricMatrix p(2), c(2);
  p.set_pair(0, 1, 3.0);
  c.set_pair(0, 1, 8.0);
  RandomStream rng(19);
  const double eps = 0.2;
  const double mu = (1 - eps) * 3.0 + eps * 8.0;
  // mixture second moment for Poisson components: E X^2 = theta + theta^2
  const double ex2 = (1 - eps) * (3.0 + 9.0) + eps * (8.0 + 64.0);
  const double sigma = std::sqrt(ex2 - mu * mu);
  const int reps = 200000;
  double sum = 0.0;
  for (int r = 0; r < reps; ++r) {
    double w = sample_graph(p, c, eps, WeightFamily::Poisson, rng.substream(r))(0, 1);
    CHECK(w >= 0.0);
    CHECK(std::floor(w) == w);
    sum += w;
  }
  CHECK(std::abs(sum / reps - mu) <= 4.0 * sigma / std::sqrt(double(reps)));
}

TEST_CASE("sample_graph is deterministic per stream") {
  BlockAssignment tau{{0, 1, 0, 1, 1, 0}};
  auto spec = two_block_spec();
  auto p = build_P(spec, tau);
  auto c = block_parameter_matrix(two_block_cont(0.3).Bprime, tau);
  auto a = sample_graph(p, c, 0.3, WeightFamily::Exponential, RandomStream(5));
  auto b = sample_graph(p, c, 0.3, WeightFamily::Exponential, RandomStream(5));
  CHECK(std::memcmp(a.data().data(), b.data().data(),
                    a.data().size() * sizeof(double)) == 0);
}

TEST_CASE("sample_population produces hollow symmetric nonnegative graphs") {
  auto pop = sample_population(two_block_spec(), two_block_cont(0.1), 100, 20,
                               RandomStream(20240817));
  CHECK(pop.graphs.size() == 20);
  for (const auto& g : pop.graphs) {
    CHECK(g.size() == 100);
    CHECK(g.is_hollow());
    for (double v : g.data()) CHECK(v >= 0.0);
  }
  // Shared block pattern: same block pair, same P entry.
  for (int i = 0; i < 100; ++i)
    for (int j = i + 1; j < 100; ++j)
      CHECK(pop.P(i, j) ==
            two_block_spec().B(pop.tau.labels[i], pop.tau.labels[j]));
}

TEST_CASE("sample_population replays deterministically") {
  auto a = sample_population(two_block_spec(), two_block_cont(0.2), 12, 3, RandomStream(9));
  auto b = sample_population(two_block_spec(), two_block_cont(0.2), 12, 3, RandomStream(9));
  CHECK(a.tau.labels == b.tau.labels);
  for (int t = 0; t < 3; ++t)
    CHECK(std::memcmp(a.graphs[t].data().data(), b.graphs[t].data().data(),
                      a.graphs[t].data().size() * sizeof(double)) == 0);
}

TEST_CASE("sample_population with m = 1") {
  auto pop = sample_population(two_block_spec(), two_block_cont(0.0), 6, 1, RandomStream(3));
  CHECK(pop.graphs.size() == 1);
  CHECK(pop.graphs[0].is_hollow());
}
