#include <doctest.h>

#include <cmath>
#include <vector>

#include "gre/eigen.hpp"
#include "gre/errors.hpp"
#include "gre/evaluation.hpp"
#include "gre/pipeline.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace gre;
using namespace gre::test;

TEST_CASE("marchette diagonal is the off-diagonal row average") {
  SymmetricMatrix a(3);
  a.set_pair(0, 1, 2.0);
  a.set_pair(0, 2, 4.0);
  a.set_pair(1, 2, 6.0);
  auto m = marchette_row_average(a);
  CHECK(m(0, 0) == 3.0);
  CHECK(m(1, 1) == 4.0);
  CHECK(m(2, 2) == 5.0);
  CHECK(m(0, 1) == 2.0);
  CHECK(m(0, 2) == 4.0);
  CHECK(m(1, 2) == 6.0);
}

TEST_CASE("augment_diagonal fixed point on a constant Gram matrix") {
  // For the constant matrix the true diagonal equals the row averages, so
  // both augmentation steps reproduce it exactly.
  const double c = 2.5;
  SymmetricMatrix a(6);
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) a.set_pair(i, j, c);
  auto aug = augment_diagonal(a, 2);
  for (int i = 0; i < 6; ++i) CHECK(std::abs(aug(i, i) - c) <= 1e-8);
}

TEST_CASE("augment_diagonal matches the two-step oracle composition") {
  auto a = random_psd(5, 2, 71, 1.0);
  SymmetricMatrix hollow(5);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) hollow.set_pair(i, j, a(i, j));
  auto aug = augment_diagonal(hollow, 2);
  auto step1 = marchette_row_average(hollow);
  auto low = oracle_lowrank(step1, 2);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(aug(i, i) - low(i, i)) <= 1e-8);
}

TEST_CASE("augment_diagonal never touches off-diagonals") {
  auto base = random_symmetric(7, 5);
  SymmetricMatrix a(7);
  for (int i = 0; i < 7; ++i)
    for (int j = i + 1; j < 7; ++j) a.set_pair(i, j, std::abs(base(i, j)));
  auto aug = augment_diagonal(a, 3);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      if (i != j) CHECK(aug(i, j) == a(i, j));  // bit-exact
}

TEST_CASE("augment_diagonal validates inputs") {
  SymmetricMatrix nonhollow(3);
  nonhollow.set_pair(1, 1, 2.0);
  CHECK_THROWS_AS(marchette_row_average(nonhollow), InputError);
  SymmetricMatrix a(3);
  CHECK_THROWS_AS(augment_diagonal(a, 0), InputError);
  CHECK_THROWS_AS(augment_diagonal(a, 4), InputError);
}

TEST_CASE("zhu_ghodsi frozen examples") {
  std::vector<double> gap = {10, 9, 1, 0.9, 0.8};
  auto sel = zhu_ghodsi_elbows(gap, 1);
  CHECK(sel.chosen == 2);
  CHECK(sel.elbows == std::vector<int>{2});
  CHECK(sel.profile_loglik.size() == 4);

  // Linear decay: splits 2 and 3 tie on the pooled variance; the lowest
  // split index wins.
  std::vector<double> linear = {5, 4, 3, 2, 1};
  CHECK(zhu_ghodsi_elbows(linear, 1).chosen == 2);

  std::vector<double> flat = {3, 3, 3, 3};
  CHECK(zhu_ghodsi_elbows(flat, 1).chosen == 1);
}

TEST_CASE("zhu_ghodsi agrees with the exhaustive oracle, including recursion") {
  std::vector<double> vals = {100, 99, 10, 9, 8, 1, 0.9, 0.8, 0.7};
  for (int k = 1; k <= 3; ++k) {
    auto sel = zhu_ghodsi_elbows(vals, k);
    auto expected = oracle_zg_elbows(vals, k);
    CHECK(sel.elbows == expected);
    CHECK(sel.chosen == expected.back());
  }
  // Seeded decreasing lists.
  std::mt19937_64 rng(2023);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v(12);
    for (auto& x : v) x = u(rng);
    std::sort(v.rbegin(), v.rend());
    CHECK(zhu_ghodsi_elbows(v, 2).elbows == oracle_zg_elbows(v, 2));
  }
}

TEST_CASE("zhu_ghodsi determinism and validation") {
  std::vector<double> vals = {9, 8, 2, 1.5, 1};
  auto a = zhu_ghodsi_elbows(vals, 2);
  auto b = zhu_ghodsi_elbows(vals, 2);
  CHECK(a.elbows == b.elbows);
  CHECK(a.profile_loglik == b.profile_loglik);

  std::vector<double> increasing = {1, 2, 3};
  CHECK_THROWS_AS(zhu_ghodsi_elbows(increasing, 1), InputError);
  std::vector<double> short_list = {3, 2};
  CHECK_THROWS_AS(zhu_ghodsi_elbows(short_list, 2), InputError);
  CHECK_THROWS_AS(zhu_ghodsi_elbows(vals, 0), InputError);
}

TEST_CASE("pipeline recovers a noiseless augmentation fixed point exactly") {
  // m identical hollow copies of the constant Gram matrix; embedding into
  // d = 2 keeps the one informative eigenpair plus a null direction.
  const double c = 1.75;
  const int n = 8;
  SymmetricMatrix g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.set_pair(i, j, c);
  std::vector<SymmetricMatrix> graphs = {g, g, g};
  PipelineConfig cfg;
  cfg.q = QParam{1.0};
  cfg.dim_mode = DimMode::fixed(2);
  auto out = low_rank_estimate(graphs, cfg, WeightFamily::Exponential);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) CHECK(std::abs(out.estimate(i, j) - c) <= 1e-8);
  CHECK(out.dims.chosen == 2);
}

TEST_CASE("pipeline output is clamped nonnegative") {
  WsbmSpec spec;
  spec.B = BlockMatrix(2, {4, 2, 2, 7});
  spec.rho = {0.5, 0.5};
  spec.family = WeightFamily::Exponential;
  ContaminationSpec cont;
  cont.Bprime = BlockMatrix(2, {9, 6, 6, 13});
  cont.epsilon = 0.3;
  auto pop = sample_population(spec, cont, 24, 4, RandomStream(404));
  PipelineConfig cfg;
  cfg.q = QParam{0.9};
  cfg.dim_mode = DimMode::fixed(2);
  auto out = low_rank_estimate(pop.graphs, cfg, spec.family);
  for (double v : out.estimate.data()) CHECK(v >= 0.0);
}

TEST_CASE("pipeline with d = n and clamp off reproduces the augmented estimate") {
  auto base = random_symmetric(6, 88);
  SymmetricMatrix g(6);
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) g.set_pair(i, j, std::abs(base(i, j)) + 0.1);
  std::vector<SymmetricMatrix> graphs = {g};
  PipelineConfig cfg;
  cfg.q = QParam{1.0};
  cfg.dim_mode = DimMode::fixed(6);
  cfg.clamp_negative = false;
  auto out = low_rank_estimate(graphs, cfg, WeightFamily::Exponential);
  auto expected = augment_diagonal(g, 6);
  CHECK(max_abs_diff(out.estimate, expected) <= 1e-8);
}

TEST_CASE("pipeline pre-clamp rank is at most d") {
  auto base = random_symmetric(9, 3);
  SymmetricMatrix g(9);
  for (int i = 0; i < 9; ++i)
    for (int j = i + 1; j < 9; ++j) g.set_pair(i, j, std::abs(base(i, j)) + 0.05);
  std::vector<SymmetricMatrix> graphs = {g};
  PipelineConfig cfg;
  cfg.q = QParam{1.0};
  cfg.dim_mode = DimMode::fixed(2);
  cfg.clamp_negative = false;  // clamp would break low-rankness
  auto out = low_rank_estimate(graphs, cfg, WeightFamily::Exponential);
  auto eig = eig_sym(out.estimate);
  for (int k = 2; k < 9; ++k)
    CHECK(std::abs(eig.eigenvalues[k]) <= 1e-8 * std::max(1.0, out.estimate.frobenius_norm()));
}

TEST_CASE("pipeline truncation caps entries by the entry-wise estimate and R") {
  SymmetricMatrix g(4);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) g.set_pair(i, j, 2.0 + i + j);
  std::vector<SymmetricMatrix> graphs = {g};
  PipelineConfig cfg;
  cfg.q = QParam{1.0};
  cfg.dim_mode = DimMode::fixed(4);
  cfg.truncation = RBound{3.0};
  auto out = low_rank_estimate(graphs, cfg, WeightFamily::Exponential);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      CHECK(out.estimate(i, j) <= std::min(g(i, j), 3.0) + 1e-12);
      CHECK(out.estimate(i, j) >= 0.0);
    }
}

TEST_CASE("low-rank refinement beats the entry-wise MLqE on most seeded draws") {
  WsbmSpec spec;
  spec.B = BlockMatrix(2, {4, 2, 2, 7});
  spec.rho = {0.5, 0.5};
  spec.family = WeightFamily::Exponential;
  ContaminationSpec cont;
  cont.Bprime = BlockMatrix(2, {9, 6, 6, 13});
  cont.epsilon = 0.1;
  PipelineConfig cfg;
  cfg.q = QParam{0.9};
  cfg.dim_mode = DimMode::fixed(2);

  int wins = 0;
  const int reps = 15;
  for (int r = 0; r < reps; ++r) {
    auto pop = sample_population(spec, cont, 50, 10, RandomStream(7000 + r));
    auto entry = estimate_matrix(pop.graphs, cfg.q, spec.family);
    auto refined = refine_low_rank(entry, cfg);
    if (mse_offdiag(refined.estimate, pop.P) < mse_offdiag(entry, pop.P)) ++wins;
  }
  CHECK(wins >= 12);
}

TEST_CASE("pipeline with auto dimension returns a consistent selection record") {
  WsbmSpec spec;
  spec.B = BlockMatrix(2, {4, 2, 2, 7});
  spec.rho = {0.5, 0.5};
  spec.family = WeightFamily::Exponential;
  ContaminationSpec cont;
  cont.Bprime = BlockMatrix(2, {9, 6, 6, 13});
  cont.epsilon = 0.0;
  auto pop = sample_population(spec, cont, 40, 8, RandomStream(11));
  PipelineConfig cfg;
  cfg.q = QParam{1.0};
  cfg.dim_mode = DimMode::zhu_ghodsi(3);
  auto out = low_rank_estimate(pop.graphs, cfg, spec.family);
  REQUIRE(out.dims.elbows.size() == 3);
  CHECK(out.dims.elbows[0] < out.dims.elbows[1]);
  CHECK(out.dims.elbows[1] < out.dims.elbows[2]);
  CHECK(out.dims.chosen == out.dims.elbows[2]);
  CHECK(out.dims.chosen <= 40);
  CHECK(out.dims.profile_loglik.size() == 39);
}
