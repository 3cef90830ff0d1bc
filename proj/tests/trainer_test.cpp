#include "skilltask/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace skilltask {
namespace {

LearningConfig config(double lr_matrix, double lr_value, std::size_t epochs = 10000) {
  LearningConfig cfg;
  cfg.lr_matrix = lr_matrix;
  cfg.lr_value = lr_value;
  cfg.max_periods = epochs;
  return cfg;
}

MatchingTrainingSet matching_set(const oracle::Mat& xs, const oracle::Mat& ys) {
  MatchingTrainingSet set;
  for (std::size_t s = 0; s < xs.size(); ++s) {
    set.samples.push_back({SkillVector::from_totals(xs[s]), TaskVector(ys[s])});
  }
  return set;
}

ValueTrainingSet value_set(const oracle::Mat& ys, const oracle::Vec& incomes) {
  ValueTrainingSet set;
  for (std::size_t s = 0; s < ys.size(); ++s) set.samples.push_back({TaskVector(ys[s]), incomes[s]});
  return set;
}

// Random consistent problem: n samples x_s in [0.5, 2]^i, targets x_s·A* with A* in [0.1, 1].
struct ConsistentProblem {
  oracle::Mat xs, ys, ideal;
};

ConsistentProblem consistent_problem(Rng& rng, std::size_t n, std::size_t i, std::size_t j) {
  ConsistentProblem p;
  p.ideal.assign(i, oracle::Vec(j));
  for (auto& row : p.ideal) {
    for (auto& a : row) a = rng.uniform(0.1, 1.0);
  }
  for (std::size_t s = 0; s < n; ++s) {
    oracle::Vec x(i);
    for (auto& xu : x) xu = rng.uniform(0.5, 2.0);
    p.ys.push_back(oracle::row_times_matrix(x, p.ideal));
    p.xs.push_back(std::move(x));
  }
  return p;
}

double max_sq_norm(const oracle::Mat& xs) {
  double m = 0;
  for (const auto& x : xs) m = std::max(m, oracle::dot(x, x));
  return m;
}

TEST(TrainMatchingMatrixTest, RecoversIdentity) {
  const auto set = matching_set({{1, 0}, {0, 1}}, {{1, 0}, {0, 1}});
  auto [a, report] = train_matching_matrix(set, random_matching_matrix(2, 2, 7), config(0.2, 0.1));
  EXPECT_TRUE(report.converged);
  const auto oracle_fit = oracle::normal_equations({{1, 0}, {0, 1}}, {{1, 0}, {0, 1}});
  for (std::size_t u = 0; u < 2; ++u) {
    for (std::size_t v = 0; v < 2; ++v) EXPECT_NEAR(a(u, v), oracle_fit[u][v], 1e-6);
  }
  EXPECT_EQ(report.loss_history.size(), report.epochs_run);
  EXPECT_EQ(report.final_loss, report.loss_history.back());
}

TEST(TrainMatchingMatrixTest, SatisfiedSampleNeedsOneEpoch) {
  const auto a0 = MatchingMatrix::from_rows({{0.5, 1}, {1, 0.25}});
  const auto set = matching_set({{2, 1}}, {{2, 2.25}});
  auto [a, report] = train_matching_matrix(set, a0, config(0.3, 0.1));
  EXPECT_EQ(report.epochs_run, 1u);
  EXPECT_TRUE(report.converged);
  EXPECT_EQ(a, a0);
  EXPECT_EQ(report.final_loss, 0.0);
}

TEST(TrainMatchingMatrixTest, FullRankSetGeneralizes) {
  Rng rng = Rng::keyed(5, 100, 0);
  const auto p = consistent_problem(rng, 4, 3, 2);
  const auto set = matching_set(p.xs, p.ys);
  auto [a, report] = train_matching_matrix(set, random_matching_matrix(3, 2, 1),
                                           config(0.5 / max_sq_norm(p.xs), 0.1, 200000));
  ASSERT_TRUE(report.converged);
  const oracle::Vec held_out{1.3, 0.2, 0.9};
  const auto expected = oracle::row_times_matrix(held_out, p.ideal);
  const auto got = task_output(SkillVector::from_totals(held_out), a);
  for (std::size_t v = 0; v < 2; ++v) EXPECT_NEAR(got[v], expected[v], 1e-6);
}

TEST(TrainMatchingMatrixTest, RejectsBadSets) {
  EXPECT_THROW(train_matching_matrix(MatchingTrainingSet{}, MatchingMatrix::identity(2),
                                     config(0.1, 0.1)),
               ValidationError);
  auto ragged = matching_set({{1, 0}}, {{1, 0}});
  ragged.samples.push_back({SkillVector::from_totals({1, 0, 0}), TaskVector{1, 0}});
  EXPECT_THROW(train_matching_matrix(ragged, MatchingMatrix::identity(2), config(0.1, 0.1)),
               DimensionError);
  EXPECT_THROW(train_matching_matrix(matching_set({{1, 0}}, {{1, 0}}), MatchingMatrix::identity(3),
                                     config(0.1, 0.1)),
               DimensionError);
}

TEST(TrainValueVectorTest, RecoversValues) {
  const auto set = value_set({{1, 0}, {0, 1}}, {2, 3});
  auto [lambda, report] = train_value_vector(set, TaskValueVector{0, 0}, config(0.1, 0.3));
  EXPECT_TRUE(report.converged);
  EXPECT_NEAR(lambda[0], 2.0, 1e-6);
  EXPECT_NEAR(lambda[1], 3.0, 1e-6);
}

TEST(TrainValueVectorTest, ExactStartIsUnchanged) {
  const auto set = value_set({{1, 2}, {3, 0.5}}, {1 * 2 + 2 * -1.0, 3 * 2 + 0.5 * -1.0});
  const TaskValueVector exact{2, -1};
  auto [lambda, report] = train_value_vector(set, exact, config(0.1, 0.3));
  EXPECT_EQ(lambda, exact);
  EXPECT_EQ(report.epochs_run, 1u);
  EXPECT_TRUE(report.converged);
}

TEST(TrainValueVectorTest, InconsistentSetApproachesLeastSquares) {
  // Minimizer of ½(λ−1)² + ½(λ−2)² is 1.5 with loss 0.25. A constant online
  // rate θ settles at (3−θ)/(2−θ), so θ is kept small.
  const auto set = value_set({{1}, {1}}, {1, 2});
  auto [lambda, report] = train_value_vector(set, TaskValueVector{0}, config(0.1, 0.001));
  EXPECT_NEAR(lambda[0], 1.5, 1e-3);
  EXPECT_NEAR(lambda[0], (3 - 0.001) / (2 - 0.001), 1e-6);
  EXPECT_NEAR(report.final_loss, 0.25, 1e-4);
  EXPECT_FALSE(report.converged);
}

TEST(TrainValueVectorTest, RejectsBadSets) {
  EXPECT_THROW(train_value_vector(ValueTrainingSet{}, TaskValueVector{0}, config(0.1, 0.1)),
               ValidationError);
  EXPECT_THROW(train_value_vector(value_set({{1, 2}}, {1}), TaskValueVector{0}, config(0.1, 0.1)),
               DimensionError);
}

TEST(TrainerPropertyTest, MatchesNormalEquationsOnConsistentSets) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng = Rng::keyed(seed, 101, 0);
    const auto p = consistent_problem(rng, 3, 3, 3);
    const auto fit = oracle::normal_equations(p.xs, p.ys);
    const double theta = 0.5 / max_sq_norm(p.xs);
    auto [a, report] = train_matching_matrix(matching_set(p.xs, p.ys),
                                             random_matching_matrix(3, 3, seed),
                                             config(theta, 0.1, 500000));
    ASSERT_TRUE(report.converged) << "seed " << seed;
    for (const auto& x : p.xs) {
      const auto trained = task_output(SkillVector::from_totals(x), a);
      const auto exact = oracle::row_times_matrix(x, fit);
      for (std::size_t v = 0; v < 3; ++v) EXPECT_NEAR(trained[v], exact[v], 1e-6);
    }
  }
}

// The summed epoch loss is not monotone for online updates at this rate, but
// on a consistent set every step moves the parameters closer to a solution.
TEST(TrainerPropertyTest, DistanceToConsistentSolutionNeverGrows) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng = Rng::keyed(seed, 102, 0);
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 6));
    const auto i = static_cast<std::size_t>(rng.uniform_int(1, 4));
    const auto j = static_cast<std::size_t>(rng.uniform_int(1, 4));
    const auto p = consistent_problem(rng, n, i, j);
    const double theta = 0.5 / max_sq_norm(p.xs);
    const auto mset = matching_set(p.xs, p.ys);
    oracle::Vec incomes;
    oracle::Vec lambda_star;
    for (const auto& row : p.ideal) lambda_star.push_back(row[0]);
    for (const auto& y : p.ys) incomes.push_back(y[0]);
    const auto vset = value_set(p.xs, incomes);

    double prev_a = std::numeric_limits<double>::infinity();
    double prev_l = std::numeric_limits<double>::infinity();
    for (std::size_t epochs = 1; epochs <= 25; ++epochs) {
      const auto a = train_matching_matrix(mset, random_matching_matrix(i, j, seed),
                                           config(theta, 0.1, epochs)).first;
      const auto l = train_value_vector(vset, random_value_vector(i, seed),
                                        config(0.1, theta, epochs)).first;
      double da = 0.0;
      double dl = 0.0;
      for (std::size_t u = 0; u < i; ++u) {
        for (std::size_t v = 0; v < j; ++v) da += std::pow(a(u, v) - p.ideal[u][v], 2);
        dl += std::pow(l[u] - lambda_star[u], 2);
      }
      EXPECT_LE(da, prev_a * (1 + 1e-12)) << "seed " << seed << " epoch " << epochs;
      EXPECT_LE(dl, prev_l * (1 + 1e-12)) << "seed " << seed << " epoch " << epochs;
      prev_a = da;
      prev_l = dl;
    }
  }
}

TEST(TrainerPropertyTest, EpochLossEventuallyFallsOnConsistentSets) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng = Rng::keyed(seed, 105, 0);
    const auto p = consistent_problem(rng, 4, 3, 2);
    auto [a, report] = train_matching_matrix(matching_set(p.xs, p.ys), random_matching_matrix(3, 2, seed),
                                             config(0.5 / max_sq_norm(p.xs), 0.1, 200));
    EXPECT_LT(report.loss_history.back(), report.loss_history.front()) << "seed " << seed;
  }
}

TEST(TrainerPropertyTest, SampleOrderDoesNotChangeTheLimit) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng = Rng::keyed(seed, 103, 0);
    auto p = consistent_problem(rng, 3, 3, 2);
    const auto cfg = config(0.5 / max_sq_norm(p.xs), 0.1, 500000);
    auto [a, ra] = train_matching_matrix(matching_set(p.xs, p.ys), random_matching_matrix(3, 2, 0), cfg);
    std::reverse(p.xs.begin(), p.xs.end());
    std::reverse(p.ys.begin(), p.ys.end());
    auto [b, rb] = train_matching_matrix(matching_set(p.xs, p.ys), random_matching_matrix(3, 2, 0), cfg);
    EXPECT_EQ(ra.converged, rb.converged);
    for (std::size_t k = 0; k < a.entries().size(); ++k) {
      EXPECT_NEAR(a.entries()[k], b.entries()[k], 1e-6);
    }
  }
}

TEST(TrainerPropertyTest, Deterministic) {
  Rng rng = Rng::keyed(3, 104, 0);
  const auto p = consistent_problem(rng, 5, 2, 3);
  const auto set = matching_set(p.xs, p.ys);
  const auto cfg = config(0.05, 0.1, 50);
  auto [a, ra] = train_matching_matrix(set, random_matching_matrix(2, 3, 9), cfg);
  auto [b, rb] = train_matching_matrix(set, random_matching_matrix(2, 3, 9), cfg);
  EXPECT_EQ(a, b);
  EXPECT_EQ(ra.loss_history, rb.loss_history);
}

TEST(ScenarioDatasetsTest, OneSamplePerPeriod) {
  ScenarioSpec spec;
  spec.skills_dim = 2;
  spec.tasks_dim = 3;
  spec.periods = 4;
  spec.price = {2.0};
  spec.expected_quantity = 1.5;
  spec.shock_sigma = 0.1;
  const auto s = generate_scenario(spec);
  const auto ms = matching_set_from_scenario(s);
  const auto vs = value_set_from_scenario(s);
  ASSERT_EQ(ms.samples.size(), 4u);
  ASSERT_EQ(vs.samples.size(), 4u);
  EXPECT_EQ(ms.samples[2].tasks, s.period_inputs(2).tasks);
  EXPECT_EQ(vs.samples[3].income, 3.0);
}

}  // namespace
}  // namespace skilltask
