#include "skilltask/scenario.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "skilltask/iteration.hpp"

namespace skilltask {
namespace {

ScenarioSpec small_spec(std::uint64_t seed = 42) {
  ScenarioSpec spec;
  spec.skills_dim = 3;
  spec.tasks_dim = 2;
  spec.periods = 8;
  spec.seed = seed;
  return spec;
}

TEST(GenerateScenarioTest, DeterministicForSeed) {
  auto spec = small_spec();
  spec.shock_sigma = 0.3;
  const auto a = generate_scenario(spec);
  const auto b = generate_scenario(spec);
  EXPECT_EQ(a.ideal(), b.ideal());
  EXPECT_EQ(a.base_skills(), b.base_skills());
  EXPECT_EQ(a.base_tasks(), b.base_tasks());
  for (std::size_t t = 0; t < spec.periods; ++t) {
    EXPECT_EQ(a.period_inputs(t).tasks, b.period_inputs(t).tasks);
  }
  EXPECT_NE(generate_scenario(small_spec(43)).ideal(), a.ideal());
}

TEST(GenerateScenarioTest, ExplicitIdentity) {
  ScenarioSpec spec;
  spec.skills_dim = 2;
  spec.tasks_dim = 2;
  spec.ideal_matrix = MatchingMatrix::identity(2);
  spec.base_skills = SkillVector::from_totals({1, 1});
  EXPECT_EQ(generate_scenario(spec).base_tasks(), TaskVector({1, 1}));
}

TEST(GenerateScenarioTest, BaseTasksAreSkillsThroughIdeal) {
  const auto s = generate_scenario(small_spec(42));
  const auto expected = oracle::row_times_matrix(s.base_skills().totals(), s.ideal().to_rows());
  for (std::size_t v = 0; v < expected.size(); ++v) {
    EXPECT_LE(oracle::relative_error(s.base_tasks()[v], expected[v]), 1e-15);
  }
  for (double a : s.ideal().entries()) {
    EXPECT_GE(a, 0.1);
    EXPECT_LE(a, 1.0);
  }
  for (double x : s.base_skills().totals()) {
    EXPECT_GE(x, 0.5);
    EXPECT_LE(x, 2.0);
  }
}

TEST(GenerateScenarioTest, RejectsInvalidSpecs) {
  auto spec = small_spec();
  spec.skills_dim = 0;
  EXPECT_THROW(generate_scenario(spec), ValidationError);
  spec = small_spec();
  spec.shock_sigma = -0.1;
  EXPECT_THROW(generate_scenario(spec), ValidationError);
  spec = small_spec();
  spec.price = {1, 2};
  EXPECT_THROW(generate_scenario(spec), ValidationError);
  spec = small_spec();
  spec.ideal_matrix = MatchingMatrix::identity(2);
  EXPECT_THROW(generate_scenario(spec), DimensionError);
}

TEST(ApplyShockTest, ZeroSigmaIsIdentity) {
  Rng rng(1);
  const TaskVector y{1.5, 0, 3};
  EXPECT_EQ(apply_shock(y, 0.0, rng), y);
}

TEST(ApplyShockTest, ZeroTasksStayZero) {
  Rng rng(2);
  EXPECT_EQ(apply_shock(TaskVector{0, 0}, 0.7, rng), TaskVector({0, 0}));
}

TEST(ApplyShockTest, MatchesReferenceLognormalStream) {
  const TaskVector y{1, 2, 0.5, 4};
  Rng rng = Rng::keyed(9, streams::shock, 3);
  const auto shocked = apply_shock(y, 0.1, rng);
  const auto factors = oracle::lognormal_factors(9, streams::shock, 3, 0.1, y.size());
  for (std::size_t v = 0; v < y.size(); ++v) EXPECT_EQ(shocked[v], y[v] * factors[v]);
}

TEST(ApplyShockTest, RejectsNegativeSigma) {
  Rng rng(3);
  EXPECT_THROW(apply_shock(TaskVector{1}, -1.0, rng), ValidationError);
}

TEST(PeriodInputsTest, OrderIndependent) {
  auto spec = small_spec();
  spec.shock_sigma = 0.25;
  const auto s = generate_scenario(spec);
  const auto first = s.period_inputs(5);
  (void)s.period_inputs(2);
  EXPECT_EQ(s.period_inputs(5).tasks, first.tasks);
  EXPECT_NE(s.period_inputs(2).tasks, first.tasks);
}

TEST(PeriodInputsTest, NoShockReturnsBaseValues) {
  const auto s = generate_scenario(small_spec());
  for (std::size_t t = 0; t < s.periods(); ++t) {
    const auto in = s.period_inputs(t);
    EXPECT_EQ(in.tasks, s.base_tasks());
    EXPECT_EQ(in.skills, s.base_skills());
    EXPECT_EQ(in.price, 1.0);
  }
}

TEST(PeriodInputsTest, PricePathAndRange) {
  auto spec = small_spec();
  spec.periods = 3;
  spec.price = {1, 2.5, 4};
  const auto s = generate_scenario(spec);
  EXPECT_EQ(s.period_inputs(1).price, 2.5);
  EXPECT_EQ(s.expected_income_at(2), 4.0);
  EXPECT_THROW(s.period_inputs(3), ValidationError);
}

TEST(PeriodInputsTest, ExplicitSkillPath) {
  auto spec = small_spec();
  spec.periods = 2;
  spec.skill_path = {SkillVector::from_totals({1, 1, 1}), SkillVector::from_totals({2, 0, 1})};
  const auto s = generate_scenario(spec);
  EXPECT_EQ(s.period_inputs(1).skills, spec.skill_path[1]);
}

TEST(ScenarioPropertyTest, ShockedTasksAreNonNegative) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto spec = small_spec(seed);
    spec.shock_sigma = 1.5;
    const auto s = generate_scenario(spec);
    for (std::size_t t = 0; t < s.periods(); ++t) {
      const auto in = s.period_inputs(t);
      for (double y : in.tasks.values()) EXPECT_GE(y, 0.0);
    }
  }
}

TEST(ScenarioPropertyTest, IdealFirmHasNoMatchingLoss) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = generate_scenario(small_spec(seed));
    for (std::size_t t = 0; t < s.periods(); ++t) {
      const auto in = s.period_inputs(t);
      EXPECT_EQ(loss_matching(task_output(in.skills, s.ideal()), in.tasks), 0.0);
    }
  }
}

}  // namespace
}  // namespace skilltask
