#pragma once

// Seeded synthetic scenarios: an ideal matching matrix, the skill supply, and
// per-period task demand perturbed by multiplicative lognormal shocks.

#include <cstdint>
#include <optional>
#include <vector>

#include "skilltask/production.hpp"
#include "skilltask/random.hpp"

namespace skilltask {

struct ScenarioSpec {
  std::size_t skills_dim = 1;
  std::size_t tasks_dim = 1;
  std::size_t periods = 1;
  // One entry for a constant price, or one entry per period.
  std::vector<double> price{1.0};
  double expected_quantity = 1.0;
  double shock_sigma = 0.0;
  std::uint64_t seed = 0;
  std::optional<MatchingMatrix> ideal_matrix;
  std::optional<SkillVector> base_skills;
  // Explicit per-period skill supply; overrides base_skills period by period.
  std::vector<SkillVector> skill_path;

  void validate() const;
};

struct PeriodInputs {
  TaskVector tasks;
  SkillVector skills;
  double price = 0.0;
};

class Scenario {
 public:
  Scenario(ScenarioSpec spec, MatchingMatrix ideal, SkillVector base_skills);

  const ScenarioSpec& spec() const { return spec_; }
  const MatchingMatrix& ideal() const { return ideal_; }
  const SkillVector& base_skills() const { return base_skills_; }
  // Always base_skills·ideal.
  const TaskVector& base_tasks() const { return base_tasks_; }
  std::size_t periods() const { return spec_.periods; }

  // Period-t inputs. A pure function of (seed, t): call order does not matter.
  PeriodInputs period_inputs(std::size_t t) const;

  double price_at(std::size_t t) const;
  double expected_income_at(std::size_t t) const { return price_at(t) * spec_.expected_quantity; }

 private:
  ScenarioSpec spec_;
  MatchingMatrix ideal_;
  SkillVector base_skills_;
  TaskVector base_tasks_;
};

Scenario generate_scenario(const ScenarioSpec& spec);

// Multiplies each component by an independent lognormal(0, sigma) draw.
TaskVector apply_shock(const TaskVector& tasks, double sigma, Rng& rng);

}  // namespace skilltask
