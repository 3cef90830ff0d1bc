#include "skilltask/scenario.hpp"

#include <cmath>
#include <string>

namespace skilltask {

void ScenarioSpec::validate() const {
  detail::require(skills_dim >= 1, "skills_dim must be >= 1");
  detail::require(tasks_dim >= 1, "tasks_dim must be >= 1");
  detail::require(periods >= 1, "periods must be >= 1");
  detail::require(price.size() == 1 || price.size() == periods,
                  "price must have 1 entry or one entry per period");
  for (double p : price) detail::require(std::isfinite(p) && p > 0.0, "price must be > 0");
  detail::require(std::isfinite(expected_quantity) && expected_quantity > 0.0,
                  "expected_quantity must be > 0");
  detail::require(std::isfinite(shock_sigma) && shock_sigma >= 0.0, "shock_sigma must be >= 0");
  if (ideal_matrix) {
    detail::require_same_size(ideal_matrix->rows(), skills_dim, "ideal_matrix rows vs skills_dim");
    detail::require_same_size(ideal_matrix->cols(), tasks_dim, "ideal_matrix cols vs tasks_dim");
  }
  if (base_skills) {
    detail::require_same_size(base_skills->size(), skills_dim, "base_skills vs skills_dim");
  }
  if (!skill_path.empty()) {
    detail::require_same_size(skill_path.size(), periods, "skill_path vs periods");
    for (const auto& s : skill_path) {
      detail::require_same_size(s.size(), skills_dim, "skill_path entry vs skills_dim");
    }
  }
}

Scenario::Scenario(ScenarioSpec spec, MatchingMatrix ideal, SkillVector base_skills)
    : spec_(std::move(spec)), ideal_(std::move(ideal)), base_skills_(std::move(base_skills)) {
  spec_.validate();
  detail::require_same_size(ideal_.rows(), spec_.skills_dim, "ideal matrix rows vs skills_dim");
  detail::require_same_size(ideal_.cols(), spec_.tasks_dim, "ideal matrix cols vs tasks_dim");
  detail::require_same_size(base_skills_.size(), spec_.skills_dim, "base skills vs skills_dim");
  base_tasks_ = TaskVector(task_output(base_skills_, ideal_).vec());
}

double Scenario::price_at(std::size_t t) const {
  if (t >= spec_.periods) {
    throw ValidationError("period " + std::to_string(t) + " out of range [0, " +
                          std::to_string(spec_.periods) + ")");
  }
  return spec_.price.size() == 1 ? spec_.price.front() : spec_.price[t];
}

PeriodInputs Scenario::period_inputs(std::size_t t) const {
  const double price = price_at(t);
  Rng rng = Rng::keyed(spec_.seed, streams::shock, t);
  TaskVector tasks = apply_shock(base_tasks_, spec_.shock_sigma, rng);
  const SkillVector& skills = spec_.skill_path.empty() ? base_skills_ : spec_.skill_path[t];
  return {std::move(tasks), skills, price};
}

Scenario generate_scenario(const ScenarioSpec& spec) {
  spec.validate();
  Rng rng = Rng::keyed(spec.seed, streams::scenario, 0);

  MatchingMatrix ideal;
  if (spec.ideal_matrix) {
    ideal = *spec.ideal_matrix;
  } else {
    std::vector<double> entries(spec.skills_dim * spec.tasks_dim);
    for (auto& a : entries) a = rng.uniform(0.1, 1.0);
    ideal = MatchingMatrix(spec.skills_dim, spec.tasks_dim, std::move(entries));
  }

  SkillVector skills;
  if (spec.base_skills) {
    skills = *spec.base_skills;
  } else {
    // Total supply in [0.5, 2], split between labor and machines by a uniform share.
    std::vector<double> labor(spec.skills_dim), machine(spec.skills_dim);
    for (std::size_t u = 0; u < spec.skills_dim; ++u) {
      const double total = rng.uniform(0.5, 2.0);
      const double machine_share = rng.uniform();
      machine[u] = total * machine_share;
      labor[u] = total - machine[u];
    }
    skills = SkillVector(std::move(labor), std::move(machine));
  }
  return Scenario(spec, std::move(ideal), std::move(skills));
}

TaskVector apply_shock(const TaskVector& tasks, double sigma, Rng& rng) {
  detail::require(std::isfinite(sigma) && sigma >= 0.0, "shock sigma must be >= 0");
  if (sigma == 0.0) return tasks;
  std::vector<double> out(tasks.size());
  for (std::size_t v = 0; v < tasks.size(); ++v) out[v] = tasks[v] * rng.lognormal(sigma);
  return TaskVector(std::move(out));
}

}  // namespace skilltask
