#pragma once

// Matching efficiency: choosing the best employee independently for every
// task is never worse than staffing the whole occupation with one employee.
//
// Iteration efficiency: the production cycle is bracketed by a critical-path
// bound (longest component) and a serial bound (sum of components). Measured
// per task type instead of per occupation, neither bound can grow.

#include <cstdint>
#include <vector>

#include "skilltask/production.hpp"
#include "skilltask/random.hpp"

namespace skilltask {

struct MatchingInstance {
  std::vector<SkillVector> employees;
  TaskVector occupation_tasks;
  MatchingMatrix matrix;
  TaskValueVector values;

  void validate() const;
};

struct JobLevelResult {
  double value = 0.0;
  std::size_t employee = 0;
};

struct TaskLevelResult {
  double value = 0.0;
  // Chosen employee per task.
  std::vector<std::size_t> assignment;
  // q · max over (employee, skill, task) of x_u·a_uv·λ_v, reported for reference only.
  double literal_reference = 0.0;
};

// Componentwise max(0, r).
ProfitGapVector clamp_gap(const ProfitGapVector& gap);

// Best single employee for the whole occupation: max_e Σ_v λ_v·(x_e·A)_v.
JobLevelResult job_level_value(const MatchingInstance& inst);

// Sum over tasks of max_e λ_v·(x_e·A)_v.
TaskLevelResult task_level_value(const MatchingInstance& inst);

bool check_matching_dominance(const MatchingInstance& inst);

struct DurationInterval {
  double lower = 0.0;
  double upper = 0.0;
};

struct Occupation {
  // Units of each global task type in one occupation instance.
  std::vector<double> task_counts;
  // Number of occupation instances staffed.
  std::uint64_t count = 1;
};

struct SchedulingInstance {
  std::vector<Occupation> occupations;
  std::vector<double> task_times;
  double parallelism = 0.0;

  void validate() const;
};

// [max_m w_m·y_m, Σ_m w_m·y_m].
DurationInterval occupation_duration_bounds(const std::vector<double>& task_quantities,
                                            const std::vector<double>& task_times);

// (1−ρ)·upper + ρ·lower: ρ = 0 runs the tasks serially, ρ = 1 fully in parallel.
double occupation_duration(const std::vector<double>& task_quantities,
                           const std::vector<double>& task_times, double parallelism);

// Per-task-type totals y_v = Σ_k y_kv·D_k.
std::vector<double> flatten_task_totals(const SchedulingInstance& inst);
// J = Σ_k Σ_v y_kv·D_k.
double total_task_count(const SchedulingInstance& inst);

DurationInterval cycle_bounds_occupation(const SchedulingInstance& inst);
DurationInterval cycle_bounds_task(const SchedulingInstance& inst);

// Throws InapplicableRegimeError unless parallelism == 0.
bool check_cycle_dominance(const SchedulingInstance& inst);

struct MatchingInstanceLimits {
  std::size_t max_employees = 5;
  std::size_t max_tasks = 6;
  std::size_t max_skills = 4;
  // Draw λ from [-1, 1] instead of [0, 1].
  bool signed_values = false;
};

struct SchedulingInstanceLimits {
  std::size_t max_occupations = 5;
  std::size_t max_task_types = 6;
  std::uint64_t max_count = 4;
};

MatchingInstance random_matching_instance(Rng& rng, const MatchingInstanceLimits& limits = {});

// Every task type is owned by exactly one occupation, which is the regime in
// which the critical-path comparison holds. Parallelism is 0.
SchedulingInstance random_scheduling_instance(Rng& rng,
                                              const SchedulingInstanceLimits& limits = {});

}  // namespace skilltask
