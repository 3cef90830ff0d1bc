#include "skilltask/efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace skilltask {
namespace {

double tolerance_scale(double a, double b) {
  return 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

// λ_v·(x·A)_v for every task v.
std::vector<double> task_values_for(const SkillVector& employee, const MatchingInstance& inst) {
  const auto out = task_output(employee, inst.matrix);
  std::vector<double> per_task(out.size());
  for (std::size_t v = 0; v < out.size(); ++v) per_task[v] = inst.values[v] * out[v];
  return per_task;
}

}  // namespace

void MatchingInstance::validate() const {
  detail::require(!employees.empty(), "matching instance needs at least one employee");
  for (std::size_t e = 0; e < employees.size(); ++e) {
    detail::require_same_size(employees[e].size(), matrix.rows(),
                              ("employee " + std::to_string(e) + " skills vs matrix rows").c_str());
  }
  detail::require_same_size(occupation_tasks.size(), matrix.cols(),
                            "occupation tasks vs matrix cols");
  detail::require_same_size(values.size(), matrix.cols(), "task values vs matrix cols");
}

ProfitGapVector clamp_gap(const ProfitGapVector& gap) {
  std::vector<double> out(gap.vec());
  for (auto& r : out) r = std::max(0.0, r);
  return ProfitGapVector(std::move(out));
}

JobLevelResult job_level_value(const MatchingInstance& inst) {
  inst.validate();
  JobLevelResult best;
  for (std::size_t e = 0; e < inst.employees.size(); ++e) {
    const auto per_task = task_values_for(inst.employees[e], inst);
    const double total = std::accumulate(per_task.begin(), per_task.end(), 0.0);
    if (e == 0 || total > best.value) best = {total, e};
  }
  return best;
}

TaskLevelResult task_level_value(const MatchingInstance& inst) {
  inst.validate();
  const std::size_t q = inst.matrix.cols();
  std::vector<double> best(q, 0.0);
  TaskLevelResult result;
  result.assignment.assign(q, 0);
  double literal_max = 0.0;
  for (std::size_t e = 0; e < inst.employees.size(); ++e) {
    const auto per_task = task_values_for(inst.employees[e], inst);
    for (std::size_t v = 0; v < q; ++v) {
      if (e == 0 || per_task[v] > best[v]) {
        best[v] = per_task[v];
        result.assignment[v] = e;
      }
      for (std::size_t u = 0; u < inst.matrix.rows(); ++u) {
        const double single = inst.employees[e].total(u) * inst.matrix(u, v) * inst.values[v];
        if ((e == 0 && u == 0 && v == 0) || single > literal_max) literal_max = single;
      }
    }
  }
  result.value = std::accumulate(best.begin(), best.end(), 0.0);
  result.literal_reference = static_cast<double>(q) * literal_max;
  return result;
}

bool check_matching_dominance(const MatchingInstance& inst) {
  const double task_level = task_level_value(inst).value;
  const double job_level = job_level_value(inst).value;
  return task_level >= job_level - tolerance_scale(task_level, job_level);
}

void SchedulingInstance::validate() const {
  detail::require(!occupations.empty(), "scheduling instance needs at least one occupation");
  detail::require(!task_times.empty(), "scheduling instance needs at least one task type");
  for (double w : task_times) {
    detail::require(std::isfinite(w) && w > 0.0, "task times must be > 0");
  }
  detail::require(parallelism >= 0.0 && parallelism <= 1.0, "parallelism must lie in [0, 1]");
  for (std::size_t k = 0; k < occupations.size(); ++k) {
    const auto& occ = occupations[k];
    const std::string where = "occupation " + std::to_string(k);
    if (occ.task_counts.size() != task_times.size()) {
      throw DimensionError(where + " references " + std::to_string(occ.task_counts.size()) +
                           " task types, expected " + std::to_string(task_times.size()));
    }
    detail::require(occ.count >= 1, where + " count must be >= 1");
    bool any_positive = false;
    for (double y : occ.task_counts) {
      detail::require(std::isfinite(y) && y >= 0.0, where + " task counts must be >= 0");
      any_positive = any_positive || y > 0.0;
    }
    detail::require(any_positive, where + " has no tasks");
  }
}

DurationInterval occupation_duration_bounds(const std::vector<double>& task_quantities,
                                            const std::vector<double>& task_times) {
  detail::require_same_size(task_quantities.size(), task_times.size(),
                            "task quantities vs task times");
  DurationInterval d;
  bool any_positive = false;
  for (std::size_t m = 0; m < task_times.size(); ++m) {
    detail::require(task_times[m] > 0.0, "task times must be > 0");
    detail::require(task_quantities[m] >= 0.0, "task quantities must be >= 0");
    const double t = task_times[m] * task_quantities[m];
    d.lower = std::max(d.lower, t);
    d.upper += t;
    any_positive = any_positive || task_quantities[m] > 0.0;
  }
  detail::require(any_positive, "at least one task quantity must be positive");
  return d;
}

double occupation_duration(const std::vector<double>& task_quantities,
                           const std::vector<double>& task_times, double parallelism) {
  detail::require(parallelism >= 0.0 && parallelism <= 1.0, "parallelism must lie in [0, 1]");
  const auto d = occupation_duration_bounds(task_quantities, task_times);
  return (1.0 - parallelism) * d.upper + parallelism * d.lower;
}

std::vector<double> flatten_task_totals(const SchedulingInstance& inst) {
  inst.validate();
  std::vector<double> totals(inst.task_times.size(), 0.0);
  for (const auto& occ : inst.occupations) {
    for (std::size_t v = 0; v < totals.size(); ++v) {
      totals[v] += occ.task_counts[v] * static_cast<double>(occ.count);
    }
  }
  return totals;
}

double total_task_count(const SchedulingInstance& inst) {
  const auto totals = flatten_task_totals(inst);
  return std::accumulate(totals.begin(), totals.end(), 0.0);
}

DurationInterval cycle_bounds_occupation(const SchedulingInstance& inst) {
  inst.validate();
  DurationInterval d;
  for (const auto& occ : inst.occupations) {
    const double t = occupation_duration(occ.task_counts, inst.task_times, inst.parallelism) *
                     static_cast<double>(occ.count);
    d.lower = std::max(d.lower, t);
    d.upper += t;
  }
  return d;
}

DurationInterval cycle_bounds_task(const SchedulingInstance& inst) {
  return occupation_duration_bounds(flatten_task_totals(inst), inst.task_times);
}

bool check_cycle_dominance(const SchedulingInstance& inst) {
  inst.validate();
  if (inst.parallelism != 0.0) {
    throw InapplicableRegimeError(
        "cycle dominance is only defined for serial occupations (parallelism = 0), got " +
        std::to_string(inst.parallelism));
  }
  const auto occ = cycle_bounds_occupation(inst);
  const auto task = cycle_bounds_task(inst);
  return occ.upper >= task.upper - tolerance_scale(occ.upper, task.upper) &&
         occ.lower >= task.lower - tolerance_scale(occ.lower, task.lower);
}

MatchingInstance random_matching_instance(Rng& rng, const MatchingInstanceLimits& limits) {
  const auto employees = static_cast<std::size_t>(rng.uniform_int(1, limits.max_employees));
  const auto tasks = static_cast<std::size_t>(rng.uniform_int(1, limits.max_tasks));
  const auto skills = static_cast<std::size_t>(rng.uniform_int(1, limits.max_skills));

  MatchingInstance inst;
  for (std::size_t e = 0; e < employees; ++e) {
    std::vector<double> x(skills);
    for (auto& xu : x) xu = rng.uniform(0.0, 2.0);
    inst.employees.push_back(SkillVector::from_totals(std::move(x)));
  }
  std::vector<double> y(tasks), lambda(tasks), a(skills * tasks);
  for (auto& yv : y) yv = rng.uniform(0.0, 2.0);
  for (auto& l : lambda) l = limits.signed_values ? rng.uniform(-1.0, 1.0) : rng.uniform();
  for (auto& e : a) e = rng.uniform();
  inst.occupation_tasks = TaskVector(std::move(y));
  inst.values = TaskValueVector(std::move(lambda));
  inst.matrix = MatchingMatrix(skills, tasks, std::move(a));
  return inst;
}

SchedulingInstance random_scheduling_instance(Rng& rng, const SchedulingInstanceLimits& limits) {
  const auto types = static_cast<std::size_t>(rng.uniform_int(1, limits.max_task_types));
  const auto occupations = static_cast<std::size_t>(
      rng.uniform_int(1, std::min(limits.max_occupations, types)));

  SchedulingInstance inst;
  inst.task_times.resize(types);
  for (auto& w : inst.task_times) w = rng.uniform(0.1, 5.0);
  inst.occupations.resize(occupations);
  for (auto& occ : inst.occupations) {
    occ.task_counts.assign(types, 0.0);
    occ.count = rng.uniform_int(1, limits.max_count);
  }
  for (std::size_t v = 0; v < types; ++v) {
    // The first `occupations` types seed one occupation each so none is empty.
    const std::size_t owner =
        v < occupations ? v : static_cast<std::size_t>(rng.uniform_int(0, occupations - 1));
    inst.occupations[owner].task_counts[v] = static_cast<double>(rng.uniform_int(1, 3));
  }
  return inst;
}

}  // namespace skilltask
