#pragma once

// Period-by-period recalibration of the matching matrix and task value vector.
//
// Each period the firm produces ŷ = x·A, books the period, and, while some
// task still shows a profit gap of at least `tol`, takes one delta-rule step
// on A (loss ½Σ(ŷ−y)²) and on λ (loss ½(Î−I)²). Both steps use the same
// pre-update ŷ. Matrix entries are projected back onto a ≥ 0 after each step.

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "skilltask/production.hpp"
#include "skilltask/scenario.hpp"

namespace skilltask {

enum class MatrixSignMode {
  descent,        // a ← a − θ·(ŷ_v − y_v)·x_u
  paper_literal,  // a ← a + θ·(ŷ_v − y_v)·x_u, increases the loss
};

enum class ValueUpdateMode {
  exact_gradient,  // λ_v ← λ_v − θ·(Î − I)·ŷ_v
  paper_delta,     // λ_v ← λ_v − θ·(ŷ_v − y_v)
};

enum class ValueSchedule {
  concurrent,      // λ recalibrated every period alongside A
  after_matching,  // λ held until max|ŷ − y| < tol
};

struct LearningConfig {
  double lr_matrix = 0.1;
  double lr_value = 0.1;
  MatrixSignMode matrix_sign_mode = MatrixSignMode::descent;
  ValueUpdateMode value_update_mode = ValueUpdateMode::exact_gradient;
  ValueSchedule value_schedule = ValueSchedule::concurrent;
  double tol = 1e-8;
  std::size_t max_periods = 10000;

  void validate() const;
};

std::string_view to_string(MatrixSignMode m);
std::string_view to_string(ValueUpdateMode m);
std::string_view to_string(ValueSchedule m);
MatrixSignMode parse_matrix_sign_mode(std::string_view s);
ValueUpdateMode parse_value_update_mode(std::string_view s);
ValueSchedule parse_value_schedule(std::string_view s);

struct FirmState {
  std::size_t period = 0;
  MatchingMatrix matrix;
  TaskValueVector values;
};

struct PeriodRecord {
  std::size_t period = 0;
  TaskVector tasks;
  SkillVector skills;
  TaskOutputVector output;
  double price = 0.0;
  double income_expected = 0.0;
  double income_actual = 0.0;
  double total_cost = 0.0;
  double profit_expected = 0.0;
  double profit_actual = 0.0;
  ProfitGapVector gap;
  double loss_matching = 0.0;
  double loss_value = 0.0;
  // Gap was below tol at period start; parameters were left unchanged.
  bool converged = false;

  double gap_max_norm() const { return max_abs(gap.values()); }
};

struct ConvergenceTrace {
  std::vector<PeriodRecord> records;
  bool converged = false;
  FirmState final_state;

  // Periods in which parameters were recalibrated.
  std::size_t updates() const { return converged ? records.size() - 1 : records.size(); }
};

double loss_matching(const TaskOutputVector& output, const TaskVector& tasks);
double loss_value(double income_actual, double income_expected);

MatchingMatrix matrix_update(const FirmState& state, const SkillVector& skills,
                             const TaskVector& tasks, const TaskOutputVector& output,
                             const LearningConfig& cfg);

TaskValueVector value_update(const FirmState& state, const TaskVector& tasks,
                             const TaskOutputVector& output, const LearningConfig& cfg);

// Books period `state.period` and recalibrates if the gap has not closed.
// The returned state always has period + 1.
std::pair<FirmState, PeriodRecord> iterate_period(const FirmState& state, const TaskVector& tasks,
                                                  const SkillVector& skills, double price,
                                                  const CostModel& cost_model,
                                                  const LearningConfig& cfg);

// Drives iterate_period with the scenario's period inputs until the gap
// closes or cfg.max_periods is reached. Periods past the scenario horizon
// reuse its last period's inputs.
ConvergenceTrace run_until_converged(const FirmState& initial, const Scenario& scenario,
                                     const LearningConfig& cfg, const CostModel& cost_model);
ConvergenceTrace run_until_converged(const FirmState& initial, const Scenario& scenario,
                                     const LearningConfig& cfg);

}  // namespace skilltask
