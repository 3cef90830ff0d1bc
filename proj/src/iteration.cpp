#include "skilltask/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace skilltask {

void LearningConfig::validate() const {
  detail::require(lr_matrix > 0.0 && lr_matrix < 1.0, "lr_matrix must lie in (0, 1)");
  detail::require(lr_value > 0.0 && lr_value < 1.0, "lr_value must lie in (0, 1)");
  detail::require(std::isfinite(tol) && tol > 0.0, "tol must be > 0");
  detail::require(max_periods >= 1, "max_periods must be >= 1");
}

std::string_view to_string(MatrixSignMode m) {
  return m == MatrixSignMode::descent ? "descent" : "paper-literal";
}

std::string_view to_string(ValueUpdateMode m) {
  return m == ValueUpdateMode::exact_gradient ? "exact-gradient" : "paper-delta";
}

std::string_view to_string(ValueSchedule m) {
  return m == ValueSchedule::concurrent ? "concurrent" : "after-matching";
}

MatrixSignMode parse_matrix_sign_mode(std::string_view s) {
  if (s == "descent") return MatrixSignMode::descent;
  if (s == "paper-literal") return MatrixSignMode::paper_literal;
  throw ValidationError("unknown matrix sign mode '" + std::string(s) +
                        "' (expected descent or paper-literal)");
}

ValueUpdateMode parse_value_update_mode(std::string_view s) {
  if (s == "exact-gradient") return ValueUpdateMode::exact_gradient;
  if (s == "paper-delta") return ValueUpdateMode::paper_delta;
  throw ValidationError("unknown value update mode '" + std::string(s) +
                        "' (expected exact-gradient or paper-delta)");
}

ValueSchedule parse_value_schedule(std::string_view s) {
  if (s == "concurrent") return ValueSchedule::concurrent;
  if (s == "after-matching") return ValueSchedule::after_matching;
  throw ValidationError("unknown value schedule '" + std::string(s) +
                        "' (expected concurrent or after-matching)");
}

double loss_matching(const TaskOutputVector& output, const TaskVector& tasks) {
  detail::require_same_size(output.size(), tasks.size(), "task outputs vs tasks");
  double sum = 0.0;
  for (std::size_t v = 0; v < tasks.size(); ++v) {
    const double e = output[v] - tasks[v];
    sum += e * e;
  }
  return 0.5 * sum;
}

double loss_value(double income_actual, double income_expected) {
  const double e = income_actual - income_expected;
  return 0.5 * e * e;
}

MatchingMatrix matrix_update(const FirmState& state, const SkillVector& skills,
                             const TaskVector& tasks, const TaskOutputVector& output,
                             const LearningConfig& cfg) {
  const auto& a = state.matrix;
  detail::require_same_size(skills.size(), a.rows(), "skills vs matching matrix rows");
  detail::require_same_size(tasks.size(), a.cols(), "tasks vs matching matrix cols");
  detail::require_same_size(output.size(), a.cols(), "task outputs vs matching matrix cols");

  const double step = cfg.matrix_sign_mode == MatrixSignMode::descent ? -cfg.lr_matrix
                                                                      : cfg.lr_matrix;
  MatchingMatrix next = a;
  for (std::size_t v = 0; v < a.cols(); ++v) {
    const double residual = output[v] - tasks[v];
    if (residual == 0.0) continue;
    for (std::size_t u = 0; u < a.rows(); ++u) {
      next.set_clamped(u, v, a(u, v) + step * residual * skills.total(u));
    }
  }
  return next;
}

TaskValueVector value_update(const FirmState& state, const TaskVector& tasks,
                             const TaskOutputVector& output, const LearningConfig& cfg) {
  const auto& lambda = state.values;
  detail::require_same_size(tasks.size(), lambda.size(), "tasks vs task values");
  detail::require_same_size(output.size(), lambda.size(), "task outputs vs task values");

  std::vector<double> next(lambda.vec());
  if (cfg.value_update_mode == ValueUpdateMode::exact_gradient) {
    const double income_error = actual_income(lambda, output) - expected_income(lambda, tasks);
    for (std::size_t v = 0; v < next.size(); ++v) next[v] -= cfg.lr_value * income_error * output[v];
  } else {
    for (std::size_t v = 0; v < next.size(); ++v) next[v] -= cfg.lr_value * (output[v] - tasks[v]);
  }
  return TaskValueVector(std::move(next));
}

std::pair<FirmState, PeriodRecord> iterate_period(const FirmState& state, const TaskVector& tasks,
                                                  const SkillVector& skills, double price,
                                                  const CostModel& cost_model,
                                                  const LearningConfig& cfg) {
  cfg.validate();
  if (state.period >= cfg.max_periods) {
    throw ValidationError("period " + std::to_string(state.period) + " exceeds max_periods " +
                          std::to_string(cfg.max_periods));
  }
  detail::require_same_size(tasks.size(), state.values.size(), "tasks vs task values");

  PeriodRecord rec;
  rec.period = state.period;
  rec.tasks = tasks;
  rec.skills = skills;
  rec.price = price;
  rec.output = task_output(skills, state.matrix);
  rec.income_expected = expected_income(state.values, tasks);
  rec.income_actual = actual_income(state.values, rec.output);
  rec.total_cost = cost(cost_model, skills);
  // Planned quantity is the one whose value at price p equals the expected income.
  const auto pi = profits(price, rec.income_expected / price, rec.income_actual, rec.total_cost);
  rec.profit_expected = pi.expected;
  rec.profit_actual = pi.actual;
  rec.gap = profit_gap(state.values, tasks, rec.output);
  rec.loss_matching = loss_matching(rec.output, tasks);
  rec.loss_value = loss_value(rec.income_actual, rec.income_expected);

  FirmState next = state;
  next.period = state.period + 1;
  if (rec.gap_max_norm() < cfg.tol) {
    rec.converged = true;
    return {std::move(next), std::move(rec)};
  }

  next.matrix = matrix_update(state, skills, tasks, rec.output, cfg);
  bool matching_settled = true;
  for (std::size_t v = 0; v < tasks.size(); ++v) {
    if (std::abs(rec.output[v] - tasks[v]) >= cfg.tol) matching_settled = false;
  }
  if (cfg.value_schedule == ValueSchedule::concurrent || matching_settled) {
    next.values = value_update(state, tasks, rec.output, cfg);
  }
  return {std::move(next), std::move(rec)};
}

ConvergenceTrace run_until_converged(const FirmState& initial, const Scenario& scenario,
                                     const LearningConfig& cfg, const CostModel& cost_model) {
  cfg.validate();
  cost_model.validate(scenario.spec().skills_dim);
  detail::require_same_size(initial.matrix.rows(), scenario.spec().skills_dim,
                            "initial matrix rows vs skills_dim");
  detail::require_same_size(initial.matrix.cols(), scenario.spec().tasks_dim,
                            "initial matrix cols vs tasks_dim");
  detail::require_same_size(initial.values.size(), scenario.spec().tasks_dim,
                            "initial values vs tasks_dim");

  ConvergenceTrace trace;
  FirmState state = initial;
  while (state.period < cfg.max_periods) {
    const std::size_t t = std::min(state.period, scenario.periods() - 1);
    auto in = scenario.period_inputs(t);
    auto [next, rec] = iterate_period(state, in.tasks, in.skills, in.price, cost_model, cfg);
    const bool done = rec.converged;
    trace.records.push_back(std::move(rec));
    state = std::move(next);
    if (done) {
      trace.converged = true;
      break;
    }
  }
  trace.final_state = std::move(state);
  return trace;
}

ConvergenceTrace run_until_converged(const FirmState& initial, const Scenario& scenario,
                                     const LearningConfig& cfg) {
  return run_until_converged(initial, scenario, cfg, CostModel::free(scenario.spec().skills_dim));
}

}  // namespace skilltask
