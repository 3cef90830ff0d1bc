#include "skilltask/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace skilltask {

void MatchingTrainingSet::validate() const {
  detail::require(!samples.empty(), "matching training set is empty");
  for (std::size_t s = 0; s < samples.size(); ++s) {
    if (samples[s].skills.size() != skills_dim() || samples[s].tasks.size() != tasks_dim()) {
      throw DimensionError("matching sample " + std::to_string(s) +
                           " has dimensions inconsistent with sample 0");
    }
  }
}

void ValueTrainingSet::validate() const {
  detail::require(!samples.empty(), "value training set is empty");
  for (std::size_t s = 0; s < samples.size(); ++s) {
    if (samples[s].tasks.size() != tasks_dim()) {
      throw DimensionError("value sample " + std::to_string(s) +
                           " has dimensions inconsistent with sample 0");
    }
    detail::require(std::isfinite(samples[s].income),
                    "value sample " + std::to_string(s) + " has a non-finite income");
  }
}

double matching_set_loss(const MatchingTrainingSet& set, const MatchingMatrix& matrix) {
  double sum = 0.0;
  for (const auto& s : set.samples) sum += loss_matching(task_output(s.skills, matrix), s.tasks);
  return sum;
}

double value_set_loss(const ValueTrainingSet& set, const TaskValueVector& values) {
  double sum = 0.0;
  for (const auto& s : set.samples) {
    sum += loss_value(expected_income(values, s.tasks), s.income);
  }
  return sum;
}

std::pair<MatchingMatrix, TrainingReport> train_matching_matrix(const MatchingTrainingSet& set,
                                                                const MatchingMatrix& initial,
                                                                const LearningConfig& cfg) {
  cfg.validate();
  set.validate();
  detail::require_same_size(initial.rows(), set.skills_dim(), "initial matrix rows vs samples");
  detail::require_same_size(initial.cols(), set.tasks_dim(), "initial matrix cols vs samples");

  LearningConfig step_cfg = cfg;
  step_cfg.matrix_sign_mode = MatrixSignMode::descent;

  TrainingReport report;
  FirmState state{0, initial, TaskValueVector::zeros(initial.cols())};
  while (report.epochs_run < cfg.max_periods) {
    double largest_delta = 0.0;
    for (const auto& s : set.samples) {
      const auto out = task_output(s.skills, state.matrix);
      auto next = matrix_update(state, s.skills, s.tasks, out, step_cfg);
      for (std::size_t k = 0; k < next.entries().size(); ++k) {
        largest_delta =
            std::max(largest_delta, std::abs(next.entries()[k] - state.matrix.entries()[k]));
      }
      state.matrix = std::move(next);
    }
    ++report.epochs_run;
    report.loss_history.push_back(matching_set_loss(set, state.matrix));
    if (largest_delta < cfg.tol) {
      report.converged = true;
      break;
    }
  }
  report.final_loss = report.loss_history.back();
  return {std::move(state.matrix), std::move(report)};
}

std::pair<TaskValueVector, TrainingReport> train_value_vector(const ValueTrainingSet& set,
                                                              const TaskValueVector& initial,
                                                              const LearningConfig& cfg) {
  cfg.validate();
  set.validate();
  detail::require_same_size(initial.size(), set.tasks_dim(), "initial values vs samples");

  TrainingReport report;
  std::vector<double> lambda = initial.vec();
  while (report.epochs_run < cfg.max_periods) {
    double largest_delta = 0.0;
    for (const auto& s : set.samples) {
      double predicted = 0.0;
      for (std::size_t v = 0; v < lambda.size(); ++v) predicted += s.tasks[v] * lambda[v];
      const double error = predicted - s.income;
      for (std::size_t v = 0; v < lambda.size(); ++v) {
        const double delta = cfg.lr_value * error * s.tasks[v];
        lambda[v] -= delta;
        largest_delta = std::max(largest_delta, std::abs(delta));
      }
    }
    ++report.epochs_run;
    report.loss_history.push_back(value_set_loss(set, TaskValueVector(lambda)));
    if (largest_delta < cfg.tol) {
      report.converged = true;
      break;
    }
  }
  report.final_loss = report.loss_history.back();
  return {TaskValueVector(std::move(lambda)), std::move(report)};
}

MatchingMatrix random_matching_matrix(std::size_t skills, std::size_t tasks, std::uint64_t seed) {
  Rng rng = Rng::keyed(seed, streams::init, 0);
  std::vector<double> entries(skills * tasks);
  for (auto& a : entries) a = rng.uniform();
  return MatchingMatrix(skills, tasks, std::move(entries));
}

TaskValueVector random_value_vector(std::size_t tasks, std::uint64_t seed) {
  Rng rng = Rng::keyed(seed, streams::init, 1);
  std::vector<double> values(tasks);
  for (auto& v : values) v = rng.uniform();
  return TaskValueVector(std::move(values));
}

MatchingTrainingSet matching_set_from_scenario(const Scenario& scenario) {
  MatchingTrainingSet set;
  for (std::size_t t = 0; t < scenario.periods(); ++t) {
    auto in = scenario.period_inputs(t);
    set.samples.push_back({std::move(in.skills), std::move(in.tasks)});
  }
  return set;
}

ValueTrainingSet value_set_from_scenario(const Scenario& scenario) {
  ValueTrainingSet set;
  for (std::size_t t = 0; t < scenario.periods(); ++t) {
    auto in = scenario.period_inputs(t);
    set.samples.push_back({std::move(in.tasks), scenario.expected_income_at(t)});
  }
  return set;
}

}  // namespace skilltask
