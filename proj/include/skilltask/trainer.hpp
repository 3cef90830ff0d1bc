#pragma once

// Batch fitting of the matching matrix and of the task value vector with a
// single linear layer (no bias, identity activation) trained online: one
// delta-rule step per sample, epochs until the largest step in an epoch falls
// below cfg.tol or cfg.max_periods epochs have run.

#include <cstdint>
#include <utility>
#include <vector>

#include "skilltask/iteration.hpp"

namespace skilltask {

struct MatchingSample {
  SkillVector skills;
  TaskVector tasks;
};

struct MatchingTrainingSet {
  std::vector<MatchingSample> samples;

  std::size_t skills_dim() const { return samples.front().skills.size(); }
  std::size_t tasks_dim() const { return samples.front().tasks.size(); }
  void validate() const;
};

// Target I is the expected income for the task plan y.
struct ValueSample {
  TaskVector tasks;
  double income = 0.0;
};

struct ValueTrainingSet {
  std::vector<ValueSample> samples;

  std::size_t tasks_dim() const { return samples.front().tasks.size(); }
  void validate() const;
};

struct TrainingReport {
  std::size_t epochs_run = 0;
  // Summed loss over the set at the returned parameters.
  double final_loss = 0.0;
  // Summed loss over the set at the end of each epoch.
  std::vector<double> loss_history;
  bool converged = false;
};

// Σ_s ½‖x_s·A − y_s‖².
double matching_set_loss(const MatchingTrainingSet& set, const MatchingMatrix& matrix);
// Σ_s ½(y_s·λ − I_s)².
double value_set_loss(const ValueTrainingSet& set, const TaskValueVector& values);

std::pair<MatchingMatrix, TrainingReport> train_matching_matrix(const MatchingTrainingSet& set,
                                                                const MatchingMatrix& initial,
                                                                const LearningConfig& cfg);

std::pair<TaskValueVector, TrainingReport> train_value_vector(const ValueTrainingSet& set,
                                                              const TaskValueVector& initial,
                                                              const LearningConfig& cfg);

// Seeded starting points with entries uniform in [0, 1].
MatchingMatrix random_matching_matrix(std::size_t skills, std::size_t tasks, std::uint64_t seed);
TaskValueVector random_value_vector(std::size_t tasks, std::uint64_t seed);

// One (x_t, y_t) sample per scenario period.
MatchingTrainingSet matching_set_from_scenario(const Scenario& scenario);
// One (y_t, p_t·Q^E) sample per scenario period.
ValueTrainingSet value_set_from_scenario(const Scenario& scenario);

}  // namespace skilltask
