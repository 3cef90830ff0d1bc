#pragma once

// File formats used by the command-line tool.
//
// JSON documents are strict: every object rejects keys it does not know, and
// every value is re-validated against the invariants of the type it builds.
// Doubles are written in shortest round-trip form so equal runs produce
// byte-identical files.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "skilltask/efficiency.hpp"
#include "skilltask/iteration.hpp"
#include "skilltask/scenario.hpp"
#include "skilltask/trainer.hpp"

namespace skilltask::io {

using Json = nlohmann::ordered_json;

// Scenario, learning, cost, and initial firm parameters for one simulation.
struct RunConfig {
  ScenarioSpec scenario;
  LearningConfig learning;
  std::optional<CostModel> cost;
  std::optional<MatchingMatrix> initial_matrix;
  std::optional<TaskValueVector> initial_values;
  std::optional<std::string> out;

  void validate() const;
  CostModel cost_model() const;
  // Missing parameters are drawn uniform in [0, 1] from the scenario seed.
  FirmState initial_state() const;
};

std::string format_double(double v);

Json to_json(const SkillVector& s);
Json to_json(const MatchingMatrix& m);
Json to_json(const ScenarioSpec& spec);
Json to_json(const Scenario& scenario);
Json to_json(const LearningConfig& cfg);
Json to_json(const CostModel& cost);
Json to_json(const RunConfig& cfg);
Json to_json(const TrainingReport& report);
Json to_json(const MatchingInstance& inst);
Json to_json(const SchedulingInstance& inst);

SkillVector skill_vector_from_json(const Json& j, const std::string& where);
MatchingMatrix matrix_from_json(const Json& j, const std::string& where);
ScenarioSpec scenario_spec_from_json(const Json& j);
// Materialized scenario; base_tasks must equal base_skills·ideal_matrix exactly.
Scenario scenario_from_json(const Json& j);
LearningConfig learning_from_json(const Json& j);
CostModel cost_from_json(const Json& j);
// Accepts either a full run config or a bare scenario spec.
RunConfig run_config_from_json(const Json& j);
MatchingInstance matching_instance_from_json(const Json& j, const std::string& where);
SchedulingInstance scheduling_instance_from_json(const Json& j, const std::string& where);

// A single instance object, an array of them, or {"instances": [...]}.
std::vector<MatchingInstance> matching_instances_from_json(const Json& j);
std::vector<SchedulingInstance> scheduling_instances_from_json(const Json& j);

// Throws IoError if unreadable and ValidationError if not valid JSON.
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string dump(const Json& j);

// Header `x_1..x_i,y_1..y_j`.
MatchingTrainingSet read_matching_dataset(std::istream& in);
// Header `y_1..y_j,I`.
ValueTrainingSet read_value_dataset(std::istream& in);

inline constexpr const char* kTraceHeader =
    "period,E_A,E_lambda,income_expected,income_actual,cost,profit_expected,profit_actual,"
    "gap_maxnorm";

void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace);
Json trace_summary(const ConvergenceTrace& trace, const RunConfig& cfg);

}  // namespace skilltask::io
