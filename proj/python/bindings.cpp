#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "skilltask/efficiency.hpp"
#include "skilltask/io.hpp"
#include "skilltask/iteration.hpp"
#include "skilltask/trainer.hpp"

namespace py = pybind11;
using namespace skilltask;
using io::Json;

namespace {

using Rows = std::vector<std::vector<double>>;

SkillVector skills_of(const std::vector<double>& labor, const std::optional<std::vector<double>>& machine) {
  return machine ? SkillVector(labor, *machine) : SkillVector::from_totals(labor);
}

LearningConfig learning_of(const std::string& learning_json) {
  return learning_json.empty() ? LearningConfig{} : io::learning_from_json(Json::parse(learning_json));
}

Json record_json(const PeriodRecord& r) {
  Json j = Json::object();
  j["period"] = r.period;
  j["E_A"] = r.loss_matching;
  j["E_lambda"] = r.loss_value;
  j["income_expected"] = r.income_expected;
  j["income_actual"] = r.income_actual;
  j["cost"] = r.total_cost;
  j["profit_expected"] = r.profit_expected;
  j["profit_actual"] = r.profit_actual;
  j["gap_maxnorm"] = r.gap_max_norm();
  j["output"] = r.output.vec();
  j["tasks"] = r.tasks.vec();
  j["converged"] = r.converged;
  return j;
}

std::string simulate(const std::string& config_json) {
  const auto cfg = io::run_config_from_json(Json::parse(config_json));
  const auto scenario = generate_scenario(cfg.scenario);
  const auto trace = run_until_converged(cfg.initial_state(), scenario, cfg.learning, cfg.cost_model());
  Json j = io::trace_summary(trace, cfg);
  Json rows = Json::array();
  for (const auto& r : trace.records) rows.push_back(record_json(r));
  j["trace"] = std::move(rows);
  return j.dump();
}

std::string generate(const std::string& spec_json) {
  const auto cfg = io::run_config_from_json(Json::parse(spec_json));
  return io::to_json(generate_scenario(cfg.scenario)).dump();
}

std::pair<Rows, std::string> train_matrix(const Rows& skills, const Rows& tasks,
                                          const std::string& learning_json, std::uint64_t seed) {
  detail::require_same_size(skills.size(), tasks.size(), "skill rows vs task rows");
  MatchingTrainingSet set;
  for (std::size_t s = 0; s < skills.size(); ++s) {
    set.samples.push_back({SkillVector::from_totals(skills[s]), TaskVector(tasks[s])});
  }
  set.validate();
  auto [a, report] = train_matching_matrix(
      set, random_matching_matrix(set.skills_dim(), set.tasks_dim(), seed), learning_of(learning_json));
  return {a.to_rows(), io::to_json(report).dump()};
}

std::pair<std::vector<double>, std::string> train_values(const Rows& tasks,
                                                         const std::vector<double>& incomes,
                                                         const std::string& learning_json,
                                                         std::uint64_t seed) {
  detail::require_same_size(tasks.size(), incomes.size(), "task rows vs incomes");
  ValueTrainingSet set;
  for (std::size_t s = 0; s < tasks.size(); ++s) set.samples.push_back({TaskVector(tasks[s]), incomes[s]});
  set.validate();
  auto [lambda, report] =
      train_value_vector(set, random_value_vector(set.tasks_dim(), seed), learning_of(learning_json));
  return {lambda.vec(), io::to_json(report).dump()};
}

std::string matching_values(const std::string& instance_json) {
  const auto inst = io::matching_instance_from_json(Json::parse(instance_json), "instance");
  const auto task = task_level_value(inst);
  const auto job = job_level_value(inst);
  Json j = Json::object();
  j["task_level"] = task.value;
  j["assignment"] = task.assignment;
  j["job_level"] = job.value;
  j["employee"] = job.employee;
  j["dominates"] = check_matching_dominance(inst);
  return j.dump();
}

std::string cycle_bounds(const std::string& instance_json) {
  const auto inst = io::scheduling_instance_from_json(Json::parse(instance_json), "instance");
  const auto occ = cycle_bounds_occupation(inst);
  const auto task = cycle_bounds_task(inst);
  Json j = Json::object();
  j["occupation"] = {occ.lower, occ.upper};
  j["task"] = {task.lower, task.upper};
  j["total_tasks"] = total_task_count(inst);
  if (inst.parallelism == 0.0) j["dominates"] = check_cycle_dominance(inst);
  return j.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Skill-task matching model core";

  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const nlohmann::json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("task_output",
        [](const std::vector<double>& labor, const Rows& matrix,
           const std::optional<std::vector<double>>& machine) {
          return task_output(skills_of(labor, machine), MatchingMatrix::from_rows(matrix)).vec();
        },
        py::arg("skills"), py::arg("matrix"), py::arg("machine") = py::none());
  m.def("expected_income",
        [](const std::vector<double>& values, const std::vector<double>& tasks) {
          return expected_income(TaskValueVector(values), TaskVector(tasks));
        },
        py::arg("values"), py::arg("tasks"));
  m.def("actual_income",
        [](const std::vector<double>& values, const std::vector<double>& output) {
          return actual_income(TaskValueVector(values), TaskOutputVector(output));
        },
        py::arg("values"), py::arg("output"));
  m.def("profit_gap",
        [](const std::vector<double>& values, const std::vector<double>& tasks,
           const std::vector<double>& output) {
          return profit_gap(TaskValueVector(values), TaskVector(tasks), TaskOutputVector(output)).vec();
        },
        py::arg("values"), py::arg("tasks"), py::arg("output"));
  m.def("cost",
        [](const std::vector<double>& labor, const std::vector<double>& machine,
           const std::vector<double>& machine_price, const std::vector<double>& wage,
           const std::optional<std::vector<double>>& fixed_coeff, double interest_rate,
           double depreciation) {
          CostModel model{machine_price, wage,
                          fixed_coeff.value_or(std::vector<double>(labor.size(), 0.0)),
                          interest_rate, depreciation};
          return cost(model, SkillVector(labor, machine));
        },
        py::arg("labor"), py::arg("machine"), py::arg("machine_price"), py::arg("wage"),
        py::arg("fixed_coeff") = py::none(), py::arg("interest_rate") = 0.0,
        py::arg("depreciation") = 1.0);

  m.def("_simulate", &simulate);
  m.def("_generate_scenario", &generate);
  m.def("_train_matrix", &train_matrix);
  m.def("_train_values", &train_values);
  m.def("_matching_values", &matching_values);
  m.def("_cycle_bounds", &cycle_bounds);
}
