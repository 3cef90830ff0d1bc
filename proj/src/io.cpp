#include "skilltask/io.hpp"

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

namespace skilltask::io {
namespace {

void reject_unknown_keys(const Json& j, std::initializer_list<std::string_view> allowed,
                         const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ValidationError(where + ": unknown key '" + key + "'");
  }
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ValidationError(where + ": missing required key '" + key + "'");
  return j.at(key);
}

std::string path_of(const std::string& where, const char* key) {
  return where.empty() ? std::string(key) : where + "." + key;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ValidationError(where + ": expected a number");
  return j.get<double>();
}

std::size_t positive_or_zero_int(const Json& j, const std::string& where) {
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  if (j.is_number_integer() && j.get<long long>() >= 0) return j.get<std::size_t>();
  throw ValidationError(where + ": expected a nonnegative integer");
}

std::vector<double> numbers(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(number(j[k], where + "[" + std::to_string(k) + "]"));
  }
  return out;
}

// Rethrows construction failures with the JSON path attached.
template <class F>
auto at_path(const std::string& where, F&& build) -> decltype(build()) {
  try {
    return build();
  } catch (const DimensionError& e) {
    throw DimensionError(where + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

Json numbers_json(std::span<const double> v) {
  Json out = Json::array();
  for (double x : v) out.push_back(x);
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && s[start] == ' ') ++start;
  return s.substr(start);
}

double parse_cell(const std::string& cell, std::size_t line, std::size_t column) {
  const std::string t = trim(cell);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ValidationError("dataset row at line " + std::to_string(line) + ", column " +
                          std::to_string(column + 1) + ": '" + t + "' is not a number");
  }
  return v;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (table.header.empty()) {
      for (auto& h : split_csv_line(line)) table.header.push_back(trim(h));
      continue;
    }
    const auto cells = split_csv_line(line);
    if (cells.size() != table.header.size()) {
      throw ValidationError("dataset row at line " + std::to_string(line_no) + " has " +
                            std::to_string(cells.size()) + " fields, expected " +
                            std::to_string(table.header.size()));
    }
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) row[c] = parse_cell(cells[c], line_no, c);
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw ValidationError("dataset is empty (no header)");
  if (table.rows.empty()) throw ValidationError("dataset has no samples");
  return table;
}

// Number of leading columns named prefix_1, prefix_2, ... starting at `from`.
std::size_t count_prefixed(const std::vector<std::string>& header, std::size_t from,
                           const std::string& prefix) {
  std::size_t n = 0;
  while (from + n < header.size() && header[from + n] == prefix + std::to_string(n + 1)) ++n;
  return n;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void RunConfig::validate() const {
  scenario.validate();
  learning.validate();
  if (cost) cost->validate(scenario.skills_dim);
  if (initial_matrix) {
    detail::require_same_size(initial_matrix->rows(), scenario.skills_dim,
                              "initial.matrix rows vs skills_dim");
    detail::require_same_size(initial_matrix->cols(), scenario.tasks_dim,
                              "initial.matrix cols vs tasks_dim");
  }
  if (initial_values) {
    detail::require_same_size(initial_values->size(), scenario.tasks_dim,
                              "initial.values vs tasks_dim");
  }
}

CostModel RunConfig::cost_model() const {
  return cost ? *cost : CostModel::free(scenario.skills_dim);
}

FirmState RunConfig::initial_state() const {
  FirmState s;
  s.matrix = initial_matrix ? *initial_matrix
                            : random_matching_matrix(scenario.skills_dim, scenario.tasks_dim,
                                                     scenario.seed);
  s.values = initial_values ? *initial_values
                            : random_value_vector(scenario.tasks_dim, scenario.seed);
  return s;
}

Json to_json(const SkillVector& s) {
  Json j = Json::object();
  j["labor"] = numbers_json(s.labor());
  j["machine"] = numbers_json(s.machine());
  return j;
}

Json to_json(const MatchingMatrix& m) {
  Json j = Json::array();
  for (const auto& row : m.to_rows()) j.push_back(numbers_json(row));
  return j;
}

Json to_json(const ScenarioSpec& spec) {
  Json j = Json::object();
  j["skills_dim"] = spec.skills_dim;
  j["tasks_dim"] = spec.tasks_dim;
  j["periods"] = spec.periods;
  if (spec.price.size() == 1) {
    j["price"] = spec.price.front();
  } else {
    j["price"] = numbers_json(spec.price);
  }
  j["expected_quantity"] = spec.expected_quantity;
  j["shock_sigma"] = spec.shock_sigma;
  j["seed"] = spec.seed;
  if (spec.ideal_matrix) j["ideal_matrix"] = to_json(*spec.ideal_matrix);
  if (spec.base_skills) j["base_skills"] = to_json(*spec.base_skills);
  if (!spec.skill_path.empty()) {
    Json path = Json::array();
    for (const auto& s : spec.skill_path) path.push_back(to_json(s));
    j["skill_path"] = std::move(path);
  }
  return j;
}

Json to_json(const Scenario& scenario) {
  Json j = Json::object();
  j["spec"] = to_json(scenario.spec());
  j["ideal_matrix"] = to_json(scenario.ideal());
  j["base_skills"] = to_json(scenario.base_skills());
  j["base_tasks"] = numbers_json(scenario.base_tasks().values());
  return j;
}

Json to_json(const LearningConfig& cfg) {
  Json j = Json::object();
  j["lr_matrix"] = cfg.lr_matrix;
  j["lr_value"] = cfg.lr_value;
  j["matrix_sign_mode"] = std::string(to_string(cfg.matrix_sign_mode));
  j["value_update_mode"] = std::string(to_string(cfg.value_update_mode));
  j["value_schedule"] = std::string(to_string(cfg.value_schedule));
  j["tol"] = cfg.tol;
  j["max_periods"] = cfg.max_periods;
  return j;
}

Json to_json(const CostModel& cost) {
  Json j = Json::object();
  j["machine_price"] = numbers_json(cost.machine_price);
  j["wage"] = numbers_json(cost.wage);
  j["fixed_coeff"] = numbers_json(cost.fixed_coeff);
  j["interest_rate"] = cost.interest_rate;
  j["depreciation"] = cost.depreciation;
  return j;
}

Json to_json(const RunConfig& cfg) {
  Json j = Json::object();
  j["scenario"] = to_json(cfg.scenario);
  j["learning"] = to_json(cfg.learning);
  if (cfg.cost) j["cost"] = to_json(*cfg.cost);
  if (cfg.initial_matrix || cfg.initial_values) {
    Json init = Json::object();
    if (cfg.initial_matrix) init["matrix"] = to_json(*cfg.initial_matrix);
    if (cfg.initial_values) init["values"] = numbers_json(cfg.initial_values->values());
    j["initial"] = std::move(init);
  }
  if (cfg.out) j["out"] = *cfg.out;
  return j;
}

Json to_json(const TrainingReport& report) {
  Json j = Json::object();
  j["epochs_run"] = report.epochs_run;
  j["final_loss"] = report.final_loss;
  j["converged"] = report.converged;
  j["loss_history"] = numbers_json(report.loss_history);
  return j;
}

Json to_json(const MatchingInstance& inst) {
  Json j = Json::object();
  Json employees = Json::array();
  for (const auto& e : inst.employees) employees.push_back(to_json(e));
  j["employees"] = std::move(employees);
  j["tasks"] = numbers_json(inst.occupation_tasks.values());
  j["matrix"] = to_json(inst.matrix);
  j["values"] = numbers_json(inst.values.values());
  return j;
}

Json to_json(const SchedulingInstance& inst) {
  Json j = Json::object();
  Json occupations = Json::array();
  for (const auto& occ : inst.occupations) {
    Json o = Json::object();
    o["tasks"] = numbers_json(occ.task_counts);
    o["count"] = occ.count;
    occupations.push_back(std::move(o));
  }
  j["occupations"] = std::move(occupations);
  j["task_times"] = numbers_json(inst.task_times);
  j["parallelism"] = inst.parallelism;
  return j;
}

SkillVector skill_vector_from_json(const Json& j, const std::string& where) {
  if (j.is_array()) {
    return at_path(where, [&] { return SkillVector::from_totals(numbers(j, where)); });
  }
  reject_unknown_keys(j, {"labor", "machine"}, where);
  auto labor = numbers(field(j, "labor", where), path_of(where, "labor"));
  std::vector<double> machine = j.contains("machine")
                                    ? numbers(j.at("machine"), path_of(where, "machine"))
                                    : std::vector<double>(labor.size(), 0.0);
  return at_path(where, [&] { return SkillVector(std::move(labor), std::move(machine)); });
}

MatchingMatrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": expected an array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t u = 0; u < j.size(); ++u) {
    rows.push_back(numbers(j[u], where + "[" + std::to_string(u) + "]"));
  }
  return at_path(where, [&] { return MatchingMatrix::from_rows(rows); });
}

ScenarioSpec scenario_spec_from_json(const Json& j) {
  const std::string where = "scenario";
  reject_unknown_keys(j,
                      {"skills_dim", "tasks_dim", "periods", "price", "expected_quantity",
                       "shock_sigma", "seed", "ideal_matrix", "base_skills", "skill_path"},
                      where);
  ScenarioSpec spec;
  spec.skills_dim = positive_or_zero_int(field(j, "skills_dim", where), "scenario.skills_dim");
  spec.tasks_dim = positive_or_zero_int(field(j, "tasks_dim", where), "scenario.tasks_dim");
  if (j.contains("periods")) spec.periods = positive_or_zero_int(j["periods"], "scenario.periods");
  if (j.contains("price")) {
    spec.price = j["price"].is_array() ? numbers(j["price"], "scenario.price")
                                       : std::vector<double>{number(j["price"], "scenario.price")};
  }
  if (j.contains("expected_quantity")) {
    spec.expected_quantity = number(j["expected_quantity"], "scenario.expected_quantity");
  }
  if (j.contains("shock_sigma")) spec.shock_sigma = number(j["shock_sigma"], "scenario.shock_sigma");
  if (j.contains("seed")) {
    const auto& s = j["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      throw ValidationError("scenario.seed: expected a nonnegative integer");
    }
    spec.seed = s.get<std::uint64_t>();
  }
  if (j.contains("ideal_matrix")) {
    spec.ideal_matrix = matrix_from_json(j["ideal_matrix"], "scenario.ideal_matrix");
  }
  if (j.contains("base_skills")) {
    spec.base_skills = skill_vector_from_json(j["base_skills"], "scenario.base_skills");
  }
  if (j.contains("skill_path")) {
    const auto& p = j["skill_path"];
    if (!p.is_array()) throw ValidationError("scenario.skill_path: expected an array");
    for (std::size_t t = 0; t < p.size(); ++t) {
      spec.skill_path.push_back(
          skill_vector_from_json(p[t], "scenario.skill_path[" + std::to_string(t) + "]"));
    }
  }
  at_path(where, [&] {
    spec.validate();
    return 0;
  });
  return spec;
}

Scenario scenario_from_json(const Json& j) {
  reject_unknown_keys(j, {"spec", "ideal_matrix", "base_skills", "base_tasks"}, "scenario file");
  auto spec = scenario_spec_from_json(field(j, "spec", "scenario file"));
  auto ideal = matrix_from_json(field(j, "ideal_matrix", "scenario file"), "ideal_matrix");
  auto skills = skill_vector_from_json(field(j, "base_skills", "scenario file"), "base_skills");
  const auto tasks = numbers(field(j, "base_tasks", "scenario file"), "base_tasks");
  Scenario scenario = at_path("scenario file", [&] {
    return Scenario(std::move(spec), std::move(ideal), std::move(skills));
  });
  if (tasks != scenario.base_tasks().vec()) {
    throw ValidationError("base_tasks: does not equal base_skills x ideal_matrix");
  }
  return scenario;
}

LearningConfig learning_from_json(const Json& j) {
  const std::string where = "learning";
  reject_unknown_keys(j,
                      {"lr_matrix", "lr_value", "matrix_sign_mode", "value_update_mode",
                       "value_schedule", "tol", "max_periods"},
                      where);
  LearningConfig cfg;
  if (j.contains("lr_matrix")) cfg.lr_matrix = number(j["lr_matrix"], "learning.lr_matrix");
  if (j.contains("lr_value")) cfg.lr_value = number(j["lr_value"], "learning.lr_value");
  auto text = [&](const char* key) {
    if (!j[key].is_string()) throw ValidationError(path_of(where, key) + ": expected a string");
    return j[key].get<std::string>();
  };
  if (j.contains("matrix_sign_mode")) {
    cfg.matrix_sign_mode = parse_matrix_sign_mode(text("matrix_sign_mode"));
  }
  if (j.contains("value_update_mode")) {
    cfg.value_update_mode = parse_value_update_mode(text("value_update_mode"));
  }
  if (j.contains("value_schedule")) cfg.value_schedule = parse_value_schedule(text("value_schedule"));
  if (j.contains("tol")) cfg.tol = number(j["tol"], "learning.tol");
  if (j.contains("max_periods")) {
    cfg.max_periods = positive_or_zero_int(j["max_periods"], "learning.max_periods");
  }
  at_path(where, [&] {
    cfg.validate();
    return 0;
  });
  return cfg;
}

CostModel cost_from_json(const Json& j) {
  const std::string where = "cost";
  reject_unknown_keys(j, {"machine_price", "wage", "fixed_coeff", "interest_rate", "depreciation"},
                      where);
  CostModel c;
  c.machine_price = numbers(field(j, "machine_price", where), "cost.machine_price");
  c.wage = numbers(field(j, "wage", where), "cost.wage");
  c.fixed_coeff = j.contains("fixed_coeff")
                      ? numbers(j["fixed_coeff"], "cost.fixed_coeff")
                      : std::vector<double>(c.machine_price.size(), 0.0);
  if (j.contains("interest_rate")) c.interest_rate = number(j["interest_rate"], "cost.interest_rate");
  if (j.contains("depreciation")) c.depreciation = number(j["depreciation"], "cost.depreciation");
  return c;
}

RunConfig run_config_from_json(const Json& j) {
  if (j.is_object() && !j.contains("scenario")) {
    RunConfig cfg;
    cfg.scenario = scenario_spec_from_json(j);
    return cfg;
  }
  reject_unknown_keys(j, {"scenario", "learning", "cost", "initial", "out"}, "config");
  RunConfig cfg;
  cfg.scenario = scenario_spec_from_json(j["scenario"]);
  if (j.contains("learning")) cfg.learning = learning_from_json(j["learning"]);
  if (j.contains("cost")) cfg.cost = cost_from_json(j["cost"]);
  if (j.contains("initial")) {
    const auto& init = j["initial"];
    reject_unknown_keys(init, {"matrix", "values"}, "initial");
    if (init.contains("matrix")) cfg.initial_matrix = matrix_from_json(init["matrix"], "initial.matrix");
    if (init.contains("values")) {
      auto v = numbers(init["values"], "initial.values");
      cfg.initial_values = at_path("initial.values", [&] { return TaskValueVector(std::move(v)); });
    }
  }
  if (j.contains("out")) {
    if (!j["out"].is_string()) throw ValidationError("out: expected a string");
    cfg.out = j["out"].get<std::string>();
  }
  at_path("config", [&] {
    cfg.validate();
    return 0;
  });
  return cfg;
}

MatchingInstance matching_instance_from_json(const Json& j, const std::string& where) {
  reject_unknown_keys(j, {"employees", "tasks", "matrix", "values"}, where);
  MatchingInstance inst;
  const auto& employees = field(j, "employees", where);
  if (!employees.is_array()) throw ValidationError(where + ".employees: expected an array");
  for (std::size_t e = 0; e < employees.size(); ++e) {
    inst.employees.push_back(
        skill_vector_from_json(employees[e], where + ".employees[" + std::to_string(e) + "]"));
  }
  auto tasks = numbers(field(j, "tasks", where), path_of(where, "tasks"));
  auto values = numbers(field(j, "values", where), path_of(where, "values"));
  inst.matrix = matrix_from_json(field(j, "matrix", where), path_of(where, "matrix"));
  at_path(where, [&] {
    inst.occupation_tasks = TaskVector(std::move(tasks));
    inst.values = TaskValueVector(std::move(values));
    inst.validate();
    return 0;
  });
  return inst;
}

SchedulingInstance scheduling_instance_from_json(const Json& j, const std::string& where) {
  reject_unknown_keys(j, {"occupations", "task_times", "parallelism"}, where);
  SchedulingInstance inst;
  const auto& occupations = field(j, "occupations", where);
  if (!occupations.is_array()) throw ValidationError(where + ".occupations: expected an array");
  for (std::size_t k = 0; k < occupations.size(); ++k) {
    const std::string w = where + ".occupations[" + std::to_string(k) + "]";
    reject_unknown_keys(occupations[k], {"tasks", "count"}, w);
    Occupation occ;
    occ.task_counts = numbers(field(occupations[k], "tasks", w), w + ".tasks");
    if (occupations[k].contains("count")) {
      occ.count = positive_or_zero_int(occupations[k]["count"], w + ".count");
    }
    inst.occupations.push_back(std::move(occ));
  }
  inst.task_times = numbers(field(j, "task_times", where), path_of(where, "task_times"));
  if (j.contains("parallelism")) inst.parallelism = number(j["parallelism"], where + ".parallelism");
  at_path(where, [&] {
    inst.validate();
    return 0;
  });
  return inst;
}

namespace {

template <class Parse>
auto instances_from_json(const Json& j, Parse parse) {
  const Json* list = &j;
  if (j.is_object() && j.contains("instances")) {
    reject_unknown_keys(j, {"instances"}, "instances file");
    list = &j.at("instances");
  }
  std::vector<decltype(parse(j, std::string()))> out;
  if (list->is_array()) {
    for (std::size_t k = 0; k < list->size(); ++k) {
      out.push_back(parse((*list)[k], "instances[" + std::to_string(k) + "]"));
    }
  } else {
    out.push_back(parse(*list, "instance"));
  }
  if (out.empty()) throw ValidationError("instances file contains no instances");
  return out;
}

}  // namespace

std::vector<MatchingInstance> matching_instances_from_json(const Json& j) {
  return instances_from_json(j, matching_instance_from_json);
}

std::vector<SchedulingInstance> scheduling_instances_from_json(const Json& j) {
  return instances_from_json(j, scheduling_instance_from_json);
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

MatchingTrainingSet read_matching_dataset(std::istream& in) {
  const auto table = read_csv(in);
  const std::size_t skills = count_prefixed(table.header, 0, "x_");
  const std::size_t tasks = count_prefixed(table.header, skills, "y_");
  if (skills == 0 || tasks == 0 || skills + tasks != table.header.size()) {
    throw ValidationError("matrix dataset header must be x_1..x_i,y_1..y_j");
  }
  MatchingTrainingSet set;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    at_path("dataset sample " + std::to_string(r + 1), [&] {
      set.samples.push_back(
          {SkillVector::from_totals({row.begin(), row.begin() + static_cast<std::ptrdiff_t>(skills)}),
           TaskVector({row.begin() + static_cast<std::ptrdiff_t>(skills), row.end()})});
      return 0;
    });
  }
  return set;
}

ValueTrainingSet read_value_dataset(std::istream& in) {
  const auto table = read_csv(in);
  const std::size_t tasks = count_prefixed(table.header, 0, "y_");
  if (tasks == 0 || tasks + 1 != table.header.size() || table.header.back() != "I") {
    throw ValidationError("value dataset header must be y_1..y_j,I");
  }
  ValueTrainingSet set;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    at_path("dataset sample " + std::to_string(r + 1), [&] {
      set.samples.push_back(
          {TaskVector({row.begin(), row.begin() + static_cast<std::ptrdiff_t>(tasks)}), row.back()});
      return 0;
    });
  }
  return set;
}

void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace) {
  out << kTraceHeader << '\n';
  for (const auto& r : trace.records) {
    out << r.period << ',' << format_double(r.loss_matching) << ','
        << format_double(r.loss_value) << ',' << format_double(r.income_expected) << ','
        << format_double(r.income_actual) << ',' << format_double(r.total_cost) << ','
        << format_double(r.profit_expected) << ',' << format_double(r.profit_actual) << ','
        << format_double(r.gap_max_norm()) << '\n';
  }
}

Json trace_summary(const ConvergenceTrace& trace, const RunConfig& cfg) {
  Json j = Json::object();
  j["converged"] = trace.converged;
  j["periods"] = trace.updates();
  j["records"] = trace.records.size();
  if (trace.converged) {
    j["converged_period"] = trace.records.back().period;
  } else {
    j["converged_period"] = nullptr;
  }
  if (!trace.records.empty()) {
    const auto& last = trace.records.back();
    j["final_loss_matching"] = last.loss_matching;
    j["final_loss_value"] = last.loss_value;
    j["final_gap_maxnorm"] = last.gap_max_norm();
  }
  j["final_matrix"] = to_json(trace.final_state.matrix);
  j["final_values"] = numbers_json(trace.final_state.values.values());
  RunConfig recorded = cfg;
  recorded.out.reset();
  j["config"] = to_json(recorded);
  return j;
}

}  // namespace skilltask::io
