#include "skilltask/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "skilltask/efficiency.hpp"
#include "skilltask/io.hpp"

namespace skilltask::cli {
namespace {

std::shared_ptr<spdlog::logger> logger() {
  static auto log = [] {
    auto l = spdlog::stderr_logger_mt("skilltask");
    l->set_pattern("[%l] %v");
    return l;
  }();
  return log;
}

void configure_logging() {
  const char* env = std::getenv("SKILLTASK_LOG");
  const std::string level = env ? env : "error";
  if (level == "debug") {
    logger()->set_level(spdlog::level::debug);
  } else if (level == "info") {
    logger()->set_level(spdlog::level::info);
  } else {
    logger()->set_level(spdlog::level::err);
  }
}

// Flags that override the learning section of a config.
struct LearningOverrides {
  std::optional<double> tol;
  std::optional<double> lr_matrix;
  std::optional<double> lr_value;
  std::optional<std::size_t> periods;
  std::optional<std::string> mode;
  std::optional<std::string> value_mode;
  std::optional<std::string> value_schedule;

  void attach(CLI::App* app) {
    app->add_option("--tol", tol, "Convergence threshold");
    app->add_option("--lr-a", lr_matrix, "Matching-matrix learning rate in (0, 1)");
    app->add_option("--lr-lambda", lr_value, "Task-value learning rate in (0, 1)");
    app->add_option("--periods", periods, "Maximum periods (simulate) or epochs (train)");
    app->add_option("--mode", mode, "Matrix update sign: descent | paper-literal");
    app->add_option("--value-mode", value_mode, "Value update: exact-gradient | paper-delta");
    app->add_option("--value-schedule", value_schedule,
                    "Value update timing: concurrent | after-matching");
  }

  void apply(LearningConfig& cfg) const {
    if (tol) cfg.tol = *tol;
    if (lr_matrix) cfg.lr_matrix = *lr_matrix;
    if (lr_value) cfg.lr_value = *lr_value;
    if (periods) cfg.max_periods = *periods;
    if (mode) cfg.matrix_sign_mode = parse_matrix_sign_mode(*mode);
    if (value_mode) cfg.value_update_mode = parse_value_update_mode(*value_mode);
    if (value_schedule) cfg.value_schedule = parse_value_schedule(*value_schedule);
    cfg.validate();
  }
};

struct GenArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

struct SimulateArgs {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  LearningOverrides learning;
};

struct TrainArgs {
  std::string kind;
  std::string dataset;
  std::optional<std::string> config;
  std::string out;
  std::uint64_t seed = 0;
  LearningOverrides learning;
};

struct CheckArgs {
  std::string proposition;
  std::optional<std::string> instances;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
};

int cmd_gen(const GenArgs& args, std::ostream& out) {
  auto cfg = io::run_config_from_json(io::read_json_file(args.config));
  if (args.seed) cfg.scenario.seed = *args.seed;
  const Scenario scenario = generate_scenario(cfg.scenario);
  const std::string text = io::dump(io::to_json(scenario));
  io::write_text_file(args.out, text);
  // Re-read what was written so a malformed file never leaves with exit 0.
  io::scenario_from_json(io::read_json_file(args.out));
  logger()->info("wrote scenario ({}x{}, {} periods) to {}", scenario.spec().skills_dim,
                 scenario.spec().tasks_dim, scenario.periods(), args.out);
  out << "wrote " << args.out << '\n';
  return kSuccess;
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out) {
  auto cfg = io::run_config_from_json(io::read_json_file(args.config));
  if (args.seed) cfg.scenario.seed = *args.seed;
  args.learning.apply(cfg.learning);
  if (args.out) cfg.out = *args.out;
  cfg.validate();
  if (!cfg.out) throw ValidationError("no output prefix: pass --out or set \"out\" in the config");

  const Scenario scenario = generate_scenario(cfg.scenario);
  const auto trace = run_until_converged(cfg.initial_state(), scenario, cfg.learning,
                                         cfg.cost_model());
  for (const auto& r : trace.records) {
    logger()->debug("period {}: E_A={} gap={}", r.period, r.loss_matching, r.gap_max_norm());
  }

  std::ostringstream csv;
  io::write_trace_csv(csv, trace);
  const std::string trace_path = *cfg.out + "_trace.csv";
  const std::string summary_path = *cfg.out + "_summary.json";
  io::write_text_file(trace_path, csv.str());
  io::write_text_file(summary_path, io::dump(io::trace_summary(trace, cfg)));

  out << (trace.converged ? "converged" : "not converged") << " after " << trace.updates()
      << " recalibration periods (" << trace.records.size() << " trace rows)\n"
      << "wrote " << trace_path << " and " << summary_path << '\n';
  return kSuccess;
}

LearningConfig training_config(const TrainArgs& args) {
  LearningConfig cfg;
  if (args.config) {
    const auto j = io::read_json_file(*args.config);
    cfg = j.is_object() && j.contains("scenario") ? io::run_config_from_json(j).learning
                                                  : io::learning_from_json(j);
  }
  args.learning.apply(cfg);
  return cfg;
}

int cmd_train(const TrainArgs& args, std::ostream& out) {
  const LearningConfig cfg = training_config(args);
  std::ifstream in(args.dataset);
  if (!in) throw IoError("cannot open '" + args.dataset + "' for reading");

  io::Json result = io::Json::object();
  result["mode"] = args.kind;
  TrainingReport report;
  if (args.kind == "matrix") {
    const auto set = io::read_matching_dataset(in);
    auto [fitted, rep] = train_matching_matrix(
        set, random_matching_matrix(set.skills_dim(), set.tasks_dim(), args.seed), cfg);
    result["matrix"] = io::to_json(fitted);
    report = std::move(rep);
  } else {
    const auto set = io::read_value_dataset(in);
    auto [fitted, rep] =
        train_value_vector(set, random_value_vector(set.tasks_dim(), args.seed), cfg);
    io::Json values = io::Json::array();
    for (double v : fitted.values()) values.push_back(v);
    result["values"] = std::move(values);
    report = std::move(rep);
  }
  result["report"] = io::to_json(report);
  result["learning"] = io::to_json(cfg);
  io::write_text_file(args.out, io::dump(result));
  out << (report.converged ? "converged" : "not converged") << " after " << report.epochs_run
      << " epochs, final loss " << io::format_double(report.final_loss) << '\n'
      << "wrote " << args.out << '\n';
  return kSuccess;
}

int cmd_check(const CheckArgs& args, std::ostream& out) {
  std::size_t passed = 0;
  std::size_t total = 0;
  auto verdict = [&](bool ok) {
    ++total;
    if (ok) ++passed;
    return ok ? "pass" : "FAIL";
  };

  if (args.proposition == "matching") {
    std::vector<MatchingInstance> instances;
    if (args.instances) {
      instances = io::matching_instances_from_json(io::read_json_file(*args.instances));
    } else {
      for (std::size_t k = 0; k < args.trials; ++k) {
        Rng rng = Rng::keyed(args.seed, streams::trials, k);
        instances.push_back(random_matching_instance(rng));
      }
    }
    for (std::size_t k = 0; k < instances.size(); ++k) {
      const auto task = task_level_value(instances[k]);
      const auto job = job_level_value(instances[k]);
      out << "instance " << k << ": task-level " << io::format_double(task.value)
          << " vs job-level " << io::format_double(job.value) << ": "
          << verdict(check_matching_dominance(instances[k])) << '\n';
    }
  } else {
    std::vector<SchedulingInstance> instances;
    if (args.instances) {
      instances = io::scheduling_instances_from_json(io::read_json_file(*args.instances));
      for (std::size_t k = 0; k < instances.size(); ++k) {
        if (instances[k].parallelism != 0.0) {
          throw InapplicableRegimeError("instance " + std::to_string(k) +
                                        ": cycle dominance requires parallelism 0 (inapplicable "
                                        "regime for parallelism " +
                                        io::format_double(instances[k].parallelism) + ")");
        }
      }
    } else {
      for (std::size_t k = 0; k < args.trials; ++k) {
        Rng rng = Rng::keyed(args.seed, streams::trials, k);
        instances.push_back(random_scheduling_instance(rng));
      }
    }
    for (std::size_t k = 0; k < instances.size(); ++k) {
      const auto occ = cycle_bounds_occupation(instances[k]);
      const auto task = cycle_bounds_task(instances[k]);
      out << "instance " << k << ": occupation [" << io::format_double(occ.lower) << ", "
          << io::format_double(occ.upper) << "] vs task [" << io::format_double(task.lower)
          << ", " << io::format_double(task.upper)
          << "]: " << verdict(check_cycle_dominance(instances[k])) << '\n';
    }
  }
  out << args.proposition << ": " << passed << "/" << total << " pass\n";
  return passed == total ? kSuccess : kPropertyViolation;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  configure_logging();

  CLI::App app{"Skill-task matching simulator"};
  app.name("skilltask");
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Materialize a scenario (ideal matrix, base vectors)");
  gen_cmd->add_option("--config", gen.config, "Scenario spec or run config (JSON)")->required();
  gen_cmd->add_option("--out", gen.out, "Output scenario JSON")->required();
  gen_cmd->add_option("--seed", gen.seed, "Override the scenario seed");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run the period-by-period recalibration loop");
  sim_cmd->add_option("--config", sim.config, "Run config (JSON)")->required();
  sim_cmd->add_option("--out", sim.out, "Output prefix for _trace.csv and _summary.json");
  sim_cmd->add_option("--seed", sim.seed, "Override the scenario seed");
  sim.learning.attach(sim_cmd);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Fit A or lambda on a CSV dataset");
  train_cmd->add_option("kind", train.kind, "matrix | value")
      ->required()
      ->check(CLI::IsMember({"matrix", "value"}));
  train_cmd->add_option("dataset", train.dataset, "Dataset CSV")->required();
  train_cmd->add_option("--config", train.config, "Learning config or run config (JSON)");
  train_cmd->add_option("--out", train.out, "Output JSON")->required();
  train_cmd->add_option("--seed", train.seed, "Seed for the initial parameters");
  train.learning.attach(train_cmd);

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "Check a dominance property on instances");
  check_cmd->add_option("proposition", check.proposition, "matching | cycle")
      ->required()
      ->check(CLI::IsMember({"matching", "cycle"}));
  check_cmd->add_option("--instances", check.instances, "Instance file (JSON)");
  check_cmd->add_option("--trials", check.trials, "Random trials when no instance file is given");
  check_cmd->add_option("--seed", check.seed, "Seed for random trials");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kValidationFailure;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, out);
    if (*sim_cmd) return cmd_simulate(sim, out);
    if (*train_cmd) return cmd_train(train, out);
    return cmd_check(check, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  }
}

}  // namespace skilltask::cli
