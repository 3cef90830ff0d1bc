#include "skilltask/production.hpp"

#include <algorithm>
#include <cmath>

namespace skilltask {
namespace {

void require_finite_non_negative(const std::vector<double>& values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError(std::string(what) + " entries must be finite and >= 0");
    }
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += a[k] * b[k];
  return sum;
}

}  // namespace

SkillVector::SkillVector(std::vector<double> labor, std::vector<double> machine)
    : labor_(std::move(labor)), machine_(std::move(machine)) {
  if (labor_.empty()) throw DimensionError("skill vector must not be empty");
  detail::require_same_size(machine_.size(), labor_.size(), "machine skills vs labor skills");
  require_finite_non_negative(labor_, "labor skills");
  require_finite_non_negative(machine_, "machine skills");
}

SkillVector SkillVector::from_totals(std::vector<double> totals) {
  std::vector<double> machine(totals.size(), 0.0);
  return SkillVector(std::move(totals), std::move(machine));
}

std::vector<double> SkillVector::totals() const {
  std::vector<double> out(size());
  for (std::size_t u = 0; u < size(); ++u) out[u] = total(u);
  return out;
}

SkillVector SkillVector::scaled(double factor) const {
  auto labor = labor_;
  auto machine = machine_;
  for (auto& v : labor) v *= factor;
  for (auto& v : machine) v *= factor;
  return SkillVector(std::move(labor), std::move(machine));
}

MatchingMatrix::MatchingMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows_ == 0 || cols_ == 0) throw DimensionError("matching matrix must be at least 1x1");
  detail::require_same_size(entries_.size(), rows_ * cols_, "matching matrix entries");
  require_finite_non_negative(entries_, "matching matrix");
}

MatchingMatrix MatchingMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) {
    throw DimensionError("matching matrix must be at least 1x1");
  }
  const std::size_t cols = rows.front().size();
  std::vector<double> entries;
  entries.reserve(rows.size() * cols);
  for (std::size_t u = 0; u < rows.size(); ++u) {
    if (rows[u].size() != cols) {
      throw DimensionError("matching matrix row " + std::to_string(u) + " has " +
                           std::to_string(rows[u].size()) + " entries, expected " +
                           std::to_string(cols));
    }
    entries.insert(entries.end(), rows[u].begin(), rows[u].end());
  }
  return MatchingMatrix(rows.size(), cols, std::move(entries));
}

MatchingMatrix MatchingMatrix::zeros(std::size_t rows, std::size_t cols) {
  return MatchingMatrix(rows, cols, std::vector<double>(rows * cols, 0.0));
}

MatchingMatrix MatchingMatrix::identity(std::size_t n) {
  auto m = zeros(n, n);
  for (std::size_t k = 0; k < n; ++k) m.entries_[k * n + k] = 1.0;
  return m;
}

std::vector<std::vector<double>> MatchingMatrix::to_rows() const {
  std::vector<std::vector<double>> out(rows_);
  for (std::size_t u = 0; u < rows_; ++u) {
    out[u].assign(entries_.begin() + static_cast<std::ptrdiff_t>(u * cols_),
                  entries_.begin() + static_cast<std::ptrdiff_t>((u + 1) * cols_));
  }
  return out;
}

void MatchingMatrix::set_clamped(std::size_t u, std::size_t v, double value) {
  entries_[u * cols_ + v] = std::max(0.0, value);
}

CostModel CostModel::free(std::size_t skills) {
  CostModel m;
  m.machine_price.assign(skills, 0.0);
  m.wage.assign(skills, 0.0);
  m.fixed_coeff.assign(skills, 0.0);
  return m;
}

void CostModel::validate(std::size_t skills) const {
  detail::require_same_size(machine_price.size(), skills, "cost machine_price");
  detail::require_same_size(wage.size(), skills, "cost wage");
  detail::require_same_size(fixed_coeff.size(), skills, "cost fixed_coeff");
  require_finite_non_negative(machine_price, "cost machine_price");
  require_finite_non_negative(wage, "cost wage");
  require_finite_non_negative(fixed_coeff, "cost fixed_coeff");
  detail::require(std::isfinite(interest_rate) && interest_rate >= 0.0,
                  "cost interest_rate must be >= 0");
  detail::require(depreciation > 0.0 && depreciation <= 1.0,
                  "cost depreciation must lie in (0, 1]");
}

TaskOutputVector task_output(const SkillVector& skills, const MatchingMatrix& matrix) {
  detail::require_same_size(skills.size(), matrix.rows(), "skills vs matching matrix rows");
  std::vector<double> out(matrix.cols(), 0.0);
  for (std::size_t u = 0; u < matrix.rows(); ++u) {
    const double x = skills.total(u);
    if (x == 0.0) continue;
    for (std::size_t v = 0; v < matrix.cols(); ++v) out[v] += x * matrix(u, v);
  }
  return TaskOutputVector(std::move(out));
}

double expected_income(const TaskValueVector& values, const TaskVector& tasks) {
  detail::require_same_size(values.size(), tasks.size(), "task values vs tasks");
  return dot(values.values(), tasks.values());
}

double actual_income(const TaskValueVector& values, const TaskOutputVector& output) {
  detail::require_same_size(values.size(), output.size(), "task values vs task outputs");
  return dot(values.values(), output.values());
}

double cost(const CostModel& model, const SkillVector& skills) {
  model.validate(skills.size());
  const double variable =
      dot(model.machine_price, skills.machine()) + dot(model.wage, skills.labor());
  const double fixed = dot(model.fixed_coeff, skills.machine());
  return variable + fixed / ((1.0 + model.interest_rate) * model.depreciation);
}

Profits profits(double price, double expected_quantity, double income_actual, double total_cost) {
  detail::require(price > 0.0, "price must be > 0");
  return {price * expected_quantity - total_cost, income_actual - total_cost};
}

ProfitGapVector profit_gap(const TaskValueVector& values, const TaskVector& tasks,
                           const TaskOutputVector& output) {
  detail::require_same_size(values.size(), tasks.size(), "task values vs tasks");
  detail::require_same_size(output.size(), tasks.size(), "task outputs vs tasks");
  std::vector<double> gaps(tasks.size());
  for (std::size_t v = 0; v < tasks.size(); ++v) gaps[v] = values[v] * (tasks[v] - output[v]);
  return ProfitGapVector(std::move(gaps));
}

bool unit_matching_check(const SkillVector& skills, const MatchingMatrix& matrix, double tol) {
  detail::require(tol > 0.0, "tolerance must be > 0");
  const auto out = task_output(skills, matrix);
  return std::all_of(out.values().begin(), out.values().end(),
                     [tol](double y) { return std::abs(y - 1.0) <= tol; });
}

double max_abs(std::span<const double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace skilltask
