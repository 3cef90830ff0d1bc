#pragma once

// Production mapping and period accounting: skills are pushed through the
// matching matrix to realized task outputs, which are valued by the task value
// vector and compared against the plan.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "skilltask/error.hpp"

namespace skilltask {

enum class Sign { any, non_negative };

// A dense real vector carrying a domain tag so that task quantities, outputs,
// values and gaps cannot be mixed up at call sites.
template <class Tag, Sign S>
class BasicVector {
 public:
  BasicVector() = default;
  explicit BasicVector(std::vector<double> values) : values_(std::move(values)) {
    validate();
  }
  BasicVector(std::initializer_list<double> values) : values_(values) { validate(); }

  static BasicVector zeros(std::size_t n) { return BasicVector(std::vector<double>(n, 0.0)); }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& vec() const { return values_; }

  bool operator==(const BasicVector&) const = default;

 private:
  void validate() const {
    if (values_.empty()) throw DimensionError(std::string(Tag::name) + " must not be empty");
    for (double v : values_) {
      if (!(v == v)) throw ValidationError(std::string(Tag::name) + " contains NaN");
      if constexpr (S == Sign::non_negative) {
        if (v < 0.0) throw ValidationError(std::string(Tag::name) + " entries must be >= 0");
      }
    }
  }

  std::vector<double> values_;
};

namespace tags {
struct Task { static constexpr const char* name = "task vector"; };
struct TaskOutput { static constexpr const char* name = "task output vector"; };
struct TaskValue { static constexpr const char* name = "task value vector"; };
struct ProfitGap { static constexpr const char* name = "profit gap vector"; };
}  // namespace tags

// Expected task quantities y.
using TaskVector = BasicVector<tags::Task, Sign::non_negative>;
// Realized task outputs x·A.
using TaskOutputVector = BasicVector<tags::TaskOutput, Sign::non_negative>;
// Per-task value weights; sign unconstrained.
using TaskValueVector = BasicVector<tags::TaskValue, Sign::any>;
// Per-task profit gaps λ_v·(y_v − ŷ_v).
using ProfitGapVector = BasicVector<tags::ProfitGap, Sign::any>;

// Skill supply split into the part provided by workers and by machines.
class SkillVector {
 public:
  SkillVector() = default;
  SkillVector(std::vector<double> labor, std::vector<double> machine);
  // All supply attributed to labor.
  static SkillVector from_totals(std::vector<double> totals);

  std::size_t size() const { return labor_.size(); }
  const std::vector<double>& labor() const { return labor_; }
  const std::vector<double>& machine() const { return machine_; }
  double total(std::size_t u) const { return labor_[u] + machine_[u]; }
  std::vector<double> totals() const;
  SkillVector scaled(double factor) const;

  bool operator==(const SkillVector&) const = default;

 private:
  std::vector<double> labor_;
  std::vector<double> machine_;
};

// Nonnegative skills×tasks matrix, row-major.
class MatchingMatrix {
 public:
  MatchingMatrix() = default;
  MatchingMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  static MatchingMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static MatchingMatrix zeros(std::size_t rows, std::size_t cols);
  static MatchingMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t u, std::size_t v) const { return entries_[u * cols_ + v]; }
  std::span<const double> entries() const { return entries_; }
  std::vector<std::vector<double>> to_rows() const;

  // Stores max(0, value).
  void set_clamped(std::size_t u, std::size_t v, double value);

  bool operator==(const MatchingMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

// C = d·x_k + w·x_l + F(x_k)/((1+r)δ) with F(x_k) = φ·x_k.
struct CostModel {
  std::vector<double> machine_price;
  std::vector<double> wage;
  std::vector<double> fixed_coeff;
  double interest_rate = 0.0;
  double depreciation = 1.0;

  // All-zero prices for i skills.
  static CostModel free(std::size_t skills);
  void validate(std::size_t skills) const;
};

struct Profits {
  double expected = 0.0;
  double actual = 0.0;
};

TaskOutputVector task_output(const SkillVector& skills, const MatchingMatrix& matrix);

double expected_income(const TaskValueVector& values, const TaskVector& tasks);
double actual_income(const TaskValueVector& values, const TaskOutputVector& output);

double cost(const CostModel& model, const SkillVector& skills);

// Expected profit p·Q^E − C and actual profit Î − C.
Profits profits(double price, double expected_quantity, double income_actual, double total_cost);

ProfitGapVector profit_gap(const TaskValueVector& values, const TaskVector& tasks,
                           const TaskOutputVector& output);

// True iff every component of x·A is within tol of 1. Diagnostic only; a
// learning firm's matrix is not expected to satisfy it.
bool unit_matching_check(const SkillVector& skills, const MatchingMatrix& matrix, double tol);

double max_abs(std::span<const double> values);

}  // namespace skilltask
