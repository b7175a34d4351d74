#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace mgems::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

struct Term {
  int col = 0;
  double coef = 0.0;
};

struct Variable {
  double lower = 0.0;
  double upper = kInf;
  double cost = 0.0;
  std::string name;
};

struct Row {
  std::vector<Term> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
  std::string name;
};

/// min cost.x + offset  s.t.  rows, lower <= x <= upper.
class LinearProgram {
 public:
  explicit LinearProgram(std::string name = "lp") : name_(std::move(name)) {}

  int add_variable(double lower, double upper, double cost, std::string name = {});
  int add_row(std::vector<Term> terms, Sense sense, double rhs, std::string name = {});

  void set_bounds(int col, double lower, double upper);
  void set_cost(int col, double cost);
  void set_rhs(int row, double rhs);
  void set_offset(double offset) { offset_ = offset; }

  int num_variables() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const Variable& variable(int col) const { return vars_.at(col); }
  const Row& row(int r) const { return rows_.at(r); }
  double offset() const { return offset_; }
  const std::string& name() const { return name_; }

  /// Throws InvalidArgument on inconsistent bounds, bad column indices or non-finite data.
  void validate() const;

  double objective(const std::vector<double>& x) const;
  double row_activity(int r, const std::vector<double>& x) const;

  /// Fixed text grammar, one record per line:
  ///   lp <name>
  ///   offset <value>
  ///   var <idx> <name> <lower> <upper> <cost>
  ///   row <idx> <name> <le|eq|ge> <rhs> : <col>:<coef> ...
  ///   end
  /// Numbers use shortest round-trip form; infinities print as inf / -inf.
  std::string to_text() const;
  static LinearProgram from_text(std::string_view text);

 private:
  std::string name_;
  std::vector<Variable> vars_;
  std::vector<Row> rows_;
  double offset_ = 0.0;
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

std::string to_string(Status status);

struct LpSolution {
  Status status = Status::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  /// d(objective)/d(rhs) per row.
  std::vector<double> duals;
  /// d(objective)/d(x_j) along the active bound of each column (zero for basic columns).
  std::vector<double> reduced_costs;
  int iterations = 0;

  bool optimal() const { return status == Status::kOptimal; }
};

}  // namespace mgems::lp
