#pragma once

#include <span>
#include <vector>

namespace geoad {

// Dense value matrix for one assignment problem.  By convention rows are
// advertisers and columns are path nodes, but the solver only sees numbers.
struct ValueMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;  // row-major

  ValueMatrix() = default;
  ValueMatrix(int r, int c)
      : rows(r), cols(c), values(static_cast<size_t>(r) * static_cast<size_t>(c), 0.0) {}
  double& at(int r, int c) {
    return values[static_cast<size_t>(r) * static_cast<size_t>(cols) + static_cast<size_t>(c)];
  }
  double at(int r, int c) const {
    return values[static_cast<size_t>(r) * static_cast<size_t>(cols) + static_cast<size_t>(c)];
  }
};

struct AssignmentResult {
  std::vector<int> row_of_col;  // matched row for each column
  double value = 0.0;           // sum of matched values
};

// Maximum-value assignment matching every column to a distinct row.
// Requires cols >= 1, rows >= cols (throws std::invalid_argument otherwise:
// with more columns than rows not every column can be served), and all values
// finite and >= 0.  Equal-value alternatives resolve toward lower row
// indices.  O(cols^2 * rows).
AssignmentResult solve_max_assignment(const ValueMatrix& m);

// Incremental variant used by the subset-enumeration solvers: the column side
// (size m) is fixed, rows arrive one at a time and can be retracted in LIFO
// order.  Every pushed row is matched to a distinct column, the total matched
// value stays maximal after each push, and pop() restores the previous
// optimum exactly.  A push costs one augmentation, O(rows * m); pop is O(m).
class IncrementalAssignment {
 public:
  explicit IncrementalAssignment(int num_cols);

  // Adds a row of `num_cols` values; returns the new optimal total value.
  double push(std::span<const double> values);
  void pop();

  double value() const { return value_; }
  int rows() const { return static_cast<int>(rows_.size()); }
  int cols() const { return m_; }

  // Matched column for each pushed row, in push order.
  std::vector<int> matched_col_by_row() const;

 private:
  struct Row {
    std::vector<double> value;  // raw values
    std::vector<double> cost;   // row_max - value (reduction offset)
  };

  int m_ = 0;
  double value_ = 0.0;
  std::vector<Row> rows_;
  // Shortest-augmenting-path duals and matching (1-based, index 0 is scratch).
  std::vector<double> u_, v_;
  std::vector<int> p_;  // p_[j] = 1-based row matched to column j, 0 if free
  struct Snapshot {
    std::vector<double> u, v;
    std::vector<int> p;
    double value;
  };
  std::vector<Snapshot> stack_;

  void augment_last_row();
};

}  // namespace geoad
