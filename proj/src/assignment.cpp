#include "geoad/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace geoad {

IncrementalAssignment::IncrementalAssignment(int num_cols) : m_(num_cols) {
  if (num_cols < 1) {
    throw std::invalid_argument("IncrementalAssignment: need at least one column");
  }
  u_.assign(1, 0.0);
  v_.assign(static_cast<size_t>(m_) + 1, 0.0);
  p_.assign(static_cast<size_t>(m_) + 1, 0);
}

double IncrementalAssignment::push(std::span<const double> values) {
  if (static_cast<int>(values.size()) != m_) {
    throw std::invalid_argument("IncrementalAssignment: row size mismatch");
  }
  if (rows() == m_) {
    throw std::logic_error("IncrementalAssignment: more rows than columns");
  }
  stack_.push_back({u_, v_, p_, value_});
  Row row;
  row.value.assign(values.begin(), values.end());
  const double offset = *std::max_element(row.value.begin(), row.value.end());
  row.cost.resize(row.value.size());
  for (size_t j = 0; j < row.value.size(); ++j) row.cost[j] = offset - row.value[j];
  rows_.push_back(std::move(row));
  u_.push_back(0.0);
  augment_last_row();
  value_ = 0.0;
  for (int j = 1; j <= m_; ++j) {
    const int i = p_[static_cast<size_t>(j)];
    if (i != 0) value_ += rows_[static_cast<size_t>(i - 1)].value[static_cast<size_t>(j - 1)];
  }
  return value_;
}

void IncrementalAssignment::pop() {
  if (rows_.empty()) throw std::logic_error("IncrementalAssignment: pop on empty stack");
  u_ = std::move(stack_.back().u);
  v_ = std::move(stack_.back().v);
  p_ = std::move(stack_.back().p);
  value_ = stack_.back().value;
  stack_.pop_back();
  rows_.pop_back();
}

void IncrementalAssignment::augment_last_row() {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const int i_new = rows();  // 1-based index of the row just added
  std::vector<double> minv(static_cast<size_t>(m_) + 1, kInf);
  std::vector<char> used(static_cast<size_t>(m_) + 1, 0);
  std::vector<int> way(static_cast<size_t>(m_) + 1, 0);
  p_[0] = i_new;
  int j0 = 0;
  do {
    used[static_cast<size_t>(j0)] = 1;
    const int i0 = p_[static_cast<size_t>(j0)];
    double delta = kInf;
    int j1 = -1;
    const Row& row = rows_[static_cast<size_t>(i0 - 1)];
    for (int j = 1; j <= m_; ++j) {
      if (used[static_cast<size_t>(j)]) continue;
      const double cur = row.cost[static_cast<size_t>(j - 1)] - u_[static_cast<size_t>(i0)] -
                         v_[static_cast<size_t>(j)];
      if (cur < minv[static_cast<size_t>(j)]) {
        minv[static_cast<size_t>(j)] = cur;
        way[static_cast<size_t>(j)] = j0;
      }
      if (minv[static_cast<size_t>(j)] < delta) {
        delta = minv[static_cast<size_t>(j)];
        j1 = j;
      }
    }
    if (j1 < 0) throw std::logic_error("IncrementalAssignment: no augmenting path");
    for (int j = 0; j <= m_; ++j) {
      if (used[static_cast<size_t>(j)]) {
        u_[static_cast<size_t>(p_[static_cast<size_t>(j)])] += delta;
        v_[static_cast<size_t>(j)] -= delta;
      } else {
        minv[static_cast<size_t>(j)] -= delta;
      }
    }
    j0 = j1;
  } while (p_[static_cast<size_t>(j0)] != 0);
  do {
    const int j1 = way[static_cast<size_t>(j0)];
    p_[static_cast<size_t>(j0)] = p_[static_cast<size_t>(j1)];
    j0 = j1;
  } while (j0 != 0);
}

std::vector<int> IncrementalAssignment::matched_col_by_row() const {
  std::vector<int> out(rows_.size(), -1);
  for (int j = 1; j <= m_; ++j) {
    const int i = p_[static_cast<size_t>(j)];
    if (i != 0) out[static_cast<size_t>(i - 1)] = j - 1;
  }
  return out;
}

AssignmentResult solve_max_assignment(const ValueMatrix& m) {
  if (m.cols < 1) throw std::invalid_argument("solve_max_assignment: need cols >= 1");
  if (m.cols > m.rows) {
    throw std::invalid_argument(
        "solve_max_assignment: infeasible, more columns than rows");
  }
  for (double v : m.values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("solve_max_assignment: values must be finite and >= 0");
    }
  }
  // Feed each matrix column as one engine row; engine columns are the matrix
  // rows, so per-push reduction offsets are the matrix column maxima.
  IncrementalAssignment engine(m.rows);
  std::vector<double> column(static_cast<size_t>(m.rows));
  for (int c = 0; c < m.cols; ++c) {
    for (int r = 0; r < m.rows; ++r) column[static_cast<size_t>(r)] = m.at(r, c);
    engine.push(column);
  }
  AssignmentResult result;
  result.row_of_col = engine.matched_col_by_row();
  result.value = engine.value();
  return result;
}

}  // namespace geoad
