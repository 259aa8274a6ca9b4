#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mslift::lp {

/// Row-major dense matrix.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

enum class Status { kOptimal, kUnbounded, kIterationLimit };

struct Result {
  Status status;
  double value;
  std::vector<double> x;
  std::size_t pivots;
};

/// maximize c'x  subject to  A x <= b,  x >= 0,  with b >= 0 so the origin is
/// a feasible basis. Dense tableau, Bland's rule (no cycling).
Result maximize(const Matrix& a, std::span<const double> b, std::span<const double> c,
                std::size_t max_pivots = 200000);

}  // namespace mslift::lp
