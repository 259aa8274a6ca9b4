#include "mslift/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mslift/errors.hpp"

namespace mslift::lp {
namespace {
constexpr double kPivotEps = 1e-12;
}

Result maximize(const Matrix& a, std::span<const double> b, std::span<const double> c,
                std::size_t max_pivots) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (b.size() != m || c.size() != n) throw PreconditionError("simplex: dimension mismatch");
  for (double v : b) {
    if (!(v >= 0.0)) throw PreconditionError("simplex: right-hand side must be nonnegative");
  }

  // Columns: n structural, m slack, 1 rhs. Row m holds reduced costs.
  const std::size_t width = n + m + 1;
  const std::size_t rhs = n + m;
  Matrix t(m + 1, width);
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < n; ++j) t(r, j) = a(r, j);
    t(r, n + r) = 1.0;
    t(r, rhs) = b[r];
    basis[r] = n + r;
  }
  for (std::size_t j = 0; j < n; ++j) t(m, j) = -c[j];

  std::size_t pivots = 0;
  while (true) {
    std::size_t enter = width;
    for (std::size_t j = 0; j < rhs; ++j) {
      if (t(m, j) < -kPivotEps) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m; ++r) {
      if (t(r, enter) > kPivotEps) best = std::min(best, t(r, rhs) / t(r, enter));
    }
    std::size_t leave = m;
    for (std::size_t r = 0; r < m; ++r) {
      if (t(r, enter) <= kPivotEps) continue;
      if (t(r, rhs) / t(r, enter) > best + kPivotEps) continue;
      if (leave == m || basis[r] < basis[leave]) leave = r;
    }
    if (leave == m) return {Status::kUnbounded, std::numeric_limits<double>::infinity(), {}, pivots};
    if (++pivots > max_pivots) return {Status::kIterationLimit, t(m, rhs), {}, pivots};

    const double p = t(leave, enter);
    for (std::size_t j = 0; j < width; ++j) t(leave, j) /= p;
    for (std::size_t r = 0; r <= m; ++r) {
      if (r == leave) continue;
      const double f = t(r, enter);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width; ++j) t(r, j) -= f * t(leave, j);
    }
    basis[leave] = enter;
  }

  Result res{Status::kOptimal, t(m, rhs), std::vector<double>(n, 0.0), pivots};
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) res.x[basis[r]] = t(r, rhs);
  }
  return res;
}

}  // namespace mslift::lp
