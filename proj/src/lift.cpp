#include "mslift/lift.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mslift/errors.hpp"
#include "mslift/simplex.hpp"
#include "mslift/tolerances.hpp"

namespace mslift {

double positive_variation(const ColumnProfile& p) {
  double prev = 0.0;
  double rise = 0.0;
  for (double level : p.levels) {
    if (level > prev) rise += level - prev;
    prev = level;
  }
  if (prev < 0.0) rise -= prev;
  return rise;
}

double column_energy(const ColumnProfile& p, double alpha) { return alpha * positive_variation(p); }

double column_energy_oracle(const ColumnProfile& p, double alpha) {
  const std::size_t m = p.intervals();
  if (m > kOracleMaxIntervals) {
    std::ostringstream os;
    os << "column_energy_oracle: " << m << " intervals exceed the limit of "
       << kOracleMaxIntervals;
    throw SizeLimitError(os.str());
  }
  if (m == 0) return 0.0;

  // Unknowns y_i = phi_i * h_i split as y = pos - neg (columns i and m + i).
  // Every contiguous block sum of y is bounded by alpha in absolute value.
  const std::size_t rows = m * (m + 1);
  lp::Matrix a(rows, 2 * m);
  std::vector<double> b(rows, alpha);
  std::size_t r = 0;
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t e = s; e < m; ++e) {
      for (std::size_t i = s; i <= e; ++i) {
        a(r, i) = 1.0;
        a(r, m + i) = -1.0;
        a(r + 1, i) = -1.0;
        a(r + 1, m + i) = 1.0;
      }
      r += 2;
    }
  }
  std::vector<double> c(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    c[i] = p.levels[i];
    c[m + i] = -p.levels[i];
  }
  const lp::Result res = lp::maximize(a, b, c);
  if (res.status != lp::Status::kOptimal) {
    throw VerificationError("column_energy_oracle: simplex did not reach an optimum", res.value);
  }
  return res.value;
}

double maxmin_energy(const ColumnProfile& p, double alpha) {
  if (p.empty()) return 0.0;
  const bool all_nonneg = std::all_of(p.levels.begin(), p.levels.end(), [](double l) { return l >= 0.0; });
  const bool all_nonpos = std::all_of(p.levels.begin(), p.levels.end(), [](double l) { return l <= 0.0; });
  if (!all_nonneg && !all_nonpos) {
    throw PreconditionError("maxmin_energy: profile mixes up- and down-jumps");
  }
  std::vector<double> lv = p.levels;
  if (!all_nonneg) {
    for (double& l : lv) l = -l;
  }
  const auto level = [&](std::ptrdiff_t i) {
    return (i < 0 || i >= static_cast<std::ptrdiff_t>(lv.size())) ? 0.0 : lv[static_cast<std::size_t>(i)];
  };
  std::vector<std::size_t> maxima;
  for (std::size_t i = 0; i < lv.size(); ++i) {
    const auto si = static_cast<std::ptrdiff_t>(i);
    if (lv[i] > level(si - 1) && lv[i] > level(si + 1)) maxima.push_back(i);
  }
  double sum_max = 0.0;
  for (std::size_t i : maxima) sum_max += lv[i];
  double sum_min = 0.0;
  for (std::size_t j = 0; j + 1 < maxima.size(); ++j) {
    sum_min += *std::min_element(lv.begin() + static_cast<std::ptrdiff_t>(maxima[j]),
                                 lv.begin() + static_cast<std::ptrdiff_t>(maxima[j + 1]) + 1);
  }
  return alpha * (sum_max - sum_min);
}

double ColumnCalibration::phi_x(double t) const {
  for (const auto& s : segments) {
    if (s.t0 < t && t < s.t1) return s.phi_x;
  }
  return 0.0;
}

double ColumnCalibration::phi_t(double t) const {
  const double f = phi_x(t);
  const double d = t - g_value;
  return 0.25 * f * f - beta * d * d;
}

double ColumnCalibration::running_integral_oscillation() const {
  double running = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  for (const auto& s : segments) {
    running += s.phi_x * (s.t1 - s.t0);
    lo = std::min(lo, running);
    hi = std::max(hi, running);
  }
  return hi - lo;
}

double ColumnCalibration::flux(const ColumnProfile& p) const {
  double total = 0.0;
  for (const auto& s : segments) {
    for (std::size_t i = 0; i < p.intervals(); ++i) {
      const double lo = std::max(s.t0, p.breakpoints[i]);
      const double hi = std::min(s.t1, p.breakpoints[i + 1]);
      if (hi > lo) total += p.levels[i] * s.phi_x * (hi - lo);
    }
  }
  return total;
}

ColumnCalibration build_column_calibration(const ColumnProfile& p, const LiftParams& params) {
  ColumnCalibration cal;
  cal.x = p.x;
  cal.beta = params.ms.beta;
  const Interval iv = params.g.interval();
  if (iv.a < p.x && p.x <= iv.b) cal.g_value = params.g.function().left_trace(p.x);

  const double alpha = params.ms.alpha;
  const std::size_t m = p.intervals();
  // Running integral at each breakpoint: 0 where the level rises, alpha where
  // it falls. Merged profiles never have a zero increment.
  std::vector<double> anchor(m + 1);
  double prev = 0.0;
  for (std::size_t k = 0; k <= m; ++k) {
    const double next = k < m ? p.levels[k] : 0.0;
    anchor[k] = next > prev ? 0.0 : alpha;
    prev = next;
  }
  for (std::size_t k = 0; k < m; ++k) {
    const double h = p.width(k);
    cal.segments.push_back({p.breakpoints[k], p.breakpoints[k + 1], (anchor[k + 1] - anchor[k]) / h});
  }
  return cal;
}

ColumnCalibration build_column_calibration(const GraphCombination& t, double x,
                                           const LiftParams& params) {
  std::vector<Jump> jumps;
  for (const auto& term : t.terms()) {
    if (auto j = term.func.jump_near(x, kAbscissaTol)) jumps.push_back(*j);
  }
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    for (std::size_t j = i + 1; j < jumps.size(); ++j) {
      if (auto overlap = cancellation_overlap(jumps[i], jumps[j])) {
        std::ostringstream os;
        os << "build_column_calibration: cancellation on the jumps at x=" << x
           << " over t-interval (" << overlap->first << ", " << overlap->second << ")";
        throw PreconditionError(os.str());
      }
    }
  }
  return build_column_calibration(slice_profile(t, x), params);
}

LiftReport evaluate(const GraphCombination& t, const LiftParams& params) {
  if (!(t.interval() == params.g.interval())) {
    throw DomainMismatchError("evaluate: combination and measurement live on different intervals");
  }
  LiftReport report;
  for (const auto& term : t.terms()) {
    report.regular += term.weight * regular_energy(term.func, params.g, params.ms);
  }
  for (double x : t.jump_abscissae()) {
    ColumnReport col{x, 0.0, slice_profile(t, x)};
    col.energy = column_energy(col.profile, params.ms.alpha);
    report.singular += col.energy;
    report.columns.push_back(std::move(col));
  }
  report.total = report.regular + report.singular;
  return report;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kCertified:
      return "certified";
    case Verdict::kNotCertified:
      return "not-certified";
    case Verdict::kBoundaryMismatch:
      return "boundary-mismatch";
  }
  return "unknown";
}

}  // namespace mslift
