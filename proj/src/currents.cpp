#include "mslift/currents.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "mslift/errors.hpp"
#include "mslift/tolerances.hpp"

namespace mslift {
namespace {

double level_tol(const std::vector<double>& levels) {
  double scale = 0.0;
  for (double l : levels) scale = std::max(scale, std::abs(l));
  return kTraceMergeTol * (1.0 + scale);
}

// Sorts branches and merges those whose endpoints agree within tol.
void canonicalize(std::vector<Branch>& branches, double tol) {
  std::sort(branches.begin(), branches.end(), [](const Branch& p, const Branch& q) {
    return p.y0 != q.y0 ? p.y0 < q.y0 : p.y1 < q.y1;
  });
  std::vector<Branch> out;
  out.reserve(branches.size());
  for (const Branch& b : branches) {
    if (b.weight <= 0.0) continue;
    bool merged = false;
    // Near-equal branches sort close together but not always adjacent when
    // y0 ties are broken by noise; scan back over the tolerance window.
    for (auto it = out.rbegin(); it != out.rend() && b.y0 - it->y0 <= tol; ++it) {
      if (std::abs(it->y1 - b.y1) <= tol) {
        it->weight += b.weight;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back(b);
  }
  branches = std::move(out);
}

std::vector<double> union_grid(const BranchForm& f, const BranchForm& g) {
  std::vector<double> xs;
  for (const auto* form : {&f, &g}) {
    for (const auto& c : form->cells) {
      xs.push_back(c.x0);
      xs.push_back(c.x1);
    }
  }
  return unique_abscissae(std::move(xs));
}

// Branches of `form` on [x0, x1], interpolated from the covering cell.
std::vector<Branch> branches_on(const BranchForm& form, double x0, double x1) {
  const double mid = 0.5 * (x0 + x1);
  for (const auto& c : form.cells) {
    if (c.x0 <= mid && mid <= c.x1) {
      std::vector<Branch> out;
      out.reserve(c.branches.size());
      const double h = c.x1 - c.x0;
      for (const Branch& b : c.branches) {
        const double s = (b.y1 - b.y0) / h;
        out.push_back({b.y0 + s * (x0 - c.x0), b.y0 + s * (x1 - c.x0), b.weight});
      }
      return out;
    }
  }
  return {};
}

bool branch_lists_equal(std::vector<Branch> lhs, std::vector<Branch> rhs, double tol) {
  canonicalize(lhs, tol);
  canonicalize(rhs, tol);
  if (lhs.size() != rhs.size()) return false;
  std::vector<bool> used(rhs.size(), false);
  for (const Branch& b : lhs) {
    bool found = false;
    for (std::size_t k = 0; k < rhs.size(); ++k) {
      if (used[k]) continue;
      if (std::abs(rhs[k].y0 - b.y0) <= tol && std::abs(rhs[k].y1 - b.y1) <= tol) {
        if (std::abs(rhs[k].weight - b.weight) > tol) return false;
        used[k] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

BranchForm collar_form(const GraphCombination& t, double lo, double hi) {
  std::vector<double> grid{lo, hi};
  for (double x : t.breakpoints()) {
    if (x > lo && x < hi) grid.push_back(x);
  }
  grid = unique_abscissae(std::move(grid));
  return branch_form(t, grid);
}

const ColumnProfile* find_column(const std::vector<ColumnProfile>& cols, double x) {
  for (const auto& c : cols) {
    if (std::abs(c.x - x) <= kAbscissaTol) return &c;
  }
  return nullptr;
}

}  // namespace

GraphCombination::GraphCombination(Interval interval, std::vector<Term> terms)
    : interval_(interval), terms_(std::move(terms)) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const Term& t = terms_[i];
    if (!(std::isfinite(t.weight) && t.weight > 0.0)) {
      std::ostringstream os;
      os << "term " << i << ": weight must be > 0 (got " << t.weight << ")";
      throw ValidationError(os.str());
    }
    if (!(t.func.interval() == interval_)) {
      std::ostringstream os;
      os << "term " << i << ": function lives on a different interval";
      throw DomainMismatchError(os.str());
    }
  }
}

GraphCombination GraphCombination::from_terms(std::vector<Term> terms) {
  if (terms.empty()) throw ValidationError("terms: an empty list needs an explicit interval");
  const Interval iv = terms.front().func.interval();
  return GraphCombination(iv, std::move(terms));
}

GraphCombination GraphCombination::single(SbvFunction u, double weight) {
  const Interval iv = u.interval();
  return GraphCombination(iv, {Term{weight, std::move(u)}});
}

double GraphCombination::total_weight() const {
  double s = 0.0;
  for (const auto& t : terms_) s += t.weight;
  return s;
}

std::vector<double> GraphCombination::jump_abscissae() const {
  std::vector<double> xs;
  for (const auto& t : terms_) {
    for (const auto& j : t.func.jumps()) xs.push_back(j.x);
  }
  return unique_abscissae(std::move(xs));
}

std::vector<double> GraphCombination::breakpoints() const {
  std::vector<double> xs;
  for (const auto& t : terms_) {
    const auto b = t.func.breakpoints();
    xs.insert(xs.end(), b.begin(), b.end());
  }
  return unique_abscissae(std::move(xs));
}

GraphCombination GraphCombination::scaled(double c) const {
  std::vector<Term> terms = terms_;
  for (auto& t : terms) t.weight *= c;
  return GraphCombination(interval_, std::move(terms));
}

GraphCombination operator+(const GraphCombination& lhs, const GraphCombination& rhs) {
  if (!(lhs.interval_ == rhs.interval_)) {
    throw DomainMismatchError("combination sum: different intervals");
  }
  std::vector<Term> terms = lhs.terms_;
  terms.insert(terms.end(), rhs.terms_.begin(), rhs.terms_.end());
  return GraphCombination(lhs.interval_, std::move(terms));
}

double ColumnProfile::level_at(double t) const {
  if (levels.empty() || t <= breakpoints.front() || t >= breakpoints.back()) return 0.0;
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
  return levels[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

ColumnProfile make_profile(double x, std::vector<double> breakpoints, std::vector<double> levels) {
  if (levels.empty()) return ColumnProfile{x, {}, {}};
  if (breakpoints.size() != levels.size() + 1) {
    throw ValidationError("profile: need one more breakpoint than levels");
  }
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (!std::isfinite(breakpoints[i]) || (i < levels.size() && !std::isfinite(levels[i]))) {
      throw ValidationError("profile: non-finite entry");
    }
    if (i > 0 && !(breakpoints[i - 1] < breakpoints[i])) {
      throw ValidationError("profile: breakpoints must be strictly increasing");
    }
  }
  const double tol = level_tol(levels);

  ColumnProfile out{x, {breakpoints.front()}, {}};
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double level = std::abs(levels[i]) <= tol ? 0.0 : levels[i];
    if (!out.levels.empty() && std::abs(out.levels.back() - level) <= tol) {
      out.breakpoints.back() = breakpoints[i + 1];
      continue;
    }
    out.levels.push_back(level);
    out.breakpoints.push_back(breakpoints[i + 1]);
  }
  while (!out.levels.empty() && out.levels.back() == 0.0) {
    out.levels.pop_back();
    out.breakpoints.pop_back();
  }
  std::size_t lead = 0;
  while (lead < out.levels.size() && out.levels[lead] == 0.0) ++lead;
  out.levels.erase(out.levels.begin(), out.levels.begin() + static_cast<std::ptrdiff_t>(lead));
  out.breakpoints.erase(out.breakpoints.begin(),
                        out.breakpoints.begin() + static_cast<std::ptrdiff_t>(lead));
  if (out.levels.empty()) out.breakpoints.clear();
  return out;
}

ColumnProfile slice_profile(const GraphCombination& t, double x) {
  const Interval iv = t.interval();
  if (!(iv.a < x && x < iv.b)) throw DomainError("slice_profile: x outside the open interval");

  std::vector<std::pair<double, double>> events;  // (t, change of level)
  for (const auto& term : t.terms()) {
    const auto j = term.func.jump_near(x, kAbscissaTol);
    if (!j) continue;
    const double lo = std::min(j->left, j->right);
    const double hi = std::max(j->left, j->right);
    const double sign = j->left < j->right ? 1.0 : -1.0;
    events.emplace_back(lo, sign * term.weight);
    events.emplace_back(hi, -sign * term.weight);
  }
  if (events.empty()) return ColumnProfile{x, {}, {}};
  std::sort(events.begin(), events.end());

  std::vector<double> points;
  std::vector<double> after;  // level right after each point
  double running = 0.0;
  for (const auto& [at, delta] : events) {
    running += delta;
    if (!points.empty() && at - points.back() <= kTraceMergeTol) {
      after.back() = running;
    } else {
      points.push_back(at);
      after.push_back(running);
    }
  }
  after.pop_back();
  return make_profile(x, std::move(points), std::move(after));
}

ColumnProfile add_profiles(const ColumnProfile& p, const ColumnProfile& q) {
  const double x = p.empty() ? q.x : p.x;
  std::vector<double> grid = p.breakpoints;
  grid.insert(grid.end(), q.breakpoints.begin(), q.breakpoints.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.size() < 2) return ColumnProfile{x, {}, {}};
  std::vector<double> levels;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double mid = 0.5 * (grid[i] + grid[i + 1]);
    levels.push_back(p.level_at(mid) + q.level_at(mid));
  }
  return make_profile(x, std::move(grid), std::move(levels));
}

bool profiles_equal(const ColumnProfile& p, const ColumnProfile& q, double tol) {
  std::vector<double> grid = p.breakpoints;
  grid.insert(grid.end(), q.breakpoints.begin(), q.breakpoints.end());
  std::sort(grid.begin(), grid.end());
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (grid[i + 1] - grid[i] <= tol) continue;
    const double mid = 0.5 * (grid[i] + grid[i + 1]);
    if (std::abs(p.level_at(mid) - q.level_at(mid)) > tol) return false;
  }
  return true;
}

BranchForm branch_form(const GraphCombination& t) {
  const auto grid = t.breakpoints();
  return branch_form(t, grid);
}

BranchForm branch_form(const GraphCombination& t, std::span<const double> grid) {
  BranchForm form;
  for (std::size_t c = 0; c + 1 < grid.size(); ++c) {
    BranchCell cell{grid[c], grid[c + 1], {}};
    const double mid = 0.5 * (cell.x0 + cell.x1);
    for (const auto& term : t.terms()) {
      const LinearSegment s = term.func.segment_at(mid);
      cell.branches.push_back({s.at(cell.x0), s.at(cell.x1), term.weight});
    }
    canonicalize(cell.branches, kTraceMergeTol);
    form.cells.push_back(std::move(cell));
  }
  return form;
}

bool branch_forms_equal(const BranchForm& lhs, const BranchForm& rhs, double tol) {
  const auto grid = union_grid(lhs, rhs);
  for (std::size_t c = 0; c + 1 < grid.size(); ++c) {
    if (!branch_lists_equal(branches_on(lhs, grid[c], grid[c + 1]),
                            branches_on(rhs, grid[c], grid[c + 1]), tol)) {
      return false;
    }
  }
  return true;
}

bool current_equal(const GraphCombination& lhs, const GraphCombination& rhs, double tol) {
  if (!(lhs.interval() == rhs.interval())) return false;
  auto grid = lhs.breakpoints();
  const auto rb = rhs.breakpoints();
  grid.insert(grid.end(), rb.begin(), rb.end());
  grid = unique_abscissae(std::move(grid));
  if (!branch_forms_equal(branch_form(lhs, grid), branch_form(rhs, grid), tol)) return false;

  auto columns = lhs.jump_abscissae();
  const auto rj = rhs.jump_abscissae();
  columns.insert(columns.end(), rj.begin(), rj.end());
  for (double x : unique_abscissae(std::move(columns))) {
    if (!profiles_equal(slice_profile(lhs, x), slice_profile(rhs, x), tol)) return false;
  }
  return true;
}

std::optional<std::pair<double, double>> cancellation_overlap(const Jump& p, const Jump& q) {
  const bool p_up = p.left < p.right;
  const bool q_up = q.left < q.right;
  if (p_up == q_up) return std::nullopt;
  const double lo = std::max(std::min(p.left, p.right), std::min(q.left, q.right));
  const double hi = std::min(std::max(p.left, p.right), std::max(q.left, q.right));
  if (hi - lo <= kAdjacencyTol) return std::nullopt;
  return std::make_pair(lo, hi);
}

double mass(const GraphCombination& t) {
  double total = 0.0;
  for (const auto& term : t.terms()) {
    double m = 0.0;
    for (const auto& p : term.func.pieces()) {
      for (std::size_t k = 1; k < p.nodes.size(); ++k) {
        m += std::hypot(p.nodes[k] - p.nodes[k - 1], p.values[k] - p.values[k - 1]);
      }
    }
    for (const auto& j : term.func.jumps()) m += std::abs(j.right - j.left);
    total += term.weight * m;
  }
  return total;
}

OutsideRestriction restrict_outside(const GraphCombination& t, const Domain& d) {
  if (!(t.interval() == d.outer())) {
    throw DomainMismatchError("restrict_outside: combination and domain differ");
  }
  OutsideRestriction r;
  r.left = collar_form(t, d.a(), d.inner_a());
  r.right = collar_form(t, d.inner_b(), d.b());
  for (double x : t.jump_abscissae()) {
    if (!d.in_collar(x)) continue;
    auto p = slice_profile(t, x);
    if (!p.empty()) r.columns.push_back(std::move(p));
  }
  return r;
}

bool restrictions_equal(const OutsideRestriction& lhs, const OutsideRestriction& rhs, double tol) {
  if (!branch_forms_equal(lhs.left, rhs.left, tol)) return false;
  if (!branch_forms_equal(lhs.right, rhs.right, tol)) return false;
  std::vector<double> xs;
  for (const auto& c : lhs.columns) xs.push_back(c.x);
  for (const auto& c : rhs.columns) xs.push_back(c.x);
  for (double x : unique_abscissae(std::move(xs))) {
    const ColumnProfile empty{x, {}, {}};
    const ColumnProfile* p = find_column(lhs.columns, x);
    const ColumnProfile* q = find_column(rhs.columns, x);
    if (!profiles_equal(p ? *p : empty, q ? *q : empty, tol)) return false;
  }
  return true;
}

}  // namespace mslift
