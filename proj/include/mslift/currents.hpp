#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mslift/sbv.hpp"

namespace mslift {

struct Term {
  double weight;
  SbvFunction func;
};

/// T = sum_i weight_i * Gamma_{u_i} with every weight > 0. An empty term list
/// is the zero current on its interval.
class GraphCombination {
 public:
  explicit GraphCombination(Interval interval) : interval_(interval) {}
  GraphCombination(Interval interval, std::vector<Term> terms);

  /// Interval taken from the first term; throws on an empty list.
  static GraphCombination from_terms(std::vector<Term> terms);
  static GraphCombination single(SbvFunction u, double weight = 1.0);

  const Interval& interval() const { return interval_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  double total_weight() const;

  /// S_T: the union of the terms' jump sets, sorted.
  std::vector<double> jump_abscissae() const;

  /// Every node abscissa of every term, sorted and deduplicated.
  std::vector<double> breakpoints() const;

  GraphCombination scaled(double c) const;

  /// Representation-level sum: the term lists are concatenated.
  friend GraphCombination operator+(const GraphCombination& lhs, const GraphCombination& rhs);

 private:
  Interval interval_;
  std::vector<Term> terms_;
};

/// Signed multiplicity of T on the vertical line {x} x R.
///
/// levels[i] is the multiplicity on (breakpoints[i], breakpoints[i+1]);
/// adjacent levels differ and the multiplicity is 0 outside. An up-jump of a
/// weight-w term adds +w on (u^l, u^r); a down-jump adds -w on (u^r, u^l).
struct ColumnProfile {
  double x = 0.0;
  std::vector<double> breakpoints;
  std::vector<double> levels;

  bool empty() const { return levels.empty(); }
  std::size_t intervals() const { return levels.size(); }
  double width(std::size_t i) const { return breakpoints[i + 1] - breakpoints[i]; }

  /// Multiplicity at t (0 outside, left-continuous choice irrelevant a.e.).
  double level_at(double t) const;
};

/// Builds a merged profile from raw data: coalesces equal neighbours, drops
/// zero-level end intervals. Levels within kTraceMergeTol of each other (or of
/// zero) are treated as equal.
ColumnProfile make_profile(double x, std::vector<double> breakpoints, std::vector<double> levels);

/// Throws DomainError if x is not in the open interval.
ColumnProfile slice_profile(const GraphCombination& t, double x);

/// Pointwise sum, merged.
ColumnProfile add_profiles(const ColumnProfile& p, const ColumnProfile& q);

bool profiles_equal(const ColumnProfile& p, const ColumnProfile& q, double tol);

struct Branch {
  double y0;  ///< value at the cell's left end
  double y1;  ///< value at the cell's right end
  double weight;
};

struct BranchCell {
  double x0;
  double x1;
  std::vector<Branch> branches;  ///< sorted by (y0, y1), pairwise distinct
};

/// Canonical form of T away from its jump columns: on every cell of the
/// common breakpoint refinement, the multiset of linear branches with
/// accumulated weight.
struct BranchForm {
  std::vector<BranchCell> cells;
};

BranchForm branch_form(const GraphCombination& t);

/// Branch form over a caller-supplied grid; the grid must contain every
/// breakpoint of t that lies inside [grid.front(), grid.back()].
BranchForm branch_form(const GraphCombination& t, std::span<const double> grid);

/// Cell-by-cell comparison after refining both forms onto a common grid.
bool branch_forms_equal(const BranchForm& lhs, const BranchForm& rhs, double tol);

/// Equality as currents: branch forms agree and the slice profiles agree at
/// every jump column of either side.
bool current_equal(const GraphCombination& lhs, const GraphCombination& rhs, double tol);

/// The t-interval on which two jumps at the same abscissa cancel: they point
/// in opposite directions and their vertical segments overlap in a set of
/// length > kAdjacencyTol. This covers both patterns of the classical
/// definition (partial overlap from either side) and strict containment.
std::optional<std::pair<double, double>> cancellation_overlap(const Jump& p, const Jump& q);

/// Weighted length: graph arcs plus vertical jump segments.
double mass(const GraphCombination& t);

/// T restricted to the collar (I \ I') x R.
struct OutsideRestriction {
  BranchForm left;   ///< cells covering (a, inner_a)
  BranchForm right;  ///< cells covering (inner_b, b)
  std::vector<ColumnProfile> columns;  ///< nonempty profiles at collar jump columns
};

OutsideRestriction restrict_outside(const GraphCombination& t, const Domain& d);

bool restrictions_equal(const OutsideRestriction& lhs, const OutsideRestriction& rhs, double tol);

}  // namespace mslift
