#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace mslift {

/// Open interval (a, b) on which functions live.
struct Interval {
  double a = 0.0;
  double b = 1.0;

  bool operator==(const Interval&) const = default;
};

/// The outer interval I = (a, b) together with the compactly contained
/// inner interval I' = (inner_a, inner_b) where competitors may differ.
class Domain {
 public:
  Domain(double a, double b, double inner_a, double inner_b);

  double a() const { return a_; }
  double b() const { return b_; }
  double inner_a() const { return inner_a_; }
  double inner_b() const { return inner_b_; }
  Interval outer() const { return {a_, b_}; }

  /// True for x in (a, inner_a] or [inner_b, b): the closed complement of I'.
  bool in_collar(double x) const;

 private:
  double a_, b_, inner_a_, inner_b_;
};

/// One continuous piece: the linear interpolant of (nodes, values).
struct Piece {
  std::vector<double> nodes;
  std::vector<double> values;

  double first_node() const { return nodes.front(); }
  double last_node() const { return nodes.back(); }
  double first_value() const { return values.front(); }
  double last_value() const { return values.back(); }

  /// Linear interpolation; x is clamped to the piece.
  double at(double x) const;
};

/// A straight segment (x0, y0)-(x1, y1) of a graph.
struct LinearSegment {
  double x0, x1, y0, y1;

  double slope() const { return (y1 - y0) / (x1 - x0); }
  double at(double x) const;
};

struct Jump {
  double x;
  double left;
  double right;
};

/// Piecewise-linear SBV function with finitely many jumps.
///
/// Pieces tile the interval; the abscissa shared by consecutive pieces is a
/// jump point. The constructor normalizes the representation: pieces whose
/// shared traces agree within kTraceMergeTol are merged, and interior nodes
/// collinear with their neighbours are dropped. Two functions with the same
/// graph therefore have the same representation.
class SbvFunction {
 public:
  SbvFunction(Interval interval, std::vector<Piece> pieces);

  static SbvFunction constant(Interval interval, double c);
  static SbvFunction linear(Interval interval, double value_a, double value_b);
  /// c_left on (a, x), c_right on (x, b).
  static SbvFunction step(Interval interval, double x, double c_left, double c_right);

  const Interval& interval() const { return interval_; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  /// Sorted jump points with traces; left != right for every entry.
  std::vector<Jump> jumps() const;

  /// The jump located within tol of x, if any.
  std::optional<Jump> jump_near(double x, double tol) const;

  /// One-sided limits. left_trace needs x in (a, b], right_trace x in [a, b).
  double left_trace(double x) const;
  double right_trace(double x) const;

  /// The straight segment of the graph whose open x-range contains x.
  LinearSegment segment_at(double x) const;

  /// Every node abscissa, including jump points and the endpoints.
  std::vector<double> breakpoints() const;

  /// Pieces restricted to [lo, hi]; cuts inside a piece get interpolated nodes.
  std::vector<Piece> pieces_between(double lo, double hi) const;

 private:
  std::size_t piece_from_left(double x) const;
  std::size_t piece_from_right(double x) const;

  Interval interval_;
  std::vector<Piece> pieces_;
};

/// Function equal to `left` on (a, x) and to `right` on (x, b). With `join`,
/// the right trace at x is replaced by the left one so the result is
/// continuous there (used when the two traces already agree up to tolerance).
SbvFunction splice(const SbvFunction& left, const SbvFunction& right, double x, bool join = false);

/// True when both functions describe the same graph up to tol (pointwise on
/// the common refinement, one-sided at every breakpoint).
bool same_graph(const SbvFunction& u, const SbvFunction& v, double tol);

/// The datum g of the fidelity term.
class Measurement {
 public:
  explicit Measurement(SbvFunction g) : g_(std::move(g)) {}

  const SbvFunction& function() const { return g_; }
  const Interval& interval() const { return g_.interval(); }

 private:
  SbvFunction g_;
};

struct MsParams {
  double alpha;  ///< jump penalty, > 0
  double beta;   ///< fidelity weight, >= 0

  MsParams(double alpha, double beta);
};

/// int (u')^2 over the interval.
double dirichlet_energy(const SbvFunction& u);

/// int (u - g)^2 over the interval, exact on the common refinement.
double fidelity_energy(const SbvFunction& u, const Measurement& g);

/// int (u')^2 + beta int (u - g)^2.
double regular_energy(const SbvFunction& u, const Measurement& g, const MsParams& p);

/// regular_energy + alpha * #S_u.
double ms_energy(const SbvFunction& u, const Measurement& g, const MsParams& p);

std::vector<Jump> jump_set(const SbvFunction& u);

/// Sorts and removes abscissae closer than kAbscissaTol to their predecessor.
std::vector<double> unique_abscissae(std::vector<double> xs);

}  // namespace mslift
