#pragma once

// Hand-rolled random generators for property tests. Values and positions are
// drawn from coarse grids on purpose so that shared jump columns, equal traces
// and overlapping jump segments occur often.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mslift/currents.hpp"
#include "mslift/sbv.hpp"

namespace mslift::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  bool chance(double p) { return uniform(0.0, 1.0) < p; }
  /// Multiple of `step` in [lo, hi].
  double on_grid(double lo, double hi, double step) {
    const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
    return lo + step * integer(0, n);
  }

 private:
  std::mt19937_64 eng_;
};

/// Sorted distinct abscissae strictly inside iv, taken from `slots` equally
/// spaced positions.
inline std::vector<double> grid_points(Rng& rng, Interval iv, int count, int slots) {
  std::vector<int> idx;
  for (int i = 0; i < count; ++i) idx.push_back(rng.integer(1, slots - 1));
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  std::vector<double> xs;
  for (int i : idx) xs.push_back(iv.a + (iv.b - iv.a) * i / slots);
  return xs;
}

struct SbvShape {
  int max_pieces = 8;
  int max_inner_nodes = 2;  ///< per piece
  double lo = -3.0;
  double hi = 3.0;
  double value_step = 0.0;  ///< 0: continuous values
  int slots = 32;           ///< positions of piece boundaries
};

inline SbvFunction random_sbv(Rng& rng, Interval iv, const SbvShape& shape = {}) {
  const auto value = [&] {
    return shape.value_step > 0.0 ? rng.on_grid(shape.lo, shape.hi, shape.value_step) : rng.uniform(shape.lo, shape.hi);
  };
  std::vector<double> cuts{iv.a};
  for (double x : grid_points(rng, iv, rng.integer(0, shape.max_pieces - 1), shape.slots)) cuts.push_back(x);
  cuts.push_back(iv.b);
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Piece p;
    p.nodes.push_back(cuts[i]);
    const int inner = rng.integer(0, shape.max_inner_nodes);
    for (int k = 1; k <= inner; ++k) p.nodes.push_back(cuts[i] + (cuts[i + 1] - cuts[i]) * k / (inner + 1));
    p.nodes.push_back(cuts[i + 1]);
    for (std::size_t k = 0; k < p.nodes.size(); ++k) p.values.push_back(value());
    pieces.push_back(std::move(p));
  }
  return SbvFunction(iv, std::move(pieces));
}

/// Random merged-profile data with m intervals and levels on a 0.25 grid in [-3, 3].
inline ColumnProfile random_profile(Rng& rng, int m, bool single_orientation = false) {
  std::vector<double> bps{rng.uniform(-2.0, 0.0)};
  for (int i = 0; i < m; ++i) bps.push_back(bps.back() + rng.uniform(0.05, 1.5));
  std::vector<double> levels;
  const double sign = rng.chance(0.5) ? 1.0 : -1.0;
  for (int i = 0; i < m; ++i) {
    double l = rng.on_grid(-3.0, 3.0, 0.25);
    if (single_orientation) l = sign * std::abs(l);
    levels.push_back(l);
  }
  return make_profile(0.5, std::move(bps), std::move(levels));
}

struct ComboShape {
  int max_terms = 6;
  int max_columns = 10;  ///< |S_T| stays at or below this
  double max_weight = 3.0;
  double value_step = 1.0;
  double lo = -2.0;
  double hi = 2.0;
};

/// Terms share a pool of at most max_columns jump abscissae, and their traces
/// come from a small value grid, so cancellation and adjacency are common.
inline GraphCombination random_combination(Rng& rng, Interval iv, const ComboShape& shape = {}) {
  const auto pool = grid_points(rng, iv, shape.max_columns, 16);
  const int k = rng.integer(1, shape.max_terms);
  std::vector<Term> terms;
  for (int i = 0; i < k; ++i) {
    std::vector<double> cuts{iv.a};
    for (double x : pool) {
      if (rng.chance(0.5)) cuts.push_back(x);
    }
    cuts.push_back(iv.b);
    std::vector<Piece> pieces;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double y0 = rng.on_grid(shape.lo, shape.hi, shape.value_step);
      const double y1 = rng.chance(0.5) ? y0 : rng.on_grid(shape.lo, shape.hi, shape.value_step);
      pieces.push_back({{cuts[c], cuts[c + 1]}, {y0, y1}});
    }
    double w = rng.uniform(0.0, shape.max_weight);
    if (w <= 0.0) w = shape.max_weight;
    if (rng.chance(0.3) && !terms.empty()) w = terms.back().weight;
    terms.push_back({w, SbvFunction(iv, std::move(pieces))});
  }
  return GraphCombination(iv, std::move(terms));
}

}  // namespace mslift::testing
