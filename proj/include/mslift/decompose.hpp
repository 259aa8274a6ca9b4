#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mslift/currents.hpp"
#include "mslift/lift.hpp"

namespace mslift {

enum class StepKind {
  kCancellationSwap,  ///< alternating tail swap of two cancelling graphs
  kPeel,              ///< one equal-weight layer split off
  kAdjacentSwap,      ///< tail swap of an adjacent pair inside a layer
  kRematch,           ///< cross-layer re-pairing of left and right branches at a column
};

std::string to_string(StepKind k);

struct ProvenanceStep {
  StepKind kind;
  std::size_t layer = 0;
  double x = 0.0;  ///< column (first cancellation point for kCancellationSwap)
  std::size_t i = 0;
  std::size_t j = 0;
  double weight = 0.0;
};

struct DecompositionPart {
  double mu;
  SbvFunction w;
};

struct DecompositionChecks {
  bool current_equal = false;
  double energy_gap = 0.0;       ///< |G(T) - sum mu_i F(w_i)|
  double lifted_energy = 0.0;    ///< G(T)
  double parts_energy = 0.0;     ///< sum mu_i F(w_i)
  double weight_gap = 0.0;       ///< |sum mu_i - sum lambda_i|
};

struct Decomposition {
  Interval interval;
  std::vector<DecompositionPart> parts;
  std::vector<ProvenanceStep> provenance;
  DecompositionChecks checks;

  GraphCombination as_combination() const;
  double weight_sum() const;
};

/// Number of term pairs (i < j) that cancel at one or more common jump points.
std::size_t count_cancelling_pairs(const GraphCombination& t);

/// sum_x ( sum_i w_i |jump_i(x)| - int |profile_x| ): the vertical mass lost
/// to cancellation. Zero iff the representation has no cancellation.
double cancelled_vertical_mass(const GraphCombination& t);

bool has_cancellation(const GraphCombination& t);

/// Rewrites T without cancellation on the jumps. Sweeps the jump columns
/// left to right; at every column where two terms cancel, the strands built
/// so far are re-coupled to the input tails in value order, which pairs
/// each unit of left mass with the right mass of the same rank.
GraphCombination remove_cancellation(const GraphCombination& t,
                                     std::vector<ProvenanceStep>* log = nullptr);

/// Tail swaps at every jump point until no pair satisfies u_i^r(p) = u_j^l(p).
/// Requires equal weights and no cancellation.
GraphCombination swap_adjacent_block(const GraphCombination& t,
                                     std::vector<ProvenanceStep>* log = nullptr,
                                     std::size_t layer = 0);

/// Ascending-weight layers (l_(j) - l_(j-1)) * (Gamma_(j) + ... + Gamma_(k)).
/// Weights within kLayerWeightRelTol (relative) share one layer.
std::vector<GraphCombination> peel_layers(const GraphCombination& t);

/// At every column where the weighted jump count exceeds the positive
/// variation of the slice, re-pairs left and right branches so that equal
/// traces are joined first. Leaves every other column untouched.
GraphCombination rematch_columns(const GraphCombination& t,
                                 std::vector<ProvenanceStep>* log = nullptr);

/// T = sum mu_i Gamma_{w_i} with G(T) = sum mu_i F(w_i), verified.
/// Throws VerificationError carrying the residual if either check fails.
Decomposition decompose(const GraphCombination& t, const LiftParams& params);

}  // namespace mslift
