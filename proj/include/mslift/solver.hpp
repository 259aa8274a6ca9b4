#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mslift/currents.hpp"
#include "mslift/sbv.hpp"

namespace mslift {

/// Competitors are pinned to `boundary` on the collar (I \ I') of `domain`.
/// Only the boundary's values on the collar are used.
class DirichletSpec {
 public:
  DirichletSpec(Domain domain, SbvFunction boundary);

  const Domain& domain() const { return domain_; }
  const SbvFunction& boundary() const { return boundary_; }

 private:
  Domain domain_;
  SbvFunction boundary_;
};

struct MinimizeResult {
  SbvFunction u;
  double energy = 0.0;        ///< ms_energy(u) over the whole interval
  std::vector<double> jumps;  ///< abscissae of the jumps of u
  double runtime_ms = 0.0;
};

/// Discrete minimizer on a uniform grid of n nodes spanning I (or I' under a
/// Dirichlet spec). Jumps may sit at interior grid nodes; between jumps u is
/// the P1 finite-element minimizer of int (u')^2 + beta int (u-g)^2 with
/// natural ends, or ends pinned to the boundary traces. Dynamic programming
/// over the last jump; ties go to fewer jumps, then to the leftmost last jump.
MinimizeResult minimize(const Measurement& g, const MsParams& p,
                        const std::optional<DirichletSpec>& spec, std::size_t n);

inline constexpr std::size_t kBruteForceMaxNodes = 12;

/// Same discretization; enumerates every subset of interior jump nodes.
MinimizeResult brute_force_minimize(const Measurement& g, const MsParams& p,
                                    const std::optional<DirichletSpec>& spec, std::size_t n);

/// `count` random combinations sum lambda_i Gamma_{v_i} with sum lambda_i = 1
/// and every v_i equal to u on the collar, modified inside I' by node
/// jitter, inserted and removed jumps, and (probability at least 0.3 per
/// combination) a pair of terms made adjacent at a shared jump.
std::vector<GraphCombination> perturb_inside(const SbvFunction& u, const Domain& d, std::uint64_t seed,
                                             std::size_t count);

}  // namespace mslift
