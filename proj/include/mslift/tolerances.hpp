#pragma once

namespace mslift {

/// Traces closer than this are the same value; such a "jump" is merged away.
inline constexpr double kTraceMergeTol = 1e-12;

/// Breakpoints and levels compared for current equality.
inline constexpr double kEqualityTol = 1e-9;

/// u_i^r(x) and u_j^l(x) are adjacent when they differ by at most this.
inline constexpr double kAdjacencyTol = 1e-9;

/// Relative threshold under which two weights fall into the same layer.
inline constexpr double kLayerWeightRelTol = 1e-12;

/// Abscissae closer than this are treated as one point.
inline constexpr double kAbscissaTol = 1e-12;

/// How the Dirichlet term enters the energy. The functional used throughout
/// is  int (u')^2 + beta int (u-g)^2 + alpha #S_u ; alpha weights only the
/// jump count. Reports carry this name so the convention is visible.
inline constexpr const char* kDirichletTermConvention = "unweighted";

}  // namespace mslift
