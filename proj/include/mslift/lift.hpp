#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mslift/currents.hpp"
#include "mslift/sbv.hpp"

namespace mslift {

struct LiftParams {
  MsParams ms;
  Measurement g;
};

/// Sum of the positive increments of the level step function, counting the
/// rise from 0 before the first interval and the return to 0 after the last.
double positive_variation(const ColumnProfile& p);

/// Exact singular energy of one column: alpha * positive_variation(p).
double column_energy(const ColumnProfile& p, double alpha);

/// The same supremum computed independently as a linear program over fields
/// that are constant on each profile interval. At most 40 intervals.
double column_energy_oracle(const ColumnProfile& p, double alpha);

inline constexpr std::size_t kOracleMaxIntervals = 40;

/// alpha * (sum of local maxima - sum of minima between consecutive maxima),
/// for profiles whose levels all share one sign.
double maxmin_energy(const ColumnProfile& p, double alpha);

struct CalibrationSegment {
  double t0;
  double t1;
  double phi_x;
};

/// Admissible field on one column. phi_x is piecewise constant on `segments`
/// and zero elsewhere; phi_t follows the equality branch of the pointwise
/// constraint, phi_t = phi_x^2 / 4 - beta (t - g(x))^2.
struct ColumnCalibration {
  double x = 0.0;
  double g_value = 0.0;
  double beta = 0.0;
  std::vector<CalibrationSegment> segments;

  double phi_x(double t) const;
  double phi_t(double t) const;

  /// max - min of t -> int_{-inf}^t phi_x; the field is admissible iff this
  /// is at most alpha.
  double running_integral_oscillation() const;

  /// int <phi, nu_T> d||T|| over the column carrying `p`.
  double flux(const ColumnProfile& p) const;

  bool admissible(double alpha, double tol) const {
    return running_integral_oscillation() <= alpha + tol;
  }
};

/// Field attaining column_energy(p, alpha). On a single-orientation profile
/// this is +alpha/width on every local-maximum run and -alpha/width on every
/// minimum run between maxima (signs mirrored for down-jumps). On mixed
/// columns the running integral is pinned low at rises and high at falls,
/// which extends the same construction to every merged profile.
ColumnCalibration build_column_calibration(const ColumnProfile& p, const LiftParams& params);

/// As above for the column of t at x. Throws PreconditionError naming the
/// overlapping t-interval when two terms cancel on their jumps there.
ColumnCalibration build_column_calibration(const GraphCombination& t, double x,
                                           const LiftParams& params);

struct ColumnReport {
  double x;
  double energy;
  ColumnProfile profile;
};

struct LiftReport {
  double total = 0.0;
  double regular = 0.0;
  double singular = 0.0;
  std::vector<ColumnReport> columns;
};

/// G(T) = sum_i w_i * regular_energy(u_i) + sum over jump columns of
/// column_energy(slice_profile(T, x)).
LiftReport evaluate(const GraphCombination& t, const LiftParams& params);

enum class Verdict { kCertified, kNotCertified, kBoundaryMismatch };

std::string to_string(Verdict v);

struct Certificate {
  std::size_t competitor_id;
  double weight_sum = 0.0;
  double lifted_energy = 0.0;    ///< G(T)
  double decomposed_energy = 0.0;  ///< sum mu_i F(w_i)
  double margin = 0.0;           ///< G(T) - F(u)
  std::size_t parts = 0;
  Verdict verdict = Verdict::kBoundaryMismatch;
};

struct CertificateReport {
  double candidate_energy = 0.0;  ///< F(u)
  std::vector<Certificate> certificates;
  bool certified = true;
};

/// For every competitor T agreeing with Gamma_u on the collar (I \ I') x R:
/// decomposes T = sum mu_i Gamma_{w_i}, checks sum mu_i = 1 and w_i = u on the
/// collar, and records G(T) - F(u). Competitors that differ from Gamma_u on
/// the collar are reported with a boundary-mismatch verdict. Inconsistent
/// decompositions throw VerificationError.
CertificateReport certify_minimality(const SbvFunction& u, const LiftParams& params,
                                     const Domain& d,
                                     std::span<const GraphCombination> competitors,
                                     double tol = 1e-8);

}  // namespace mslift
