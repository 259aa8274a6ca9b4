#include <cmath>
#include <sstream>

#include "mslift/decompose.hpp"
#include "mslift/errors.hpp"
#include "mslift/lift.hpp"
#include "mslift/tolerances.hpp"

namespace mslift {

CertificateReport certify_minimality(const SbvFunction& u, const LiftParams& params, const Domain& d,
                                     std::span<const GraphCombination> competitors, double tol) {
  if (!(u.interval() == d.outer()) || !(u.interval() == params.g.interval())) {
    throw DomainMismatchError("certify_minimality: candidate, domain and measurement intervals differ");
  }
  CertificateReport report;
  report.candidate_energy = ms_energy(u, params.g, params.ms);
  const OutsideRestriction reference = restrict_outside(GraphCombination::single(u), d);

  for (std::size_t k = 0; k < competitors.size(); ++k) {
    const GraphCombination& t = competitors[k];
    Certificate cert{k};
    cert.weight_sum = t.total_weight();
    if (!(t.interval() == u.interval()) || !restrictions_equal(restrict_outside(t, d), reference, kEqualityTol)) {
      cert.verdict = Verdict::kBoundaryMismatch;
      report.certificates.push_back(cert);
      continue;
    }

    const Decomposition dec = decompose(t, params);
    cert.parts = dec.parts.size();
    cert.lifted_energy = dec.checks.lifted_energy;
    cert.decomposed_energy = dec.checks.parts_energy;
    const double mu_sum = dec.weight_sum();
    if (std::abs(mu_sum - 1.0) > kEqualityTol) {
      std::ostringstream os;
      os << "certify_minimality: competitor " << k << " decomposes with weight sum " << mu_sum;
      throw VerificationError(os.str(), mu_sum - 1.0);
    }
    for (std::size_t i = 0; i < dec.parts.size(); ++i) {
      const auto part = restrict_outside(GraphCombination::single(dec.parts[i].w), d);
      if (!restrictions_equal(part, reference, kEqualityTol)) {
        std::ostringstream os;
        os << "certify_minimality: part " << i << " of competitor " << k
           << " differs from the candidate outside the inner interval";
        throw VerificationError(os.str(), dec.parts[i].mu);
      }
    }
    cert.margin = cert.lifted_energy - report.candidate_energy;
    cert.verdict = cert.margin >= -tol ? Verdict::kCertified : Verdict::kNotCertified;
    if (cert.verdict == Verdict::kNotCertified) report.certified = false;
    report.certificates.push_back(cert);
  }
  return report;
}

}  // namespace mslift
