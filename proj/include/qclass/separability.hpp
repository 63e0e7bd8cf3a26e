#pragma once

// Separability of two-qubit states.  Two routes are provided and kept
// independent of each other: the matrix-level partial-transpose test (exact
// for two qubits) and the closed-form inequalities on X-state spectral/angle
// coordinates.  Absolute separability — separability for every choice of
// the mixing angles — depends on the eigenvalue pairs alone.

#include "qclass/matrix.hpp"
#include "qclass/tolerances.hpp"
#include "qclass/xstate.hpp"

namespace qclass {

struct SeparabilityVerdict {
  bool separable = false;
  // Signed slack of the tightest criterion.  For the matrix test this is the
  // minimum eigenvalue of the partial transpose; for the inequality test the
  // smaller of the two inequality slacks (units of probability squared).
  double margin = 0.0;
};

// Throws ValidationError unless rho is Hermitian with unit trace and PSD
// within tolerance.
void require_density_matrix(const Mat4& rho, const Tolerances& tol = default_tolerances());

// Partial-transpose test.  Input must be a valid density matrix (Hermitian,
// unit trace, PSD within tolerance); throws ValidationError otherwise.
SeparabilityVerdict ppt_separable(const Mat4& rho,
                                  const Tolerances& tol = default_tolerances());

// Closed-form test on X-state coordinates: separable iff
//   (r1-r2)^2 cos^2(phi1) + (r3-r4)^2 sin^2(phi2) <= (r1+r2)^2   and
//   (r3-r4)^2 cos^2(phi2) + (r1-r2)^2 sin^2(phi1) <= (r3+r4)^2.
// Phase angles psi do not enter.
SeparabilityVerdict x_separable_inequalities(const XParams& p,
                                             const Tolerances& tol = default_tolerances());

// Angle-independent criterion on block-paired eigenvalues (each pair sorted
// descending):  (r1-r2)^2 <= 4 r3 r4  and  (r3-r4)^2 <= 4 r1 r2.
// Equality counts as inside (the set is closed).
bool absolutely_separable(double r1, double r2, double r3, double r4,
                          const Tolerances& tol = default_tolerances());

// Convenience wrapper evaluating the same criterion on the spectrum sorted
// into descending order, i.e. with pairs (s1,s2) and (s3,s4) of the
// fundamental-simplex ordering.  The block-paired and sorted views can
// disagree for spectra whose pairs interleave; both are exposed on purpose.
bool absolutely_separable_sorted(const Spectrum4& spectrum,
                                 const Tolerances& tol = default_tolerances());

// Signed slack of the angle-independent criterion (minimum of the two
// slacks); >= 0 iff absolutely separable.
double absolute_separability_margin(double r1, double r2, double r3, double r4);

}  // namespace qclass
