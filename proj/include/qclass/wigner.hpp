#pragma once

// Wigner-function machinery: the dual pairing W = tr(rho U Delta U^+), its
// spectral bounds, the positivity polytope of state spectra, and numerical
// minimization of W over the local-unitary or full-unitary orbit.
//
// With r the state spectrum sorted descending and pi the kernel spectrum,
// the rearrangement bounds are
//
//   dot(r_desc, pi_asc)  <=  W  <=  dot(r_desc, pi_desc),
//
// and the lower bound is attained on the full unitary orbit.  The
// positivity polytope is the set of descending spectra with nonnegative
// lower bound, i.e. the fundamental simplex clipped by one halfspace.

#include <variant>
#include <vector>

#include "qclass/matrix.hpp"
#include "qclass/sw_kernel.hpp"
#include "qclass/tolerances.hpp"

namespace qclass {

// Local-unitary phase point: one ZYZ Euler triple per qubit factor.
struct PhasePointLU {
  double alpha1 = 0.0, beta1 = 0.0, gamma1 = 0.0;
  double alpha2 = 0.0, beta2 = 0.0, gamma2 = 0.0;

  Mat4 to_unitary() const;
  // Kronecker factorization + per-factor Euler extraction.  Valid only for
  // exact tensor-product unitaries; the result reproduces the input up to
  // per-factor global phases.
  static PhasePointLU from_unitary(const Mat4& u);
};

// Full-unitary phase point: six Givens rotations (plane order
// (0,1),(0,2),(0,3),(1,2),(1,3),(2,3), each with angle theta in [0, pi/2]
// and phase phi) followed by a diagonal phase diag(e^{i chi}, 1) factor.
// This is the inverse of plane-rotation QR, so the chart is onto U(4) up to
// global phase.
struct PhasePointFull {
  std::array<double, 6> theta{};
  std::array<double, 6> phi{};
  std::array<double, 3> chi{};

  Mat4 to_unitary() const;
  static PhasePointFull from_unitary(const Mat4& u);
};

using PhasePoint = std::variant<PhasePointLU, PhasePointFull>;

struct WignerBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Input order tags are ignored; spectra are sorted internally.
WignerBounds wf_bounds(const Spectrum4& r, const Spectrum4& pi);

// W at a phase point.  Local-unitary points require a pair kernel; full
// points work for either kind.  The imaginary residue of the trace must not
// exceed tol.imag_residue.
double wigner_value(const Mat4& rho, const SWKernel& kernel, const PhasePoint& point,
                    const Tolerances& tol = default_tolerances());

// dot(r_desc, pi_asc) >= -tol.polytope
bool polytope_contains(const Spectrum4& r, const Spectrum4& pi,
                       const Tolerances& tol = default_tolerances());

struct PositivityPolytope {
  std::vector<std::array<double, 4>> vertices;  // descending simplex points
  Spectrum4 kernel_spectrum;
};

// Vertices of the fundamental simplex clipped against the positivity
// halfspace: satisfying corners plus edge crossings, deduplicated and
// ordered lexicographically.
PositivityPolytope polytope_vertices(const Spectrum4& pi,
                                     const Tolerances& tol = default_tolerances());

enum class OrbitGroup { lu, full };

struct OrbitMinResult {
  double min_value = 0.0;
  PhasePoint argmin;
  bool converged = false;
  int restarts_used = 0;
  long evaluations = 0;
};

// Multistart Riemannian descent on W over the chosen orbit.  Steps follow
// the negative projected commutator [U Delta U^+, rho]; step sizes come from
// Armijo backtracking; restarts start from low-discrepancy chart points
// (restart 0 is the identity).  `budget` caps cost evaluations per restart.
// For the full group the analytic lower bound certifies global optimality
// and stops the search early.  The returned value never exceeds the value
// at any sampled start; `converged=false` means the budget ran out before
// the gradient tolerance was met anywhere.
OrbitMinResult min_over_orbit(const Mat4& rho, const SWKernel& kernel, OrbitGroup group,
                              int restarts, long budget,
                              const Tolerances& tol = default_tolerances());

}  // namespace qclass
