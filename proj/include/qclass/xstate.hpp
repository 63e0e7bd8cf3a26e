#pragma once

// Two-qubit X-states in both coordinate systems: the sparse matrix form
//
//   [ rho11    .      .    rho14 ]
//   [   .    rho22  rho23    .   ]
//   [   .    rho23* rho33    .   ]
//   [ rho14*   .      .    rho44 ]
//
// and the equivalent (spectrum, Euler angle) coordinates.  The matrix is a
// direct sum of two Hermitian 2x2 blocks, the outer one on rows {1,4} and
// the inner one on rows {2,3}, so each block is a rotated diagonal:
//
//   diag entries   r_hi cos^2(phi/2) + r_lo sin^2(phi/2)   (and swapped)
//   off-diagonal   e^{i psi} (r_hi - r_lo) sin(phi) / 2
//
// Eigenvalue pairs are kept per block, each pair sorted descending; no
// global order across the blocks is imposed.

#include "qclass/eigen.hpp"
#include "qclass/matrix.hpp"
#include "qclass/tolerances.hpp"

namespace qclass {

struct XState {
  double rho11 = 0.0, rho22 = 0.0, rho33 = 0.0, rho44 = 0.0;
  Complex rho14{}, rho23{};

  Mat4 to_matrix() const;
};

struct XParams {
  // r.v = (r1, r2, r3, r4): (r1, r2) outer block, (r3, r4) inner block,
  // r1 >= r2 and r3 >= r4.
  Spectrum4 r{};
  double phi1 = 0.0, phi2 = 0.0;  // mixing angles in [0, pi]
  double psi1 = 0.0, psi2 = 0.0;  // block phases in [0, 2pi)
};

// Throws ValidationError if trace, block positivity or diagonal
// nonnegativity fail.
void validate_xstate(const XState& s, const Tolerances& tol = default_tolerances());

// Throws ValidationError on an invalid simplex point or unsorted pair.
void validate_xparams(const XParams& p, const Tolerances& tol = default_tolerances());

XState x_from_params(const XParams& p, const Tolerances& tol = default_tolerances());

// Inverse conversion via the closed-form block eigensolver.  Degenerate
// blocks report angle 0.
XParams x_to_params(const XState& s);

// True iff all eight entries outside the X pattern have magnitude <= tol.
bool is_x_shape(const Mat4& m, double tol);

// Extraction from a dense matrix; requires Hermiticity and X shape.
XState xstate_from_matrix(const Mat4& m, const Tolerances& tol = default_tolerances());

}  // namespace qclass
