#pragma once

// Eigensolvers for the fixed dimensions used throughout: a closed-form
// solver for Hermitian 2x2 blocks and a cyclic Jacobi sweep for 4x4
// Hermitian matrices.  No external linear algebra is involved.

#include "qclass/matrix.hpp"
#include "qclass/tolerances.hpp"

namespace qclass {

// Eigendecomposition of the Hermitian block [[a, c], [conj(c), d]].
//
//   lambda_pm    = (a+d)/2 +- sqrt((a-d)^2/4 + |c|^2)
//   mixing_angle = atan2(2|c|, a-d) in [0, pi]
//   phase        = arg(c) wrapped to [0, 2pi), 0 when |c| vanishes
//
// The rotation by mixing_angle/2 with the given phase maps the eigenbasis
// onto the standard basis such that lambda_plus sits in the first slot.
// Degenerate blocks (a = d, c = 0) report mixing_angle = 0.
struct BlockEig {
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  double mixing_angle = 0.0;
  double phase = 0.0;
};

BlockEig block_eig_2x2(double a, double d, Complex c);

struct EigDecomposition4 {
  Spectrum4 eigenvalues;  // descending
  Mat4 eigenvectors;      // columns, unitary; m = V diag(l) V^+
};

// Cyclic Jacobi diagonalization.  Input must be Hermitian within
// tol.hermiticity (throws ValidationError naming the entry pair otherwise).
// Ties are broken by descending eigenvalue and each eigenvector's first
// nonzero component is rotated to be real positive, so repeated runs on the
// same input give identical output.
EigDecomposition4 eigh_4(const Mat4& m, const Tolerances& tol = default_tolerances());

}  // namespace qclass
