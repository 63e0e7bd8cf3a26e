#pragma once

// Stratonovich-Weyl kernels for a 4-level system.  A kernel spectrum
// (pi1..pi4) always satisfies the master identities
//
//   pi1 + pi2 + pi3 + pi4 = 1,      pi1^2 + ... + pi4^2 = 4.
//
// Treating the system as elementary (a "quatrit") leaves two free moduli
// (pi1, pi2); the remaining eigenvalues are
//
//   pi_{3,4} = (1 - pi1 - pi2)/2 +- sqrt(Disc)/2,
//   Disc     = 7 + 2(pi1 + pi2 - pi1 pi2) - 3(pi1^2 + pi2^2) >= 0.
//
// Treating it as a qubit pair additionally constrains both reduced kernels
// to tr(Delta_X^2) = 2.  The kernel matrix is then X-shaped and the moduli
// are the off-diagonal magnitudes d14 = |Delta_14|, d23 = |Delta_23| with
//
//   pi_{1,3} = 1/4 +- d14 + q/4,           q = sqrt(9 - 8 delta^2),
//   pi_{2,4} = (1 +- 2 sqrt(3 + 4 d23^2) - q)/4,   delta^2 = d14^2 + d23^2,
//
// admissible for d14 < 3/(2 sqrt 2) and d23 < sqrt(9 - 8 d14^2)/(2 sqrt 2)
// (equivalently delta < 3/(2 sqrt 2)); boundary points are degenerate
// limits with q = 0 and are accepted but flagged.

#include <array>

#include "qclass/matrix.hpp"
#include "qclass/tolerances.hpp"

namespace qclass {

struct QuatritModuli {
  double pi1 = 0.0;
  double pi2 = 0.0;

  double discriminant() const {
    return 7.0 + 2.0 * (pi1 + pi2 - pi1 * pi2) - 3.0 * (pi1 * pi1 + pi2 * pi2);
  }
};

struct PairModuli {
  double d14 = 0.0;
  double d23 = 0.0;

  double delta() const { return std::sqrt(d14 * d14 + d23 * d23); }
};

// Upper limit of d14 and, given d14, of d23.
double pair_d14_limit();
double pair_d23_limit(double d14);

// Throws ModuliDomainError naming the violated bound and its computed limit.
void require_pair_moduli(const PairModuli& m, const Tolerances& tol = default_tolerances());
void require_quatrit_moduli(const QuatritModuli& m,
                            const Tolerances& tol = default_tolerances());

enum class KernelKind { quatrit, pair };

struct SWKernel {
  Mat4 matrix;         // X-shaped Hermitian representative
  Spectrum4 spectrum;  // raw construction labels (pi1, pi2, pi3, pi4)
  KernelKind kind = KernelKind::quatrit;
  std::array<double, 2> moduli{};  // (d14, d23) or (pi1, pi2)
  bool boundary = false;  // within tolerance of the moduli-space boundary
};

struct QuatritSpectrumResult {
  Spectrum4 spectrum;      // (pi1, pi2, root_plus, root_minus), unsorted
  double root_plus = 0.0;  // pi3
  double root_minus = 0.0; // pi4
};

// Completes (pi1, pi2) to a full kernel spectrum; Disc within tolerance of
// zero is clamped.  Throws ModuliDomainError for Disc < -tol.
QuatritSpectrumResult quatrit_spectrum(const QuatritModuli& m,
                                       const Tolerances& tol = default_tolerances());

// Raw-labelled qubit-pair kernel spectrum.  The raw labels can violate the
// descending chain at small d14 (pi1 = pi3 there); sort when order matters.
Spectrum4 pair_spectrum(const PairModuli& m, const Tolerances& tol = default_tolerances());

// Canonical X-shaped kernel matrix for the given pair moduli:
//   Delta_11 = Delta_44 = (1+q)/4,
//   Delta_22 = (1 + 2 sqrt 3 - q)/4,  Delta_33 = (1 - 2 sqrt 3 - q)/4,
// off-diagonals d14, d23 real nonnegative.  Other sign branches of the
// reduced-kernel constraints are related by local-unitary isotropy; this
// deterministic representative satisfies all of them.
SWKernel build_pair_kernel(const PairModuli& m,
                           const Tolerances& tol = default_tolerances());

// Diagonal kernel diag(pi1, pi2, pi3, pi4) for an elementary 4-level system.
SWKernel build_quatrit_kernel(const QuatritModuli& m,
                              const Tolerances& tol = default_tolerances());

struct KernelResiduals {
  double sum_residual = 0.0;       // |sum pi - 1|
  double sum_sq_residual = 0.0;    // |sum pi^2 - 4|
  double reduced_a_residual = 0.0; // |tr(Delta_A^2) - 2|, pair kernels only
  double reduced_b_residual = 0.0; // |tr(Delta_B^2) - 2|, pair kernels only

  bool pass(const Tolerances& tol = default_tolerances()) const;
};

KernelResiduals validate_kernel(const SWKernel& k);

// Top two entries of the sorted pair spectrum, viewed as quatrit moduli.
// The image point always has nonnegative discriminant.
QuatritModuli embed_pair_in_quatrit(const PairModuli& m,
                                    const Tolerances& tol = default_tolerances());

// Membership of a quatrit moduli point in the closure of the embedded
// qubit-pair moduli image.  Exact test: complete the spectrum, then look for
// a split into two descending pairs (a,b), (c,d) with 2(a+b) - 1 >= 0 and
// c - d >= sqrt 3; the master identities make the remaining compatibility
// equation automatic.
bool pair_image_contains(const QuatritModuli& m, double tol = 1e-9);

}  // namespace qclass
