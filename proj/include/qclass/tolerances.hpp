#pragma once

namespace qclass {

// Single source of truth for every numerical tolerance used by the library.
// Tests assert against the same record, so tightening a value here tightens
// the whole suite.
struct Tolerances {
  double hermiticity = 1e-12;      // |m(i,j) - conj(m(j,i))| per entry pair
  double reconstruction = 1e-10;   // ||m - V diag(l) V^+||_F after eigh
  double unitarity = 1e-10;        // ||V V^+ - I||_F
  double simplex = 1e-12;          // trace / eigenvalue-sum residuals
  double psd = 1e-12;              // admissible negative-eigenvalue slack
  double boundary = 1e-12;         // closed-set slack (separability, moduli bounds)
  double kernel_residual = 1e-10;  // kernel master/reduced equation residuals
  double x_shape = 1e-12;          // default magnitude cap on non-X entries
  double round_trip = 1e-10;       // coordinate conversion round trips
  double vertex_dedup = 1e-10;     // polytope vertex deduplication radius
  double polytope = 1e-12;         // halfspace membership slack
  double imag_residue = 1e-10;     // allowed imaginary part of Wigner values
  double orbit_value = 1e-6;       // optimizer-grade slack for positivity verdicts
  double orbit_gradient = 1e-8;    // orbit descent convergence threshold
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

}  // namespace qclass
