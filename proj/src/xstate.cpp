#include "qclass/xstate.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qclass/errors.hpp"

namespace qclass {

Mat4 XState::to_matrix() const {
  Mat4 m;
  m(0, 0) = rho11;
  m(1, 1) = rho22;
  m(2, 2) = rho33;
  m(3, 3) = rho44;
  m(0, 3) = rho14;
  m(3, 0) = std::conj(rho14);
  m(1, 2) = rho23;
  m(2, 1) = std::conj(rho23);
  return m;
}

void validate_xstate(const XState& s, const Tolerances& tol) {
  const double tr = s.rho11 + s.rho22 + s.rho33 + s.rho44;
  if (std::abs(tr - 1.0) > tol.simplex)
    throw ValidationError("X-state trace residual " + std::to_string(tr - 1.0) +
                          " exceeds tolerance");
  for (double d : {s.rho11, s.rho22, s.rho33, s.rho44})
    if (d < -tol.psd) throw ValidationError("X-state has negative diagonal entry");
  if (s.rho11 * s.rho44 < std::norm(s.rho14) - tol.psd)
    throw ValidationError("outer block of X-state is not positive semidefinite");
  if (s.rho22 * s.rho33 < std::norm(s.rho23) - tol.psd)
    throw ValidationError("inner block of X-state is not positive semidefinite");
}

void validate_xparams(const XParams& p, const Tolerances& tol) {
  const auto& r = p.r.v;
  for (double x : r) {
    if (!std::isfinite(x)) throw ValidationError("non-finite eigenvalue in X parameters");
    if (x < -tol.psd) throw ValidationError("negative eigenvalue in X parameters");
  }
  const double sum = p.r.sum();
  if (std::abs(sum - 1.0) > tol.simplex)
    throw ValidationError("X parameter eigenvalues sum to " + std::to_string(sum) +
                          ", not 1");
  if (r[0] < r[1] - tol.simplex || r[2] < r[3] - tol.simplex)
    throw ValidationError("X parameter eigenvalue pairs must be sorted descending");
  for (double phi : {p.phi1, p.phi2})
    if (phi < -1e-12 || phi > std::numbers::pi + 1e-12)
      throw ValidationError("mixing angle outside [0, pi]");
}

namespace {

struct Block {
  double diag_hi, diag_lo;
  Complex off;
};

Block rotated_block(double r_hi, double r_lo, double phi, double psi) {
  const double c = std::cos(0.5 * phi);
  const double s = std::sin(0.5 * phi);
  Block b;
  b.diag_hi = r_hi * c * c + r_lo * s * s;
  b.diag_lo = r_hi * s * s + r_lo * c * c;
  b.off = std::polar(0.5 * (r_hi - r_lo) * std::sin(phi), psi);
  return b;
}

}  // namespace

XState x_from_params(const XParams& p, const Tolerances& tol) {
  validate_xparams(p, tol);
  const Block outer = rotated_block(p.r.v[0], p.r.v[1], p.phi1, p.psi1);
  const Block inner = rotated_block(p.r.v[2], p.r.v[3], p.phi2, p.psi2);
  XState s;
  s.rho11 = outer.diag_hi;
  s.rho44 = outer.diag_lo;
  s.rho14 = outer.off;
  s.rho22 = inner.diag_hi;
  s.rho33 = inner.diag_lo;
  s.rho23 = inner.off;
  return s;
}

XParams x_to_params(const XState& s) {
  const BlockEig outer = block_eig_2x2(s.rho11, s.rho44, s.rho14);
  const BlockEig inner = block_eig_2x2(s.rho22, s.rho33, s.rho23);
  XParams p;
  p.r.v = {outer.lambda_plus, outer.lambda_minus, inner.lambda_plus, inner.lambda_minus};
  p.r.order = SpectrumOrder::unsorted;
  p.phi1 = outer.mixing_angle;
  p.psi1 = outer.phase;
  p.phi2 = inner.mixing_angle;
  p.psi2 = inner.phase;
  return p;
}

bool is_x_shape(const Mat4& m, double tol) {
  static constexpr int anti[4][2] = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
  for (const auto& ij : anti) {
    if (std::abs(m(ij[0], ij[1])) > tol) return false;
    if (std::abs(m(ij[1], ij[0])) > tol) return false;
  }
  return true;
}

XState xstate_from_matrix(const Mat4& m, const Tolerances& tol) {
  require_hermitian(m, tol.hermiticity);
  if (!is_x_shape(m, tol.x_shape))
    throw ValidationError("matrix is not X-shaped within tolerance");
  XState s;
  s.rho11 = m(0, 0).real();
  s.rho22 = m(1, 1).real();
  s.rho33 = m(2, 2).real();
  s.rho44 = m(3, 3).real();
  s.rho14 = m(0, 3);
  s.rho23 = m(1, 2);
  return s;
}

}  // namespace qclass
