#include "qclass/separability.hpp"

#include <cmath>
#include <string>

#include "qclass/eigen.hpp"
#include "qclass/errors.hpp"
#include "qclass/tensor_ops.hpp"

namespace qclass {

void require_density_matrix(const Mat4& rho, const Tolerances& tol) {
  require_hermitian(rho, tol.hermiticity);
  const double tr = trace(rho).real();
  if (std::abs(tr - 1.0) > tol.simplex)
    throw ValidationError("density matrix trace residual " + std::to_string(tr - 1.0) +
                          " exceeds tolerance");
  const auto eig = eigh_4(rho, tol);
  if (eig.eigenvalues.min() < -tol.psd)
    throw ValidationError("density matrix has negative eigenvalue " +
                          std::to_string(eig.eigenvalues.min()));
}

SeparabilityVerdict ppt_separable(const Mat4& rho, const Tolerances& tol) {
  require_density_matrix(rho, tol);
  const auto eig = eigh_4(partial_transpose(rho, Subsystem::B), tol);
  SeparabilityVerdict v;
  v.margin = eig.eigenvalues.min();
  v.separable = v.margin >= -tol.boundary;
  return v;
}

SeparabilityVerdict x_separable_inequalities(const XParams& p, const Tolerances& tol) {
  validate_xparams(p, tol);
  const double g1 = p.r.v[0] - p.r.v[1];  // outer block gap
  const double g2 = p.r.v[2] - p.r.v[3];  // inner block gap
  const double s1 = p.r.v[0] + p.r.v[1];
  const double s2 = p.r.v[2] + p.r.v[3];
  const double c1 = std::cos(p.phi1), sn1 = std::sin(p.phi1);
  const double c2 = std::cos(p.phi2), sn2 = std::sin(p.phi2);

  const double slack_outer = s1 * s1 - (g1 * g1 * c1 * c1 + g2 * g2 * sn2 * sn2);
  const double slack_inner = s2 * s2 - (g2 * g2 * c2 * c2 + g1 * g1 * sn1 * sn1);

  SeparabilityVerdict v;
  v.margin = std::min(slack_outer, slack_inner);
  v.separable = v.margin >= -tol.boundary;
  return v;
}

double absolute_separability_margin(double r1, double r2, double r3, double r4) {
  const double a = 4.0 * r3 * r4 - (r1 - r2) * (r1 - r2);
  const double b = 4.0 * r1 * r2 - (r3 - r4) * (r3 - r4);
  return std::min(a, b);
}

bool absolutely_separable(double r1, double r2, double r3, double r4,
                          const Tolerances& tol) {
  return absolute_separability_margin(r1, r2, r3, r4) >= -tol.boundary;
}

bool absolutely_separable_sorted(const Spectrum4& spectrum, const Tolerances& tol) {
  const Spectrum4 s = spectrum.sorted_descending();
  return absolutely_separable(s.v[0], s.v[1], s.v[2], s.v[3], tol);
}

}  // namespace qclass
