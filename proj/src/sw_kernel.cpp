#include "qclass/sw_kernel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qclass/errors.hpp"
#include "qclass/tensor_ops.hpp"

namespace qclass {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

}  // namespace

double pair_d14_limit() { return 3.0 / (2.0 * std::numbers::sqrt2); }

double pair_d23_limit(double d14) {
  const double rad = 9.0 - 8.0 * d14 * d14;
  return rad <= 0.0 ? 0.0 : std::sqrt(rad) / (2.0 * std::numbers::sqrt2);
}

void require_pair_moduli(const PairModuli& m, const Tolerances& tol) {
  if (!std::isfinite(m.d14) || !std::isfinite(m.d23))
    throw ModuliDomainError("pair moduli must be finite");
  if (m.d14 < -tol.boundary || m.d23 < -tol.boundary)
    throw ModuliDomainError("pair moduli are magnitudes and must be nonnegative");
  if (m.d14 >= pair_d14_limit() + tol.boundary)
    throw ModuliDomainError("d14 = " + fmt(m.d14) + " outside moduli space: limit is 3/(2 sqrt 2) = " +
                            fmt(pair_d14_limit()));
  const double lim = pair_d23_limit(m.d14);
  if (m.d23 > lim + tol.boundary)
    throw ModuliDomainError("d23 = " + fmt(m.d23) + " outside moduli space: limit at d14 = " +
                            fmt(m.d14) + " is " + fmt(lim));
}

void require_quatrit_moduli(const QuatritModuli& m, const Tolerances& tol) {
  if (!std::isfinite(m.pi1) || !std::isfinite(m.pi2))
    throw ModuliDomainError("quatrit moduli must be finite");
  const double disc = m.discriminant();
  if (disc < -tol.boundary)
    throw ModuliDomainError("quatrit moduli (" + fmt(m.pi1) + ", " + fmt(m.pi2) +
                            ") outside moduli space: discriminant = " + fmt(disc));
}

QuatritSpectrumResult quatrit_spectrum(const QuatritModuli& m, const Tolerances& tol) {
  require_quatrit_moduli(m, tol);
  const double disc = std::max(0.0, m.discriminant());
  const double mid = 0.5 * (1.0 - m.pi1 - m.pi2);
  const double half = 0.5 * std::sqrt(disc);
  QuatritSpectrumResult r;
  r.root_plus = mid + half;
  r.root_minus = mid - half;
  r.spectrum.v = {m.pi1, m.pi2, r.root_plus, r.root_minus};
  r.spectrum.order = SpectrumOrder::unsorted;
  return r;
}

Spectrum4 pair_spectrum(const PairModuli& m, const Tolerances& tol) {
  require_pair_moduli(m, tol);
  const double delta_sq = m.d14 * m.d14 + m.d23 * m.d23;
  const double q = std::sqrt(std::max(0.0, 9.0 - 8.0 * delta_sq));
  const double s = std::sqrt(3.0 + 4.0 * m.d23 * m.d23);
  Spectrum4 pi;
  pi.v[0] = 0.25 + m.d14 + 0.25 * q;
  pi.v[2] = 0.25 - m.d14 + 0.25 * q;
  pi.v[1] = 0.25 * (1.0 + 2.0 * s - q);
  pi.v[3] = 0.25 * (1.0 - 2.0 * s - q);
  pi.order = SpectrumOrder::unsorted;
  return pi;
}

SWKernel build_pair_kernel(const PairModuli& m, const Tolerances& tol) {
  const Spectrum4 pi = pair_spectrum(m, tol);
  const double q = std::sqrt(std::max(0.0, 9.0 - 8.0 * (m.d14 * m.d14 + m.d23 * m.d23)));
  const double s3 = std::numbers::sqrt3;

  SWKernel k;
  k.kind = KernelKind::pair;
  k.spectrum = pi;
  k.matrix(0, 0) = 0.25 * (1.0 + q);
  k.matrix(3, 3) = 0.25 * (1.0 + q);
  k.matrix(1, 1) = 0.25 * (1.0 + 2.0 * s3 - q);
  k.matrix(2, 2) = 0.25 * (1.0 - 2.0 * s3 - q);
  k.matrix(0, 3) = m.d14;
  k.matrix(3, 0) = m.d14;
  k.matrix(1, 2) = m.d23;
  k.matrix(2, 1) = m.d23;
  k.moduli = {m.d14, m.d23};
  k.boundary = (m.d14 >= pair_d14_limit() - tol.boundary) ||
               (m.d23 >= pair_d23_limit(m.d14) - tol.boundary);
  return k;
}

SWKernel build_quatrit_kernel(const QuatritModuli& m, const Tolerances& tol) {
  const QuatritSpectrumResult r = quatrit_spectrum(m, tol);
  SWKernel k;
  k.kind = KernelKind::quatrit;
  k.spectrum = r.spectrum;
  k.matrix = Mat4::diagonal(r.spectrum.v);
  k.moduli = {m.pi1, m.pi2};
  k.boundary = m.discriminant() <= tol.boundary;
  return k;
}

bool KernelResiduals::pass(const Tolerances& tol) const {
  return sum_residual <= tol.kernel_residual && sum_sq_residual <= tol.kernel_residual &&
         reduced_a_residual <= tol.kernel_residual &&
         reduced_b_residual <= tol.kernel_residual;
}

KernelResiduals validate_kernel(const SWKernel& k) {
  KernelResiduals r;
  r.sum_residual = std::abs(k.spectrum.sum() - 1.0);
  r.sum_sq_residual = std::abs(k.spectrum.sum_sq() - 4.0);
  if (k.kind == KernelKind::pair) {
    const Mat2 da = partial_trace(k.matrix, Subsystem::A);
    const Mat2 db = partial_trace(k.matrix, Subsystem::B);
    r.reduced_a_residual = std::abs(trace(da * da).real() - 2.0);
    r.reduced_b_residual = std::abs(trace(db * db).real() - 2.0);
  }
  return r;
}

QuatritModuli embed_pair_in_quatrit(const PairModuli& m, const Tolerances& tol) {
  const Spectrum4 sorted = pair_spectrum(m, tol).sorted_descending();
  return QuatritModuli{sorted.v[0], sorted.v[1]};
}

bool pair_image_contains(const QuatritModuli& m, double tol) {
  if (m.discriminant() < -tol) return false;
  QuatritSpectrumResult full;
  try {
    full = quatrit_spectrum(m);
  } catch (const ModuliDomainError&) {
    return false;
  }
  // the embedding reads the moduli off the sorted spectrum, so the queried
  // values (up to their own swap) must be the two largest eigenvalues
  if (std::min(m.pi1, m.pi2) < full.root_plus - tol) return false;
  const Spectrum4 s = full.spectrum.sorted_descending();
  const double s3 = std::numbers::sqrt3;
  // splits of the sorted values into two descending pairs
  static constexpr int splits[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
  for (const auto& sp : splits) {
    const double pairs[2][2] = {{s.v[sp[0]], s.v[sp[1]]}, {s.v[sp[2]], s.v[sp[3]]}};
    for (int outer = 0; outer < 2; ++outer) {
      const double a = pairs[outer][0], b = pairs[outer][1];
      const double c = pairs[1 - outer][0], d = pairs[1 - outer][1];
      const double q = 2.0 * (a + b) - 1.0;  // = sqrt(9 - 8 delta^2) if consistent
      if (q < -tol) continue;
      if (c - d < s3 - tol) continue;
      return true;
    }
  }
  return false;
}

}  // namespace qclass
