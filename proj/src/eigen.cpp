#include "qclass/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qclass {

BlockEig block_eig_2x2(double a, double d, Complex c) {
  BlockEig out;
  const double mean = 0.5 * (a + d);
  const double half_gap = 0.5 * (a - d);
  const double cm = std::abs(c);
  const double radius = std::sqrt(half_gap * half_gap + cm * cm);
  out.lambda_plus = mean + radius;
  out.lambda_minus = mean - radius;
  // atan2(0, 0) = 0 covers the fully degenerate block.
  out.mixing_angle = std::atan2(2.0 * cm, a - d);
  if (cm > 0.0) {
    out.phase = std::arg(c);
    if (out.phase < 0.0) out.phase += 2.0 * std::numbers::pi;
  }
  return out;
}

namespace {

// One similarity rotation zeroing the (p,q) entry of a Hermitian matrix.
// G differs from the identity only in the (p,q) plane:
//   G(p,p) = cos t, G(p,q) = -sin t e^{i phi}, G(q,p) = sin t e^{-i phi},
// with phi = arg A(p,q) and tan(2t) = 2|A(p,q)| / (A(p,p)-A(q,q)).
void jacobi_rotate(Mat4& A, Mat4& V, int p, int q) {
  const Complex apq = A(p, q);
  const double m = std::abs(apq);
  if (m == 0.0) return;
  const double theta = 0.5 * std::atan2(2.0 * m, A(p, p).real() - A(q, q).real());
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Complex eip = apq / m;  // e^{i phi}
  const Complex gpq = -s * eip;
  const Complex gqp = s * std::conj(eip);

  // columns: B = A G
  for (int i = 0; i < 4; ++i) {
    const Complex aip = A(i, p), aiq = A(i, q);
    A(i, p) = c * aip + gqp * aiq;
    A(i, q) = gpq * aip + c * aiq;
  }
  // rows: A' = G^+ B
  for (int j = 0; j < 4; ++j) {
    const Complex apj = A(p, j), aqj = A(q, j);
    A(p, j) = c * apj + std::conj(gqp) * aqj;
    A(q, j) = std::conj(gpq) * apj + c * aqj;
  }
  // exact zeros where the rotation is designed to produce them
  A(p, q) = 0.0;
  A(q, p) = 0.0;
  A(p, p) = A(p, p).real();
  A(q, q) = A(q, q).real();

  for (int i = 0; i < 4; ++i) {
    const Complex vip = V(i, p), viq = V(i, q);
    V(i, p) = c * vip + gqp * viq;
    V(i, q) = gpq * vip + c * viq;
  }
}

double off_diagonal_norm(const Mat4& A) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) s += std::norm(A(i, j));
  return std::sqrt(2.0 * s);
}

}  // namespace

EigDecomposition4 eigh_4(const Mat4& m, const Tolerances& tol) {
  require_hermitian(m, tol.hermiticity);
  Mat4 A = symmetrized(m);
  Mat4 V = Mat4::identity();

  const double scale = std::max(1.0, frobenius_norm(A));
  constexpr int kMaxSweeps = 60;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(A) <= 1e-15 * scale) break;
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q) jacobi_rotate(A, V, p, q);
  }

  std::array<int, 4> idx = {0, 1, 2, 3};
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int i, int j) { return A(i, i).real() > A(j, j).real(); });

  EigDecomposition4 out;
  out.eigenvalues.order = SpectrumOrder::descending;
  for (int k = 0; k < 4; ++k) {
    out.eigenvalues.v[k] = A(idx[k], idx[k]).real();
    for (int i = 0; i < 4; ++i) out.eigenvectors(i, k) = V(i, idx[k]);
  }

  // deterministic eigenvector representatives: first non-negligible
  // component made real positive
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < 4; ++i) {
      const Complex v = out.eigenvectors(i, k);
      const double mag = std::abs(v);
      if (mag > 1e-8) {
        const Complex ph = std::conj(v) / mag;
        for (int r = 0; r < 4; ++r) out.eigenvectors(r, k) *= ph;
        break;
      }
    }
  }
  return out;
}

}  // namespace qclass
