#include "qclass/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qclass/eigen.hpp"
#include "qclass/errors.hpp"
#include "qclass/tensor_ops.hpp"

namespace qclass {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_2pi(double x) {
  x = std::fmod(x, kTwoPi);
  if (x < 0.0) x += kTwoPi;
  return x;
}

Mat2 euler_zyz(double alpha, double beta, double gamma) {
  const double c = std::cos(0.5 * beta);
  const double s = std::sin(0.5 * beta);
  Mat2 u;
  u(0, 0) = std::polar(c, -0.5 * (alpha + gamma));
  u(0, 1) = std::polar(-s, -0.5 * (alpha - gamma));
  u(1, 0) = std::polar(s, 0.5 * (alpha - gamma));
  u(1, 1) = std::polar(c, 0.5 * (alpha + gamma));
  return u;
}

// ZYZ angles of a 2x2 unitary, ignoring its global phase.
void euler_angles_of(const Mat2& u, double& alpha, double& beta, double& gamma) {
  const double c = std::abs(u(0, 0));
  const double s = std::abs(u(1, 0));
  beta = 2.0 * std::atan2(s, c);
  if (s < 1e-12) {
    gamma = 0.0;
    alpha = wrap_2pi(-2.0 * std::arg(u(0, 0) / std::sqrt(u(0, 0) * u(1, 1))));
    return;
  }
  if (c < 1e-12) {
    gamma = 0.0;
    alpha = wrap_2pi(2.0 * std::arg(u(1, 0) / std::sqrt(-u(0, 1) * u(1, 0))));
    return;
  }
  // remove the global phase: in SU(2) form u = [[a, -conj(b)], [b, conj(a)]]
  const Complex det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  const Complex ph = std::sqrt(det);
  const Complex a = u(0, 0) / ph;
  const Complex b = u(1, 0) / ph;
  alpha = wrap_2pi(std::arg(b) - std::arg(a));
  gamma = wrap_2pi(-std::arg(a) - std::arg(b));
}

struct KronFactors {
  Mat2 a, b;
};

// Factor an exact tensor-product unitary into its 2x2 pieces (each fixed up
// to phase).
KronFactors kron_factorize(const Mat4& u) {
  int best_a = 0, best_b = 0;
  double best = -1.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      double n = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) n += std::norm(u(2 * a + i, 2 * b + j));
      if (n > best) {
        best = n;
        best_a = a;
        best_b = b;
      }
    }
  KronFactors f;
  const double scale = std::sqrt(best / 2.0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      f.b(i, j) = u(2 * best_a + i, 2 * best_b + j) / scale;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      Complex t{};
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          t += std::conj(f.b(i, j)) * u(2 * a + i, 2 * b + j);
      f.a(a, b) = 0.5 * t;
    }
  return f;
}

constexpr int kPlanes[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

Mat4 givens(int p, int q, double theta, double phi) {
  Mat4 g = Mat4::identity();
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  g(p, p) = c;
  g(q, q) = c;
  g(p, q) = -std::polar(s, phi);
  g(q, p) = std::polar(s, -phi);
  return g;
}

}  // namespace

Mat4 PhasePointLU::to_unitary() const {
  return tensor_product(euler_zyz(alpha1, beta1, gamma1), euler_zyz(alpha2, beta2, gamma2));
}

PhasePointLU PhasePointLU::from_unitary(const Mat4& u) {
  const KronFactors f = kron_factorize(u);
  PhasePointLU p;
  euler_angles_of(f.a, p.alpha1, p.beta1, p.gamma1);
  euler_angles_of(f.b, p.alpha2, p.beta2, p.gamma2);
  return p;
}

Mat4 PhasePointFull::to_unitary() const {
  Mat4 u = givens(kPlanes[0][0], kPlanes[0][1], theta[0], phi[0]);
  for (int k = 1; k < 6; ++k)
    u = u * givens(kPlanes[k][0], kPlanes[k][1], theta[k], phi[k]);
  Mat4 d;
  for (int i = 0; i < 3; ++i) d(i, i) = std::polar(1.0, chi[i]);
  d(3, 3) = 1.0;
  return u * d;
}

PhasePointFull PhasePointFull::from_unitary(const Mat4& u) {
  PhasePointFull out;
  Mat4 r = u;
  for (int k = 0; k < 6; ++k) {
    const int p = kPlanes[k][0];
    const int q = kPlanes[k][1];
    const Complex a = r(p, p);
    const Complex b = r(q, p);
    const double am = std::abs(a), bm = std::abs(b);
    double theta = 0.0, phi = 0.0;
    if (bm > 1e-15) {
      theta = std::atan2(bm, am);
      phi = am > 1e-15 ? std::arg(a) - std::arg(b) : 0.0;
    }
    out.theta[k] = theta;
    out.phi[k] = wrap_2pi(phi);
    // apply G^+ from the left on rows p, q
    const double c = std::cos(theta), s = std::sin(theta);
    const Complex eip = std::polar(1.0, out.phi[k]);
    for (int j = 0; j < 4; ++j) {
      const Complex rp = r(p, j), rq = r(q, j);
      r(p, j) = c * rp + s * eip * rq;
      r(q, j) = -s * std::conj(eip) * rp + c * rq;
    }
  }
  const double ref = std::arg(r(3, 3));
  for (int i = 0; i < 3; ++i) out.chi[i] = wrap_2pi(std::arg(r(i, i)) - ref);
  return out;
}

WignerBounds wf_bounds(const Spectrum4& r, const Spectrum4& pi) {
  const Spectrum4 rd = r.sorted_descending();
  const Spectrum4 pa = pi.sorted_ascending();
  const Spectrum4 pd = pi.sorted_descending();
  return WignerBounds{dot(rd, pa), dot(rd, pd)};
}

double wigner_value(const Mat4& rho, const SWKernel& kernel, const PhasePoint& point,
                    const Tolerances& tol) {
  if (std::holds_alternative<PhasePointLU>(point) && kernel.kind != KernelKind::pair)
    throw ValidationError(
        "local-unitary phase points require a qubit-pair kernel; use a full "
        "phase point for quatrit kernels");
  const Mat4 u =
      std::visit([](const auto& pt) { return pt.to_unitary(); }, point);
  const Mat4 m = u * kernel.matrix * adjoint(u);
  const Complex t = trace(rho * m);
  if (std::abs(t.imag()) > tol.imag_residue)
    throw ValidationError("Wigner value has imaginary residue " +
                          std::to_string(t.imag()));
  return t.real();
}

bool polytope_contains(const Spectrum4& r, const Spectrum4& pi, const Tolerances& tol) {
  return wf_bounds(r, pi).lower >= -tol.polytope;
}

PositivityPolytope polytope_vertices(const Spectrum4& pi, const Tolerances& tol) {
  static constexpr std::array<std::array<double, 4>, 4> kCorners = {{
      {1.0, 0.0, 0.0, 0.0},
      {0.5, 0.5, 0.0, 0.0},
      {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0},
      {0.25, 0.25, 0.25, 0.25},
  }};

  const Spectrum4 pa = pi.sorted_ascending();
  std::array<double, 4> h{};
  for (int i = 0; i < 4; ++i) {
    h[i] = 0.0;
    for (int k = 0; k < 4; ++k) h[i] += kCorners[i][k] * pa.v[k];
  }

  PositivityPolytope poly;
  poly.kernel_spectrum = pi.sorted_descending();

  auto push_unique = [&](const std::array<double, 4>& v) {
    for (const auto& w : poly.vertices) {
      double d2 = 0.0;
      for (int k = 0; k < 4; ++k) d2 += (v[k] - w[k]) * (v[k] - w[k]);
      if (std::sqrt(d2) <= tol.vertex_dedup) return;
    }
    poly.vertices.push_back(v);
  };

  const auto inside = [&](int i) { return h[i] >= -tol.polytope; };
  for (int i = 0; i < 4; ++i)
    if (inside(i)) push_unique(kCorners[i]);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      if (inside(i) == inside(j)) continue;
      const double t = h[i] / (h[i] - h[j]);
      std::array<double, 4> v{};
      for (int k = 0; k < 4; ++k)
        v[k] = (1.0 - t) * kCorners[i][k] + t * kCorners[j][k];
      push_unique(v);
    }

  std::sort(poly.vertices.begin(), poly.vertices.end(),
            [](const auto& x, const auto& y) {
              for (int k = 0; k < 4; ++k) {
                if (x[k] != y[k]) return x[k] > y[k];
              }
              return false;
            });
  return poly;
}

// ---------------------------------------------------------------------------
// Orbit minimization.

namespace {

Mat2 pauli(int a) {
  Mat2 s;
  switch (a) {
    case 0:
      s(0, 1) = 1.0;
      s(1, 0) = 1.0;
      break;
    case 1:
      s(0, 1) = Complex(0.0, -1.0);
      s(1, 0) = Complex(0.0, 1.0);
      break;
    default:
      s(0, 0) = 1.0;
      s(1, 1) = -1.0;
      break;
  }
  return s;
}

// Orthonormal generators of the local-unitary algebra: (i/2) sigma_a x I and
// (i/2) I x sigma_a.
const std::array<Mat4, 6>& lu_generators() {
  static const std::array<Mat4, 6> gens = [] {
    std::array<Mat4, 6> g;
    const Mat2 id = Mat2::identity();
    for (int a = 0; a < 3; ++a) {
      g[a] = Complex(0.0, 0.5) * tensor_product(pauli(a), id);
      g[3 + a] = Complex(0.0, 0.5) * tensor_product(id, pauli(a));
    }
    return g;
  }();
  return gens;
}

// Commutator [m, rho]; anti-Hermitian for Hermitian inputs.
Mat4 commutator(const Mat4& m, const Mat4& rho) { return m * rho - rho * m; }

Mat4 project_lu(const Mat4& c) {
  Mat4 d;
  for (const Mat4& g : lu_generators()) {
    const double coeff = trace(adjoint(g) * c).real();
    d = d + coeff * g;
  }
  return d;
}

double halton(std::uint64_t index, std::uint64_t base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

constexpr std::uint64_t kHaltonBases[15] = {2,  3,  5,  7,  11, 13, 17, 19,
                                            23, 29, 31, 37, 41, 43, 47};

Mat4 start_unitary(OrbitGroup group, int restart) {
  if (restart == 0) return Mat4::identity();
  const auto u = [&](int dim) {
    return halton(static_cast<std::uint64_t>(restart), kHaltonBases[dim]);
  };
  if (group == OrbitGroup::lu) {
    PhasePointLU p;
    p.alpha1 = kTwoPi * u(0);
    p.beta1 = std::acos(1.0 - 2.0 * u(1));
    p.gamma1 = kTwoPi * u(2);
    p.alpha2 = kTwoPi * u(3);
    p.beta2 = std::acos(1.0 - 2.0 * u(4));
    p.gamma2 = kTwoPi * u(5);
    return p.to_unitary();
  }
  PhasePointFull p;
  for (int k = 0; k < 6; ++k) {
    p.theta[k] = 0.5 * std::numbers::pi * u(k);
    p.phi[k] = kTwoPi * u(6 + k);
  }
  for (int k = 0; k < 3; ++k) p.chi[k] = kTwoPi * u(12 + k);
  return p.to_unitary();
}

}  // namespace

OrbitMinResult min_over_orbit(const Mat4& rho, const SWKernel& kernel, OrbitGroup group,
                              int restarts, long budget, const Tolerances& tol) {
  if (restarts < 1) throw ValidationError("orbit minimization needs restarts >= 1");
  if (budget < 1) throw ValidationError("orbit minimization needs a positive budget");
  if (group == OrbitGroup::lu && kernel.kind != KernelKind::pair)
    throw ValidationError("local-unitary orbit requires a qubit-pair kernel");
  require_hermitian(rho, tol.hermiticity);

  const Spectrum4 state_spec = eigh_4(rho, tol).eigenvalues;
  const double lower_bound = wf_bounds(state_spec, kernel.spectrum).lower;

  OrbitMinResult result;
  double best_value = 0.0;
  Mat4 best_u = Mat4::identity();
  bool have_best = false;
  bool best_converged = false;

  for (int restart = 0; restart < restarts; ++restart) {
    result.restarts_used = restart + 1;
    Mat4 u = start_unitary(group, restart);
    Mat4 m = symmetrized(u * kernel.matrix * adjoint(u));
    double f = trace(rho * m).real();
    ++result.evaluations;
    long evals = 1;
    bool converged = false;
    double f_best_restart = f;
    Mat4 u_best_restart = u;

    // Barzilai-Borwein steps with a nonmonotone Armijo safeguard; plain
    // steepest descent crawls when near-degenerate spectra flatten the
    // landscape around the minimum.
    Mat4 d_prev;
    double t_prev = 0.0;
    bool have_prev = false;
    std::array<double, 5> f_recent;
    f_recent.fill(f);
    int f_slot = 0;

    double stall_gnorm = -1.0;
    while (evals < budget) {
      if (group == OrbitGroup::full && f <= lower_bound + 1e-8) {
        converged = true;  // certified by the rearrangement bound
        break;
      }
      const Mat4 c = commutator(m, rho);
      const Mat4 d = group == OrbitGroup::lu ? project_lu(c) : c;
      const double gnorm = frobenius_norm(d);
      if (gnorm <= tol.orbit_gradient) {
        converged = true;
        break;
      }

      const Mat4 h = Complex(0.0, -1.0) * d;
      const EigDecomposition4 heig = eigh_4(symmetrized(h));
      auto exp_at = [&](double t) {
        Mat4 e;
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) {
            Complex s{};
            for (int k = 0; k < 4; ++k)
              s += heig.eigenvectors(i, k) * std::polar(1.0, t * heig.eigenvalues.v[k]) *
                   std::conj(heig.eigenvectors(j, k));
            e(i, j) = s;
          }
        return e;
      };

      double t0 = 0.5 / std::max(1.0, gnorm);
      if (have_prev) {
        // s = t_prev * d_prev, y = d_prev - d (gradient is -d)
        double sy = 0.0, ss = 0.0;
        for (std::size_t k = 0; k < d.a.size(); ++k) {
          sy += (std::conj(d_prev.a[k]) * (d_prev.a[k] - d.a[k])).real();
          ss += std::norm(d_prev.a[k]);
        }
        sy *= t_prev;
        ss *= t_prev * t_prev;
        t0 = sy > 1e-18 ? std::clamp(ss / sy, 1e-8, 50.0)
                        : std::min(2.0 * t_prev, 4.0);
      }

      const double f_ref = *std::max_element(f_recent.begin(), f_recent.end());
      const double g2 = gnorm * gnorm;
      bool accepted = false;
      double t = t0;
      for (int trial = 0; trial < 40 && evals < budget; ++trial) {
        const Mat4 e = exp_at(t);
        const Mat4 mt = symmetrized(e * m * adjoint(e));
        const double ft = trace(rho * mt).real();
        ++evals;
        ++result.evaluations;
        if (ft <= f_ref - 1e-4 * t * g2) {
          u = e * u;
          m = mt;
          f = ft;
          if (ft < f_best_restart) {
            f_best_restart = ft;
            u_best_restart = u;
          }
          d_prev = d;
          t_prev = t;
          have_prev = true;
          f_recent[static_cast<std::size_t>(f_slot)] = ft;
          f_slot = (f_slot + 1) % static_cast<int>(f_recent.size());
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) {  // step collapsed against float noise
        stall_gnorm = gnorm;
        break;
      }
    }
    // a stall at a numerically first-order point, or landing within the
    // certificate slack on the last accepted step, still counts as converged
    if (!converged && stall_gnorm >= 0.0 && stall_gnorm <= 1e-5) converged = true;
    if (!converged && group == OrbitGroup::full && f_best_restart <= lower_bound + 1e-8)
      converged = true;

    if (!have_best || f_best_restart < best_value) {
      have_best = true;
      best_value = f_best_restart;
      best_u = u_best_restart;
      best_converged = converged;
    }
    if (group == OrbitGroup::full && best_value <= lower_bound + 1e-8) break;
  }

  // recompute the reported value from the final unitary alone
  const Mat4 m_final = symmetrized(best_u * kernel.matrix * adjoint(best_u));
  result.min_value = trace(rho * m_final).real();
  result.converged = best_converged;
  if (group == OrbitGroup::lu)
    result.argmin = PhasePointLU::from_unitary(best_u);
  else
    result.argmin = PhasePointFull::from_unitary(best_u);
  return result;
}

}  // namespace qclass
