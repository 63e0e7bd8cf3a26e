// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Each criterion pins its tolerances and runtime targets in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "qclass/ensemble.hpp"
#include "qclass/eigen.hpp"
#include "qclass/json_io.hpp"
#include "qclass/separability.hpp"
#include "qclass/tensor_ops.hpp"
#include "qclass/wigner.hpp"
#include "qclass/xstate.hpp"
#include "test_support.hpp"

using namespace qclass;
using namespace qclass::test;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int number, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", number, name,
              detail.c_str());
  if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

// closed-form partial-transpose margin of an X-state
double ppt_margin_closed_form(const XState& s) {
  const double m1 = 0.5 * (s.rho11 + s.rho44) -
                    std::sqrt(0.25 * (s.rho11 - s.rho44) * (s.rho11 - s.rho44) +
                              std::norm(s.rho23));
  const double m2 = 0.5 * (s.rho22 + s.rho33) -
                    std::sqrt(0.25 * (s.rho22 - s.rho33) * (s.rho22 - s.rho33) +
                              std::norm(s.rho14));
  return std::min(m1, m2);
}

double inequality_margin_closed_form(const XParams& p) {
  const double g1 = p.r.v[0] - p.r.v[1], g2 = p.r.v[2] - p.r.v[3];
  const double s1 = p.r.v[0] + p.r.v[1], s2 = p.r.v[2] + p.r.v[3];
  const double a = s1 * s1 - (g1 * g1 * std::cos(p.phi1) * std::cos(p.phi1) +
                              g2 * g2 * std::sin(p.phi2) * std::sin(p.phi2));
  const double b = s2 * s2 - (g2 * g2 * std::cos(p.phi2) * std::cos(p.phi2) +
                              g1 * g1 * std::sin(p.phi1) * std::sin(p.phi1));
  return std::min(a, b);
}

void criterion_1_equivalence() {
  const auto t0 = Clock::now();
  Xoshiro256 rng(101);
  int disagreements = 0;
  double worst_margin_dev = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const XParams p = random_xparams(rng);
    const XState s = x_from_params(p);
    const SeparabilityVerdict ineq = x_separable_inequalities(p);
    const SeparabilityVerdict ppt = ppt_separable(s.to_matrix());
    if (ineq.separable != ppt.separable) ++disagreements;
    worst_margin_dev = std::max(
        worst_margin_dev, std::abs(ineq.margin - inequality_margin_closed_form(p)));
    worst_margin_dev = std::max(worst_margin_dev,
                                std::abs(ppt.margin - ppt_margin_closed_form(s)));
  }
  const double dt = seconds_since(t0);
  report(1, "criterion equivalence on 10^4 X-states",
         disagreements == 0 && worst_margin_dev <= 1e-12 && dt < 5.0,
         fmt("disagreements %.0f, margin dev %.2e, %.2fs", disagreements,
             worst_margin_dev, dt));
}

void criterion_2_werner_boundary() {
  auto bisect = [](auto separable_at) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (separable_at(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  const double via_ineq = bisect(
      [](double p) { return x_separable_inequalities(werner_params(p)).separable; });
  const double via_ppt =
      bisect([](double p) { return ppt_separable(werner(p)).separable; });
  const double third = 1.0 / 3.0;
  report(2, "Werner separability boundary at p = 1/3",
         std::abs(via_ineq - third) <= 1e-6 && std::abs(via_ppt - third) <= 1e-6,
         fmt("inequalities %.8f, ppt %.8f", via_ineq, via_ppt));
}

void criterion_3_absolute_separability() {
  Xoshiro256 rng(303);
  int passing = 0, failing = 0;
  int passing_bad = 0, failing_bad = 0;
  const double half_pi = std::numbers::pi / 2.0;
  while (passing < 1000 || failing < 1000) {
    XParams p = random_xparams(rng);
    const auto& r = p.r.v;
    const double margin = absolute_separability_margin(r[0], r[1], r[2], r[3]);
    if (margin >= 0.0 && passing < 1000) {
      ++passing;
      bool entangled_found = false;
      for (int i = 0; i < 50 && !entangled_found; ++i)
        for (int j = 0; j < 50 && !entangled_found; ++j) {
          p.phi1 = std::numbers::pi * i / 49.0;
          p.phi2 = std::numbers::pi * j / 49.0;
          entangled_found = !x_separable_inequalities(p).separable;
        }
      if (entangled_found) ++passing_bad;
    } else if (margin < -1e-9 && failing < 1000) {
      ++failing;
      bool violated = false;
      for (int i = 0; i < 50 && !violated; ++i)
        for (int j = 0; j < 50 && !violated; ++j) {
          p.phi1 = std::numbers::pi * i / 49.0;
          p.phi2 = std::numbers::pi * j / 49.0;
          violated = !x_separable_inequalities(p).separable;
        }
      if (!violated) {  // refinement near the two extremal angle pairs
        for (const auto& [f1, f2] :
             {std::pair{half_pi, 0.0}, std::pair{0.0, half_pi}}) {
          p.phi1 = f1;
          p.phi2 = f2;
          if (!x_separable_inequalities(p).separable) violated = true;
        }
      }
      if (!violated) ++failing_bad;
    }
  }
  report(3, "absolute separability vs 50x50 angle grids",
         passing_bad == 0 && failing_bad == 0,
         fmt("entangled-on-pass %.0f, unviolated-on-fail %.0f", passing_bad,
             failing_bad));
}

void criterion_4_kernel_master_equations() {
  const auto t0 = Clock::now();
  double worst_sum = 0.0, worst_sum_sq = 0.0, worst_matrix = 0.0;
  const int n = 128;
  for (int i = 0; i < n; ++i) {
    const double d14 = pair_d14_limit() * (i + 0.5) / n;
    for (int j = 0; j < n; ++j) {
      const double d23 = pair_d23_limit(d14) * (j + 0.5) / n;
      const PairModuli m{d14, d23};
      const Spectrum4 pi = pair_spectrum(m);
      worst_sum = std::max(worst_sum, std::abs(pi.sum() - 1.0));
      worst_sum_sq = std::max(worst_sum_sq, std::abs(pi.sum_sq() - 4.0));

      const SWKernel k = build_pair_kernel(m);
      const double delta_sq = d14 * d14 + d23 * d23;
      double diag_sq = 0.0, diag_sum = 0.0;
      for (int d = 0; d < 4; ++d) {
        diag_sum += k.matrix(d, d).real();
        diag_sq += k.matrix(d, d).real() * k.matrix(d, d).real();
      }
      const double d1 = k.matrix(0, 0).real(), d2 = k.matrix(1, 1).real();
      const double d3 = k.matrix(2, 2).real(), d4 = k.matrix(3, 3).real();
      worst_matrix = std::max(worst_matrix, std::abs(diag_sum - 1.0));
      worst_matrix =
          std::max(worst_matrix, std::abs(diag_sq - (4.0 - 2.0 * delta_sq)));
      worst_matrix = std::max(
          worst_matrix,
          std::abs((d1 + d2) * (d1 + d2) + (d3 + d4) * (d3 + d4) - 2.0));
      worst_matrix = std::max(
          worst_matrix,
          std::abs((d1 + d3) * (d1 + d3) + (d2 + d4) * (d2 + d4) - 2.0));
      const KernelResiduals res = validate_kernel(k);
      worst_matrix = std::max({worst_matrix, res.reduced_a_residual,
                               res.reduced_b_residual});
    }
  }
  const double dt = seconds_since(t0);
  report(4, "kernel master equations on a 128x128 moduli grid",
         worst_sum <= 1e-12 && worst_sum_sq <= 1e-12 && worst_matrix <= 1e-10 &&
             dt < 10.0,
         fmt("sum %.1e, sum_sq %.1e, matrix %.1e", worst_sum, worst_sum_sq,
             worst_matrix) +
             fmt(", %.2fs", dt));
}

void criterion_5_moduli_containment() {
  int outside = 0;
  const int n = 128;
  double worst_disc = 1e300;
  for (int i = 0; i < n; ++i) {
    const double d14 = pair_d14_limit() * (i + 0.5) / n;
    for (int j = 0; j < n; ++j) {
      const double d23 = pair_d23_limit(d14) * (j + 0.5) / n;
      const QuatritModuli img = embed_pair_in_quatrit(PairModuli{d14, d23});
      const double disc = img.discriminant();
      worst_disc = std::min(worst_disc, disc);
      if (disc < -1e-10) ++outside;
    }
  }
  report(5, "embedded pair moduli lie inside the quatrit domain", outside == 0,
         fmt("outside %.0f of 16384, min disc %.2e", outside, worst_disc));
}

void criterion_6_rearrangement_oracle() {
  const auto t0 = Clock::now();
  Xoshiro256 kernel_rng(606);
  double worst_gap = 0.0, worst_lu_deficit = 0.0;
  for (int i = 0; i < 100; ++i) {
    Xoshiro256 state_rng = derive_stream(607, static_cast<std::uint64_t>(i));
    const Mat4 rho = sample_hs_state(state_rng);
    const double d14 = kernel_rng.uniform01() * pair_d14_limit() * 0.999;
    const double d23 = kernel_rng.uniform01() * pair_d23_limit(d14) * 0.999;
    const SWKernel k = build_pair_kernel(PairModuli{d14, d23});
    const double bound = wf_bounds(eigh_4(rho).eigenvalues, k.spectrum).lower;

    const OrbitMinResult full = min_over_orbit(rho, k, OrbitGroup::full, 20, 4000);
    worst_gap = std::max(worst_gap, std::abs(full.min_value - bound));

    const OrbitMinResult lu = min_over_orbit(rho, k, OrbitGroup::lu, 8, 2000);
    worst_lu_deficit = std::max(worst_lu_deficit, full.min_value - lu.min_value);
  }
  const double dt = seconds_since(t0);
  report(6, "full-orbit minima reach the rearrangement bound",
         worst_gap <= 1e-6 && worst_lu_deficit <= 1e-9 && dt < 60.0,
         fmt("worst gap %.2e, worst LU deficit %.2e, %.1fs", worst_gap,
             worst_lu_deficit, dt));
}

// barycentric membership in the convex hull of the vertex list via
// exhaustive 4-subsets (Caratheodory)
bool in_hull(const std::array<double, 4>& p,
             const std::vector<std::array<double, 4>>& verts) {
  const std::size_t n = verts.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c)
        for (std::size_t d = c + 1; d < n; ++d) {
          double m[4][5];
          for (int row = 0; row < 4; ++row) {
            m[row][0] = verts[a][row];
            m[row][1] = verts[b][row];
            m[row][2] = verts[c][row];
            m[row][3] = verts[d][row];
            m[row][4] = p[row];
          }
          // Gaussian elimination with partial pivoting
          bool singular = false;
          for (int col = 0; col < 4 && !singular; ++col) {
            int piv = col;
            for (int row = col + 1; row < 4; ++row)
              if (std::abs(m[row][col]) > std::abs(m[piv][col])) piv = row;
            if (std::abs(m[piv][col]) < 1e-12) {
              singular = true;
              break;
            }
            for (int x = 0; x < 5; ++x) std::swap(m[col][x], m[piv][x]);
            for (int row = 0; row < 4; ++row) {
              if (row == col) continue;
              const double f = m[row][col] / m[col][col];
              for (int x = col; x < 5; ++x) m[row][x] -= f * m[col][x];
            }
          }
          if (singular) continue;
          bool ok = true;
          double w[4];
          for (int row = 0; row < 4; ++row) {
            w[row] = m[row][4] / m[row][row];
            if (w[row] < -1e-9) ok = false;
          }
          if (!ok) continue;
          // residual check
          double res = 0.0;
          for (int row = 0; row < 4; ++row) {
            double s = w[0] * verts[a][row] + w[1] * verts[b][row] +
                       w[2] * verts[c][row] + w[3] * verts[d][row];
            res = std::max(res, std::abs(s - p[row]));
          }
          if (res < 1e-9) return true;
        }
  return false;
}

void criterion_7_polytope() {
  std::vector<Spectrum4> kernels;
  kernels.push_back(pair_spectrum(PairModuli{0.0, 0.0}));
  kernels.push_back(pair_spectrum(PairModuli{0.5, 0.3}));
  kernels.push_back(pair_spectrum(PairModuli{0.9, 0.2}));
  kernels.push_back(quatrit_spectrum(QuatritModuli{1.0, 1.0}).spectrum);
  kernels.push_back(quatrit_spectrum(QuatritModuli{0.3, -0.8}).spectrum);
  Spectrum4 caption;
  caption.v = {0.94, 0.93, 0.51, -1.38};
  kernels.push_back(caption);

  int vertex_violations = 0;
  int membership_disagreements = 0;
  Xoshiro256 rng(707);
  for (const Spectrum4& pi : kernels) {
    const PositivityPolytope poly = polytope_vertices(pi);
    const Spectrum4 pa = pi.sorted_ascending();
    for (const auto& v : poly.vertices) {
      if (std::abs(v[0] + v[1] + v[2] + v[3] - 1.0) > 1e-10) ++vertex_violations;
      for (int k = 0; k < 3; ++k)
        if (v[k] < v[k + 1] - 1e-10) ++vertex_violations;
      double h = 0.0;
      for (int k = 0; k < 4; ++k) h += v[k] * pa.v[k];
      if (h < -1e-10) ++vertex_violations;
    }
    for (int trial = 0; trial < 1000; ++trial) {
      auto r = random_simplex(rng);
      std::sort(r.begin(), r.end(), std::greater<>());
      Spectrum4 rs;
      rs.v = r;
      rs.order = SpectrumOrder::descending;
      const bool by_halfspace = polytope_contains(rs, pi);
      const bool by_hull = in_hull(r, poly.vertices);
      if (by_halfspace != by_hull) ++membership_disagreements;
    }
  }
  report(7, "polytope vertices and hull membership",
         vertex_violations == 0 && membership_disagreements == 0,
         fmt("vertex violations %.0f, membership disagreements %.0f",
             vertex_violations, membership_disagreements));
}

void criterion_8_ball_radii() {
  const RadiusEstimate sep =
      estimate_ball_radius(RadiusProperty::separability, 120, 1e-6, 0, 808);
  const RadiusEstimate cls = estimate_ball_radius(
      RadiusProperty::absolute_classicality, 120, 1e-6, 64, 808, KernelKind::quatrit);
  const double sep_ref = 1.0 / (2.0 * std::sqrt(3.0));    // 0.28867...
  const double cls_ref = 1.0 / (2.0 * std::sqrt(15.0));   // 0.12909...
  report(8, "inscribed-ball radii and their ordering",
         std::abs(sep.radius_hs - sep_ref) <= 0.005 &&
             std::abs(cls.radius_hs - cls_ref) <= 0.005 &&
             sep.radius_hs > cls.radius_hs,
         fmt("separability %.6f (ref %.6f), ", sep.radius_hs, sep_ref) +
             fmt("classicality %.6f (ref %.6f)", cls.radius_hs, cls_ref));
}

void criterion_9_maximally_mixed() {
  Xoshiro256 rng(909);
  const Mat4 mm = 0.25 * Mat4::identity();
  double worst = 0.0;
  std::vector<SWKernel> kernels;
  for (int i = 0; i < 5; ++i) {
    const double d14 = pair_d14_limit() * (i + 0.5) / 5.0;
    kernels.push_back(build_pair_kernel(PairModuli{d14, pair_d23_limit(d14) * 0.5}));
  }
  kernels.push_back(build_quatrit_kernel(QuatritModuli{1.0, 1.0}));
  kernels.push_back(build_quatrit_kernel(QuatritModuli{-0.5, 0.7}));
  for (const SWKernel& k : kernels) {
    for (int trial = 0; trial < 500; ++trial) {
      PhasePointFull pf;
      for (int x = 0; x < 6; ++x) {
        pf.theta[x] = rng.uniform(0.0, std::numbers::pi / 2.0);
        pf.phi[x] = rng.uniform(0.0, 2.0 * std::numbers::pi);
      }
      for (int x = 0; x < 3; ++x) pf.chi[x] = rng.uniform(0.0, 2.0 * std::numbers::pi);
      worst = std::max(worst, std::abs(wigner_value(mm, k, pf) - 0.25));
      if (k.kind == KernelKind::pair) {
        PhasePointLU pl;
        pl.alpha1 = rng.uniform(0.0, 2.0 * std::numbers::pi);
        pl.beta1 = std::acos(1.0 - 2.0 * rng.uniform01());
        pl.gamma1 = rng.uniform(0.0, 2.0 * std::numbers::pi);
        pl.alpha2 = rng.uniform(0.0, 2.0 * std::numbers::pi);
        pl.beta2 = std::acos(1.0 - 2.0 * rng.uniform01());
        pl.gamma2 = rng.uniform(0.0, 2.0 * std::numbers::pi);
        worst = std::max(worst, std::abs(wigner_value(mm, k, pl) - 0.25));
      }
    }
  }
  report(9, "maximally mixed state evaluates to 1/4 everywhere", worst <= 1e-12,
         fmt("worst |W - 1/4| = %.2e", worst));
}

void criterion_10_reproducibility() {
  const SWKernel k = build_pair_kernel(PairModuli{0.0, 0.0});
  OutputMeta meta;
  meta.seed = 7;
  meta.config_hash = "0xacceptance";
  const auto run = [&](int threads) {
    return ensemble_report_json(
        estimate_fractions(10000, EnsembleKind::hs, k, 7, {}, threads), k, meta);
  };
  const std::string a = run(1);
  const std::string b = run(1);
  const std::string c = run(8);
  report(10, "seeded sampling is byte-identical across runs and worker counts",
         a == b && a == c,
         fmt("bytes %.0f, equal_rerun %.0f, equal_8workers %.0f",
             static_cast<double>(a.size()), static_cast<double>(a == b),
             static_cast<double>(a == c)));
}

}  // namespace

int main() {
  std::printf("acceptance suite, qclass\n");
  criterion_1_equivalence();
  criterion_2_werner_boundary();
  criterion_3_absolute_separability();
  criterion_4_kernel_master_equations();
  criterion_5_moduli_containment();
  criterion_6_rearrangement_oracle();
  criterion_7_polytope();
  criterion_8_ball_radii();
  criterion_9_maximally_mixed();
  criterion_10_reproducibility();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
