#include "qclass/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <thread>
#include <vector>

#include "qclass/eigen.hpp"
#include "qclass/errors.hpp"
#include "qclass/separability.hpp"
#include "qclass/tensor_ops.hpp"

namespace qclass {

namespace {

constexpr double kZ95 = 1.959963984540054;

FlagStats make_stats(long count, long n) {
  FlagStats s;
  s.count = count;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(count) / nn;
  s.fraction = p;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  s.wilson_halfwidth =
      kZ95 * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  s.interval_low = std::max(0.0, centre - s.wilson_halfwidth);
  s.interval_high = std::min(1.0, centre + s.wilson_halfwidth);
  return s;
}

}  // namespace

Classification classify(const Mat4& rho, const SWKernel& kernel,
                        const ClassifyConfig& cfg) {
  Classification c;
  const SeparabilityVerdict ppt = ppt_separable(rho, cfg.tol);
  c.separable = ppt.separable;
  c.ppt_margin = ppt.margin;

  const Spectrum4 spec = eigh_4(rho, cfg.tol).eigenvalues;
  // Absolute separability means "separable at every angle", which is a
  // statement about the state's own block pairing.  X-shaped inputs carry
  // that pairing; only for unstructured states does the flag fall back to
  // the fundamental-simplex reading.  The sorted and block-paired criteria
  // do not imply each other.
  if (is_x_shape(rho, cfg.tol.x_shape)) {
    const XParams p = x_to_params(xstate_from_matrix(rho, cfg.tol));
    c.absolutely_separable =
        absolutely_separable(p.r.v[0], p.r.v[1], p.r.v[2], p.r.v[3], cfg.tol);
  } else {
    c.absolutely_separable = absolutely_separable_sorted(spec, cfg.tol);
  }
  c.bounds = wf_bounds(spec, kernel.spectrum);
  c.polytope_positive = c.bounds.lower >= -cfg.tol.polytope;

  if (cfg.orbit_check && kernel.kind == KernelKind::pair) {
    const OrbitMinResult orbit = min_over_orbit(rho, kernel, OrbitGroup::lu,
                                                cfg.orbit_restarts, cfg.orbit_budget,
                                                cfg.tol);
    c.lu_orbit_min = orbit.min_value;
    c.lu_orbit_positive = orbit.min_value >= -cfg.tol.orbit_value;
  } else if (c.polytope_positive) {
    // the full-orbit minimum is nonnegative, hence so is the LU-orbit one
    c.lu_orbit_positive = true;
  }

  const bool cplus = cfg.orbit_as_cplus && c.lu_orbit_positive.has_value()
                         ? *c.lu_orbit_positive
                         : c.polytope_positive;
  c.doubly_classical = c.separable && cplus;
  return c;
}

Classification classify(const XParams& params, const SWKernel& kernel,
                        const ClassifyConfig& cfg) {
  Classification c = classify(x_from_params(params, cfg.tol).to_matrix(), kernel, cfg);
  c.inequality_margin = x_separable_inequalities(params, cfg.tol).margin;
  return c;
}

// --------------------------------------------------------------------------

Mat4 sample_hs_state(Xoshiro256& stream) {
  Mat4 g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double re = stream.gaussian();
      const double im = stream.gaussian();
      g(i, j) = Complex{re, im};
    }
  Mat4 rho = g * adjoint(g);
  rho = (1.0 / trace(rho).real()) * rho;
  return symmetrized(rho);
}

Mat4 sample_hs_state(std::uint64_t seed) {
  Xoshiro256 s = derive_stream(seed, 0);
  return sample_hs_state(s);
}

XParams sample_x_state(Xoshiro256& stream) {
  XParams p;
  std::array<double, 4> e{};
  double sum = 0.0;
  for (auto& x : e) {
    x = -std::log(1.0 - stream.uniform01());
    sum += x;
  }
  for (auto& x : e) x /= sum;
  if (e[0] < e[1]) std::swap(e[0], e[1]);
  if (e[2] < e[3]) std::swap(e[2], e[3]);
  p.r.v = e;
  p.phi1 = std::acos(1.0 - 2.0 * stream.uniform01());
  p.phi2 = std::acos(1.0 - 2.0 * stream.uniform01());
  p.psi1 = stream.uniform(0.0, 2.0 * std::numbers::pi);
  p.psi2 = stream.uniform(0.0, 2.0 * std::numbers::pi);
  return p;
}

XParams sample_x_state(std::uint64_t seed) {
  Xoshiro256 s = derive_stream(seed, 0);
  return sample_x_state(s);
}

// --------------------------------------------------------------------------

namespace {

struct Counts {
  long separable = 0;
  long absolutely_separable = 0;
  long polytope_positive = 0;
  long doubly_classical = 0;
  long lu_orbit_positive = 0;

  Counts& operator+=(const Counts& o) {
    separable += o.separable;
    absolutely_separable += o.absolutely_separable;
    polytope_positive += o.polytope_positive;
    doubly_classical += o.doubly_classical;
    lu_orbit_positive += o.lu_orbit_positive;
    return *this;
  }
};

constexpr long kChunkSize = 256;

}  // namespace

EnsembleReport estimate_fractions(long n, EnsembleKind ensemble, const SWKernel& kernel,
                                  std::uint64_t seed, const ClassifyConfig& cfg,
                                  int threads) {
  if (n < 1) throw ValidationError("ensemble size must be >= 1");
  const long n_chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<Counts> per_chunk(static_cast<std::size_t>(n_chunks));

  std::atomic<long> next_chunk{0};
  auto worker = [&] {
    for (;;) {
      const long chunk = next_chunk.fetch_add(1);
      if (chunk >= n_chunks) return;
      Counts counts;
      const long begin = chunk * kChunkSize;
      const long end = std::min(n, begin + kChunkSize);
      for (long i = begin; i < end; ++i) {
        Xoshiro256 stream = derive_stream(seed, static_cast<std::uint64_t>(i));
        Classification c;
        if (ensemble == EnsembleKind::hs)
          c = classify(sample_hs_state(stream), kernel, cfg);
        else
          c = classify(sample_x_state(stream), kernel, cfg);
        counts.separable += c.separable;
        counts.absolutely_separable += c.absolutely_separable;
        counts.polytope_positive += c.polytope_positive;
        counts.doubly_classical += c.doubly_classical;
        counts.lu_orbit_positive += c.lu_orbit_positive.value_or(false);
      }
      per_chunk[static_cast<std::size_t>(chunk)] = counts;
    }
  };

  const int n_workers = std::max(1, std::min<int>(threads, static_cast<int>(n_chunks)));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  Counts total;
  for (const Counts& c : per_chunk) total += c;  // fixed fold order

  EnsembleReport rep;
  rep.n_samples = n;
  rep.ensemble = ensemble;
  rep.seed = seed;
  rep.separable = make_stats(total.separable, n);
  rep.absolutely_separable = make_stats(total.absolutely_separable, n);
  rep.polytope_positive = make_stats(total.polytope_positive, n);
  rep.doubly_classical = make_stats(total.doubly_classical, n);
  if (cfg.orbit_check && kernel.kind == KernelKind::pair)
    rep.lu_orbit_positive = make_stats(total.lu_orbit_positive, n);
  return rep;
}

// --------------------------------------------------------------------------
// Ball radii.

namespace {

// Unit-Frobenius-norm traceless Hermitian direction.
Mat4 normalize_direction(Mat4 d) {
  const double tr = trace(d).real() / 4.0;
  for (int i = 0; i < 4; ++i) d(i, i) -= tr;
  const double norm = frobenius_norm(d);
  return (1.0 / norm) * d;
}

Mat4 gaussian_direction(Xoshiro256& rng) {
  Mat4 d;
  for (int i = 0; i < 4; ++i) {
    d(i, i) = rng.gaussian();
    for (int j = i + 1; j < 4; ++j) {
      const Complex v{rng.gaussian(), rng.gaussian()};
      d(i, j) = v;
      d(j, i) = std::conj(v);
    }
  }
  return normalize_direction(d);
}

// Haar-random pure-state projector from a Gaussian 4-vector.
Mat4 random_pure_projector(Xoshiro256& rng) {
  std::array<Complex, 4> psi{};
  double norm2 = 0.0;
  for (auto& c : psi) {
    c = Complex{rng.gaussian(), rng.gaussian()};
    norm2 += std::norm(c);
  }
  Mat4 p;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) p(i, j) = psi[i] * std::conj(psi[j]) / norm2;
  return p;
}

// Kernel spectra scanned over the moduli space of the requested family.
// Cell centres keep every point strictly inside the admissible region.  Both
// scans place points quadratically close to the extremal spectra, which is
// what the radius estimate is sensitive to.
std::vector<Spectrum4> scan_kernel_spectra(KernelKind family, int resolution) {
  std::vector<Spectrum4> out;
  if (family == KernelKind::pair) {
    for (int i = 0; i < resolution; ++i) {
      const double d14 = pair_d14_limit() * (i + 0.5) / resolution;
      const double lim = pair_d23_limit(d14);
      for (int j = 0; j < resolution; ++j) {
        const double d23 = lim * (j + 0.5) / resolution;
        out.push_back(pair_spectrum(PairModuli{d14, d23}));
      }
    }
  } else {
    const double pi_min = (1.0 - 3.0 * std::sqrt(5.0)) / 4.0;
    const double pi_max = (1.0 + 3.0 * std::sqrt(5.0)) / 4.0;
    for (int i = 0; i < resolution; ++i)
      for (int j = 0; j < resolution; ++j) {
        QuatritModuli m{pi_min + (i + 0.5) / resolution * (pi_max - pi_min),
                        pi_min + (j + 0.5) / resolution * (pi_max - pi_min)};
        if (m.discriminant() < 0.0) continue;
        out.push_back(quatrit_spectrum(m).spectrum);
      }
  }
  return out;
}

struct DirectionProbe {
  Spectrum4 mu_desc;      // spectrum of D, descending
  double psd_min = 0.0;   // most negative eigenvalue of D
  double ppt_min = 0.0;   // most negative eigenvalue of PT(D)
};

// With rho(t) = I/4 + t D, spec(rho(t)) = 1/4 + t * spec(D), so every probe
// reduces to precomputed direction spectra.
DirectionProbe probe_direction(const Mat4& d, const Tolerances& tol) {
  DirectionProbe pr;
  pr.mu_desc = eigh_4(symmetrized(d), tol).eigenvalues;
  pr.psd_min = pr.mu_desc.min();
  pr.ppt_min = eigh_4(symmetrized(partial_transpose(d, Subsystem::B)), tol)
                   .eigenvalues.min();
  return pr;
}

double max_state_radius() { return std::sqrt(3.0) / 2.0; }

}  // namespace

RadiusEstimate estimate_ball_radius(RadiusProperty property, int n_directions,
                                    double bisection_tol, int kernel_scan_resolution,
                                    std::uint64_t seed, KernelKind scan_family,
                                    const Tolerances& tol) {
  if (n_directions < 1) throw ValidationError("radius estimation needs >= 1 direction");
  if (bisection_tol <= 0.0) throw ValidationError("bisection tolerance must be positive");
  if (property == RadiusProperty::absolute_classicality && kernel_scan_resolution < 2)
    throw ValidationError("kernel scan resolution must be >= 2");

  std::vector<Spectrum4> kernels;
  if (property == RadiusProperty::absolute_classicality)
    kernels = scan_kernel_spectra(scan_family, kernel_scan_resolution);

  const auto property_holds = [&](const DirectionProbe& pr, double t) {
    if (0.25 + t * pr.psd_min < -tol.psd) return false;  // not a state
    if (property == RadiusProperty::separability)
      return 0.25 + t * pr.ppt_min >= -tol.boundary;
    Spectrum4 r;
    r.order = SpectrumOrder::descending;
    for (int k = 0; k < 4; ++k) r.v[k] = 0.25 + t * pr.mu_desc.v[k];
    for (const Spectrum4& pi : kernels)
      if (!polytope_contains(r, pi, tol)) return false;
    return true;
  };

  const auto bisect = [&](const DirectionProbe& pr) {
    double lo = 0.0;
    double hi = max_state_radius() + bisection_tol;
    if (property_holds(pr, hi)) return hi;
    while (hi - lo > bisection_tol) {
      const double mid = 0.5 * (lo + hi);
      (property_holds(pr, mid) ? lo : hi) = mid;
    }
    return lo;
  };

  // Direction mix: isotropic Gaussian draws interleaved with the two
  // rank-extremal families (towards / away from a random pure state), which
  // are where both property balls actually touch their boundaries.
  const Mat4 centre = 0.25 * Mat4::identity();
  double best = max_state_radius();
  for (int k = 0; k < n_directions; ++k) {
    Xoshiro256 rng = derive_stream(seed, static_cast<std::uint64_t>(k));
    Mat4 d;
    switch (k % 3) {
      case 0:
        d = gaussian_direction(rng);
        break;
      case 1:
        d = normalize_direction(random_pure_projector(rng) - centre);
        break;
      default:
        d = normalize_direction(centre - random_pure_projector(rng));
        break;
    }
    best = std::min(best, bisect(probe_direction(d, tol)));
  }

  RadiusEstimate est;
  est.property = property;
  est.radius_hs = best;
  est.directions_tested = n_directions;
  est.bisection_tol = bisection_tol;
  est.kernel_scan_resolution =
      property == RadiusProperty::absolute_classicality ? kernel_scan_resolution : 0;
  est.kernel_family = scan_family;
  est.seed = seed;
  return est;
}

// --------------------------------------------------------------------------
// Figure rasters.

namespace {

void append_num(std::string& out, double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

}  // namespace

std::string figure_grid_csv(FigureTag which, int resolution) {
  if (resolution < 2) throw ValidationError("figure resolution must be >= 2");
  std::string csv;
  switch (which) {
    case FigureTag::fig1_right: {
      // lattice over the fundamental simplex spanned by its four corners
      static constexpr double corners[4][4] = {{1, 0, 0, 0},
                                               {0.5, 0.5, 0, 0},
                                               {1.0 / 3, 1.0 / 3, 1.0 / 3, 0},
                                               {0.25, 0.25, 0.25, 0.25}};
      csv = "r1,r2,r3,r4,absolutely_separable\n";
      const int m = resolution - 1;
      for (int i = 0; i <= m; ++i)
        for (int j = 0; j + i <= m; ++j)
          for (int k = 0; k + j + i <= m; ++k) {
            const int l = m - i - j - k;
            const double w[4] = {static_cast<double>(i) / m, static_cast<double>(j) / m,
                                 static_cast<double>(k) / m, static_cast<double>(l) / m};
            double r[4] = {0, 0, 0, 0};
            for (int c = 0; c < 4; ++c)
              for (int x = 0; x < 4; ++x) r[x] += w[c] * corners[c][x];
            const bool inside = absolutely_separable(r[0], r[1], r[2], r[3]);
            for (double v : r) {
              append_num(csv, v);
              csv += ',';
            }
            csv += inside ? '1' : '0';
            csv += '\n';
          }
      break;
    }
    case FigureTag::fig2_left: {
      csv = "pi1,pi2,disc,in_p4,in_p2x2\n";
      const double pi_min = (1.0 - 3.0 * std::sqrt(5.0)) / 4.0;
      const double pi_max = (1.0 + 3.0 * std::sqrt(5.0)) / 4.0;
      for (int i = 0; i < resolution; ++i)
        for (int j = 0; j < resolution; ++j) {
          QuatritModuli m{pi_min + (pi_max - pi_min) * i / (resolution - 1),
                          pi_min + (pi_max - pi_min) * j / (resolution - 1)};
          const double disc = m.discriminant();
          const bool in_p4 = disc >= 0.0;
          const bool in_image = in_p4 && pair_image_contains(m);
          append_num(csv, m.pi1);
          csv += ',';
          append_num(csv, m.pi2);
          csv += ',';
          append_num(csv, disc);
          csv += ',';
          csv += in_p4 ? '1' : '0';
          csv += ',';
          csv += in_image ? '1' : '0';
          csv += '\n';
        }
      break;
    }
    case FigureTag::fig2_right: {
      Spectrum4 pi;
      pi.v = {0.94, 0.93, 0.51, -1.38};
      pi.order = SpectrumOrder::descending;
      const PositivityPolytope poly = polytope_vertices(pi);
      csv = "r1,r2,r3,r4\n";
      for (const auto& v : poly.vertices) {
        for (int k = 0; k < 4; ++k) {
          append_num(csv, v[k]);
          csv += k == 3 ? '\n' : ',';
        }
      }
      break;
    }
  }
  return csv;
}

std::string pair_scan_csv(int resolution) {
  if (resolution < 2) throw ValidationError("scan resolution must be >= 2");
  std::string csv = "d14,d23,pi1,pi2,disc,in_p4\n";
  for (int i = 0; i < resolution; ++i) {
    const double d14 = pair_d14_limit() * (i + 0.5) / resolution;
    const double lim = pair_d23_limit(d14);
    for (int j = 0; j < resolution; ++j) {
      const double d23 = lim * (j + 0.5) / resolution;
      const PairModuli m{d14, d23};
      const QuatritModuli img = embed_pair_in_quatrit(m);
      const double disc = img.discriminant();
      append_num(csv, d14);
      csv += ',';
      append_num(csv, d23);
      csv += ',';
      append_num(csv, img.pi1);
      csv += ',';
      append_num(csv, img.pi2);
      csv += ',';
      append_num(csv, disc);
      csv += ',';
      csv += disc >= -1e-10 ? '1' : '0';
      csv += '\n';
    }
  }
  return csv;
}

}  // namespace qclass
