#pragma once

// Random-state generation, joint classification of states against a kernel,
// Monte Carlo fraction estimation with Wilson intervals, inscribed-ball
// radius estimation around the maximally mixed state, and figure-grid
// emission.
//
// Determinism contract: all sampling derives one RNG stream per sample
// index from the master seed, and parallel execution folds fixed-size index
// chunks in order, so results are byte-identical for any worker count.

#include <cstdint>
#include <optional>
#include <string>

#include "qclass/matrix.hpp"
#include "qclass/rng.hpp"
#include "qclass/sw_kernel.hpp"
#include "qclass/tolerances.hpp"
#include "qclass/wigner.hpp"
#include "qclass/xstate.hpp"

namespace qclass {

struct Classification {
  bool separable = false;
  bool absolutely_separable = false;
  bool polytope_positive = false;
  // set only when the local-unitary orbit check ran (pair kernels)
  std::optional<bool> lu_orbit_positive;
  bool doubly_classical = false;

  double ppt_margin = 0.0;
  std::optional<double> inequality_margin;  // X-coordinate inputs only
  std::optional<double> lu_orbit_min;
  WignerBounds bounds{};
};

struct ClassifyConfig {
  bool orbit_check = false;    // run the local-unitary orbit minimizer
  bool orbit_as_cplus = false; // use the orbit verdict instead of the polytope
                               // verdict inside doubly_classical
  int orbit_restarts = 12;
  long orbit_budget = 4000;
  Tolerances tol{};
};

Classification classify(const Mat4& rho, const SWKernel& kernel,
                        const ClassifyConfig& cfg = {});
Classification classify(const XParams& params, const SWKernel& kernel,
                        const ClassifyConfig& cfg = {});

// --------------------------------------------------------------------------
// Samplers.  The per-stream variants consume a caller-provided stream; the
// seed variants use stream (seed, 0).

// rho = G G^+ / tr(G G^+) with i.i.d. standard complex Gaussian G.
Mat4 sample_hs_state(Xoshiro256& stream);
Mat4 sample_hs_state(std::uint64_t seed);

// Spectrum uniform on the 3-simplex (exponential spacings), pairs sorted
// descending per block; cos(phi) uniform on [-1, 1]; psi uniform on [0,2pi).
XParams sample_x_state(Xoshiro256& stream);
XParams sample_x_state(std::uint64_t seed);

// --------------------------------------------------------------------------

enum class EnsembleKind { hs, xstate };

struct FlagStats {
  long count = 0;
  double fraction = 0.0;
  double wilson_halfwidth = 0.0;  // 95% confidence
  double interval_low = 0.0;      // clamped to [0, 1]
  double interval_high = 0.0;
};

struct EnsembleReport {
  long n_samples = 0;
  EnsembleKind ensemble = EnsembleKind::hs;
  std::uint64_t seed = 0;
  FlagStats separable;
  FlagStats absolutely_separable;
  FlagStats polytope_positive;
  FlagStats doubly_classical;
  std::optional<FlagStats> lu_orbit_positive;
};

// Classifies n independent samples.  `threads` only affects scheduling,
// never the result.
EnsembleReport estimate_fractions(long n, EnsembleKind ensemble, const SWKernel& kernel,
                                  std::uint64_t seed, const ClassifyConfig& cfg = {},
                                  int threads = 1);

// --------------------------------------------------------------------------

enum class RadiusProperty { separability, absolute_classicality };

struct RadiusEstimate {
  RadiusProperty property = RadiusProperty::separability;
  double radius_hs = 0.0;  // Hilbert-Schmidt (Frobenius) distance from I/4
  int directions_tested = 0;
  double bisection_tol = 0.0;
  int kernel_scan_resolution = 0;   // absolute classicality only
  KernelKind kernel_family = KernelKind::quatrit;
  std::uint64_t seed = 0;
};

// Largest t such that I/4 + t D keeps the property, minimized over unit-norm
// traceless Hermitian directions D.  Directions mix isotropic Gaussian draws
// with rank-deficient extremal candidates (towards and away from random pure
// states); each direction is resolved by bisection on t.  Absolute
// classicality means a nonnegative Wigner lower bound for every kernel in a
// moduli-space scan of the given family and resolution; the scan is refined
// once around the binding kernel.
RadiusEstimate estimate_ball_radius(RadiusProperty property, int n_directions,
                                    double bisection_tol, int kernel_scan_resolution,
                                    std::uint64_t seed,
                                    KernelKind scan_family = KernelKind::quatrit,
                                    const Tolerances& tol = default_tolerances());

// --------------------------------------------------------------------------

enum class FigureTag { fig1_right, fig2_left, fig2_right };

// CSV rasters with a header row:
//   fig1_right: fundamental-simplex lattice with the angle-independent
//               separability flag
//   fig2_left:  (pi1, pi2) grid with discriminant sign and pair-image flags
//   fig2_right: positivity-polytope vertices for the reference kernel
//               spectrum (0.94, 0.93, 0.51, -1.38)
std::string figure_grid_csv(FigureTag which, int resolution);

// Pair-moduli scan raster: d14, d23, embedded (pi1, pi2), discriminant and
// containment flag, on a resolution x resolution grid of the moduli region.
std::string pair_scan_csv(int resolution);

}  // namespace qclass
