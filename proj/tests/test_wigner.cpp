#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qclass/eigen.hpp"
#include "qclass/errors.hpp"
#include "qclass/wigner.hpp"
#include "test_support.hpp"

using namespace qclass;
using namespace qclass::test;

namespace {

Spectrum4 spectrum_of(std::array<double, 4> v) {
  Spectrum4 s;
  s.v = v;
  return s;
}

const double kPi3 = (std::sqrt(3.0) - 1.0) / 2.0;   // 0.36602...
const double kPi4 = -(1.0 + std::sqrt(3.0)) / 2.0;  // -1.36602...

PhasePointLU random_lu_point(Xoshiro256& rng) {
  PhasePointLU p;
  p.alpha1 = rng.uniform(0.0, 2.0 * std::numbers::pi);
  p.beta1 = std::acos(1.0 - 2.0 * rng.uniform01());
  p.gamma1 = rng.uniform(0.0, 2.0 * std::numbers::pi);
  p.alpha2 = rng.uniform(0.0, 2.0 * std::numbers::pi);
  p.beta2 = std::acos(1.0 - 2.0 * rng.uniform01());
  p.gamma2 = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return p;
}

PhasePointFull random_full_point(Xoshiro256& rng) {
  PhasePointFull p;
  for (int k = 0; k < 6; ++k) {
    p.theta[k] = rng.uniform(0.0, std::numbers::pi / 2.0);
    p.phi[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }
  for (int k = 0; k < 3; ++k) p.chi[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return p;
}

}  // namespace

TEST_CASE("wf_bounds named cases") {
  const Spectrum4 pi = spectrum_of({1.0, 1.0, kPi3, kPi4});

  const auto mixed = wf_bounds(spectrum_of({0.25, 0.25, 0.25, 0.25}), pi);
  CHECK(mixed.lower == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(mixed.upper == doctest::Approx(0.25).epsilon(1e-14));

  const auto pure = wf_bounds(spectrum_of({1.0, 0.0, 0.0, 0.0}), pi);
  CHECK(pure.lower == doctest::Approx(kPi4).epsilon(1e-14));
  CHECK(pure.upper == doctest::Approx(1.0).epsilon(1e-14));

  const auto half = wf_bounds(spectrum_of({0.5, 0.5, 0.0, 0.0}), pi);
  CHECK(half.lower == doctest::Approx(-0.5).epsilon(1e-13));
  CHECK(half.upper == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("polytope_contains named cases") {
  const Spectrum4 pi = spectrum_of({1.0, 1.0, kPi3, kPi4});
  CHECK(polytope_contains(spectrum_of({0.25, 0.25, 0.25, 0.25}), pi));
  CHECK_FALSE(polytope_contains(spectrum_of({1.0, 0.0, 0.0, 0.0}), pi));
  // boundary: (-1.36603 + 0.36603 + 1)/3 = 0
  CHECK(polytope_contains(spectrum_of({1.0 / 3, 1.0 / 3, 1.0 / 3, 0.0}), pi));
}

TEST_CASE("polytope vertices for the canonical pair kernel") {
  const Spectrum4 pi = spectrum_of({1.0, 1.0, kPi3, kPi4});
  const PositivityPolytope poly = polytope_vertices(pi);
  const Spectrum4 pa = pi.sorted_ascending();

  // every vertex: simplex, descending order, halfspace
  for (const auto& v : poly.vertices) {
    CHECK(v[0] + v[1] + v[2] + v[3] == doctest::Approx(1.0).epsilon(1e-12));
    for (int k = 0; k < 3; ++k) CHECK(v[k] >= v[k + 1] - 1e-12);
    double h = 0.0;
    for (int k = 0; k < 4; ++k) h += v[k] * pa.v[k];
    CHECK(h >= -1e-10);
  }

  // the two kept corners
  auto contains = [&](std::array<double, 4> w) {
    for (const auto& v : poly.vertices) {
      double d = 0.0;
      for (int k = 0; k < 4; ++k) d = std::max(d, std::abs(v[k] - w[k]));
      if (d < 1e-9) return true;
    }
    return false;
  };
  CHECK(contains({0.25, 0.25, 0.25, 0.25}));
  CHECK(contains({1.0 / 3, 1.0 / 3, 1.0 / 3, 0.0}));

  // crossing on the edge (1,0,0,0) -> (1/4,1/4,1/4,1/4): t from the
  // independent line-hyperplane formula
  const double h_out = kPi4;
  const double h_in = 0.25;
  const double t = h_out / (h_out - h_in);
  CHECK(contains({1.0 - 0.75 * t, 0.25 * t, 0.25 * t, 0.25 * t}));
  // crossing on (1/2,1/2,0,0) -> (1/4,...): lands at (1/3,1/3,1/6,1/6)
  CHECK(contains({1.0 / 3, 1.0 / 3, 1.0 / 6, 1.0 / 6}));
  CHECK(poly.vertices.size() == 4);
}

TEST_CASE("polytope vertices for the reference spectrum with rounded entries") {
  // published moduli rounded to two decimals; sum-of-squares is only 3.91,
  // so only the simplex-sum identity is expected here
  const Spectrum4 pi = spectrum_of({0.94, 0.93, 0.51, -1.38});
  CHECK(pi.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pi.sum_sq() == doctest::Approx(4.0).epsilon(0.1));
  const PositivityPolytope poly = polytope_vertices(pi);
  CHECK(poly.vertices.size() == 6);
  const Spectrum4 pa = pi.sorted_ascending();
  int on_hyperplane = 0;
  for (const auto& v : poly.vertices) {
    double h = 0.0;
    for (int k = 0; k < 4; ++k) h += v[k] * pa.v[k];
    CHECK(h >= -1e-10);
    if (std::abs(h) < 1e-9) ++on_hyperplane;
  }
  CHECK(on_hyperplane == 4);  // two kept corners plus four edge crossings
}

TEST_CASE("no kernel spectrum is entrywise nonnegative") {
  // on the nonnegative simplex slice the maximum of sum of squares is 1 < 4,
  // so the positivity halfspace always cuts the simplex properly
  Xoshiro256 rng(10);
  for (int trial = 0; trial < 2000; ++trial) {
    auto s = random_simplex(rng);
    const double sq = s[0] * s[0] + s[1] * s[1] + s[2] * s[2] + s[3] * s[3];
    CHECK(sq <= 1.0 + 1e-12);
  }
  for (int i = 0; i < 40; ++i) {
    const double d14 = pair_d14_limit() * (i + 0.5) / 40.0;
    const Spectrum4 pi = pair_spectrum(PairModuli{d14, pair_d23_limit(d14) * 0.5});
    CHECK(pi.min() < 0.0);
    CHECK_FALSE(polytope_vertices(pi).vertices.empty());
  }
}

TEST_CASE("wigner_value at the identity point") {
  const SWKernel k = build_pair_kernel(PairModuli{0.0, 0.0});
  const PhasePointLU identity{};
  // maximally mixed: exactly tr(Delta)/4
  CHECK(wigner_value(maximally_mixed(), k, identity) == doctest::Approx(0.25).epsilon(1e-14));
  // Bell against the origin kernel: rho11*D11 + rho44*D44 = 1 (D14 = 0)
  CHECK(wigner_value(bell_projector(), k, identity) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("maximally mixed state gives 1/4 at every point and kernel") {
  Xoshiro256 rng(77);
  const SWKernel pairk = build_pair_kernel(PairModuli{0.7, 0.4});
  const SWKernel quatk = build_quatrit_kernel(QuatritModuli{0.5, -0.5});
  for (int trial = 0; trial < 200; ++trial) {
    const PhasePoint lu = random_lu_point(rng);
    const PhasePoint full = random_full_point(rng);
    CHECK(std::abs(wigner_value(maximally_mixed(), pairk, lu) - 0.25) < 1e-12);
    CHECK(std::abs(wigner_value(maximally_mixed(), pairk, full) - 0.25) < 1e-12);
    CHECK(std::abs(wigner_value(maximally_mixed(), quatk, full) - 0.25) < 1e-12);
  }
}

TEST_CASE("kind/point mismatch is rejected") {
  const SWKernel quatk = build_quatrit_kernel(QuatritModuli{1.0, 1.0});
  CHECK_THROWS_AS(wigner_value(maximally_mixed(), quatk, PhasePointLU{}),
                  ValidationError);
  CHECK_THROWS_AS(
      min_over_orbit(maximally_mixed(), quatk, OrbitGroup::lu, 2, 100),
      ValidationError);
}

TEST_CASE("sampled values stay within the spectral bounds") {
  Xoshiro256 rng(2024);
  for (int cases = 0; cases < 10; ++cases) {
    const Mat4 rho = random_density(rng);
    const SWKernel k = build_pair_kernel(
        PairModuli{rng.uniform01() * 0.9, rng.uniform01() * 0.5});
    const auto bounds = wf_bounds(eigh_4(rho).eigenvalues, k.spectrum);
    for (int trial = 0; trial < 1000; ++trial) {
      const double w = trial % 2 == 0
                           ? wigner_value(rho, k, random_lu_point(rng))
                           : wigner_value(rho, k, random_full_point(rng));
      CHECK(w >= bounds.lower - 1e-9);
      CHECK(w <= bounds.upper + 1e-9);
    }
  }
}

TEST_CASE("orbit average over invariant LU sampling approximates 1/4") {
  Xoshiro256 rng(31415);
  const Mat4 rho = random_density(rng);
  const SWKernel k = build_pair_kernel(PairModuli{0.5, 0.3});
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += wigner_value(rho, k, random_lu_point(rng));
  CHECK(std::abs(sum / n - 0.25) < 0.05);
}

TEST_CASE("phase point charts reproduce their unitaries") {
  Xoshiro256 rng(161803);
  for (int trial = 0; trial < 200; ++trial) {
    const PhasePointLU p = random_lu_point(rng);
    const Mat4 u = p.to_unitary();
    CHECK(frobenius_norm(adjoint(u) * u - Mat4::identity()) < 1e-13);
    // factorization + re-extraction must act identically by conjugation
    const PhasePointLU q = PhasePointLU::from_unitary(u);
    const Mat4 v = q.to_unitary();
    const Mat4 probe = random_hermitian(rng);
    CHECK(frobenius_norm(u * probe * adjoint(u) - v * probe * adjoint(v)) < 1e-9);
  }
  for (int trial = 0; trial < 200; ++trial) {
    const PhasePointFull p = random_full_point(rng);
    const Mat4 u = p.to_unitary();
    CHECK(frobenius_norm(adjoint(u) * u - Mat4::identity()) < 1e-13);
    const PhasePointFull q = PhasePointFull::from_unitary(u);
    const Mat4 v = q.to_unitary();
    // equal up to a global phase, so conjugation must agree
    const Mat4 probe = random_hermitian(rng);
    CHECK(frobenius_norm(u * probe * adjoint(u) - v * probe * adjoint(v)) < 1e-9);
  }
}

TEST_CASE("full-orbit minimization attains the rearrangement bound") {
  const SWKernel k = build_pair_kernel(PairModuli{0.0, 0.0});
  const Mat4 pure = Mat4::diagonal({1.0, 0.0, 0.0, 0.0});
  const auto res = min_over_orbit(pure, k, OrbitGroup::full, 20, 4000);
  CHECK(res.min_value == doctest::Approx(kPi4).epsilon(1e-6));
  CHECK(res.converged);
  // the reported argmin point reproduces the reported value
  CHECK(wigner_value(pure, k, res.argmin) == doctest::Approx(res.min_value).epsilon(1e-9));
}

TEST_CASE("LU orbit minimum is sandwiched") {
  const SWKernel k = build_pair_kernel(PairModuli{0.0, 0.0});
  const Mat4 pure = Mat4::diagonal({1.0, 0.0, 0.0, 0.0});
  const auto lu = min_over_orbit(pure, k, OrbitGroup::lu, 12, 4000);
  CHECK(lu.min_value >= kPi4 - 1e-9);
  CHECK(wigner_value(pure, k, lu.argmin) == doctest::Approx(lu.min_value).epsilon(1e-9));
}

TEST_CASE("minimization of the maximally mixed state converges immediately") {
  const SWKernel k = build_pair_kernel(PairModuli{0.3, 0.1});
  for (OrbitGroup g : {OrbitGroup::lu, OrbitGroup::full}) {
    const auto res = min_over_orbit(maximally_mixed(), k, g, 3, 500);
    CHECK(res.min_value == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(res.converged);
  }
}

TEST_CASE("random pairs: full orbit hits the bound, LU stays above") {
  Xoshiro256 rng(555);
  for (int cases = 0; cases < 15; ++cases) {
    const Mat4 rho = random_density(rng);
    const SWKernel k = build_pair_kernel(
        PairModuli{rng.uniform01() * 0.9, rng.uniform01() * 0.4});
    const double bound = wf_bounds(eigh_4(rho).eigenvalues, k.spectrum).lower;
    const auto full = min_over_orbit(rho, k, OrbitGroup::full, 20, 4000);
    CHECK(full.min_value == doctest::Approx(bound).epsilon(1e-6));
    const auto lu = min_over_orbit(rho, k, OrbitGroup::lu, 8, 2000);
    CHECK(lu.min_value >= full.min_value - 1e-9);
    CHECK(lu.min_value >= bound - 1e-9);
  }
}
