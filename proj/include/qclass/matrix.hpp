#pragma once

// Fixed-size dense complex matrices (2x2 and 4x4) and the 4-point spectrum
// carrier.  The state space here never leaves dimension 4, so everything is
// stack-allocated value types.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "qclass/errors.hpp"
#include "qclass/tolerances.hpp"

namespace qclass {

using Complex = std::complex<double>;

template <int N>
struct ComplexMat {
  static_assert(N == 2 || N == 4, "qubit / two-qubit dimensions only");

  std::array<Complex, static_cast<std::size_t>(N) * N> a{};

  Complex& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * N + j]; }
  const Complex& operator()(int i, int j) const {
    return a[static_cast<std::size_t>(i) * N + j];
  }

  static ComplexMat identity() {
    ComplexMat m;
    for (int i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMat diagonal(const std::array<double, N>& d) {
    ComplexMat m;
    for (int i = 0; i < N; ++i) m(i, i) = d[i];
    return m;
  }
};

using Mat2 = ComplexMat<2>;
using Mat4 = ComplexMat<4>;

template <int N>
ComplexMat<N> operator+(const ComplexMat<N>& x, const ComplexMat<N>& y) {
  ComplexMat<N> r;
  for (std::size_t k = 0; k < x.a.size(); ++k) r.a[k] = x.a[k] + y.a[k];
  return r;
}

template <int N>
ComplexMat<N> operator-(const ComplexMat<N>& x, const ComplexMat<N>& y) {
  ComplexMat<N> r;
  for (std::size_t k = 0; k < x.a.size(); ++k) r.a[k] = x.a[k] - y.a[k];
  return r;
}

template <int N>
ComplexMat<N> operator*(Complex s, const ComplexMat<N>& x) {
  ComplexMat<N> r;
  for (std::size_t k = 0; k < x.a.size(); ++k) r.a[k] = s * x.a[k];
  return r;
}

template <int N>
ComplexMat<N> operator*(double s, const ComplexMat<N>& x) {
  return Complex(s, 0.0) * x;
}

template <int N>
ComplexMat<N> operator*(const ComplexMat<N>& x, const ComplexMat<N>& y) {
  ComplexMat<N> r;
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < N; ++k) {
      const Complex xik = x(i, k);
      if (xik == Complex{}) continue;
      for (int j = 0; j < N; ++j) r(i, j) += xik * y(k, j);
    }
  return r;
}

template <int N>
ComplexMat<N> adjoint(const ComplexMat<N>& x) {
  ComplexMat<N> r;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) r(i, j) = std::conj(x(j, i));
  return r;
}

template <int N>
Complex trace(const ComplexMat<N>& x) {
  Complex t{};
  for (int i = 0; i < N; ++i) t += x(i, i);
  return t;
}

template <int N>
double frobenius_norm(const ComplexMat<N>& x) {
  double s = 0.0;
  for (const Complex& c : x.a) s += std::norm(c);
  return std::sqrt(s);
}

template <int N>
double max_abs_entry(const ComplexMat<N>& x) {
  double m = 0.0;
  for (const Complex& c : x.a) m = std::max(m, std::abs(c));
  return m;
}

template <int N>
bool entries_finite(const ComplexMat<N>& x) {
  for (const Complex& c : x.a)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

template <int N>
bool is_hermitian(const ComplexMat<N>& x, double tol) {
  if (!entries_finite(x)) return false;
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j)
      if (std::abs(x(i, j) - std::conj(x(j, i))) > tol) return false;
  return true;
}

// Throws ValidationError naming the first offending entry pair.
template <int N>
void require_hermitian(const ComplexMat<N>& x, double tol) {
  if (!entries_finite(x)) throw ValidationError("matrix has non-finite entries");
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j) {
      const double dev = std::abs(x(i, j) - std::conj(x(j, i)));
      if (dev > tol) {
        throw ValidationError("matrix not Hermitian: entries (" + std::to_string(i) +
                              "," + std::to_string(j) + ") and (" + std::to_string(j) +
                              "," + std::to_string(i) + ") differ by " +
                              std::to_string(dev));
      }
    }
}

// (m + m^+)/2 with the diagonal forced real.  Used to scrub rounding noise
// off values that are Hermitian by construction.
template <int N>
ComplexMat<N> symmetrized(const ComplexMat<N>& x) {
  ComplexMat<N> r;
  for (int i = 0; i < N; ++i) {
    r(i, i) = x(i, i).real();
    for (int j = i + 1; j < N; ++j) {
      const Complex v = 0.5 * (x(i, j) + std::conj(x(j, i)));
      r(i, j) = v;
      r(j, i) = std::conj(v);
    }
  }
  return r;
}

template <int N>
double hs_distance(const ComplexMat<N>& x, const ComplexMat<N>& y) {
  return frobenius_norm(x - y);
}

// ---------------------------------------------------------------------------
// Spectrum of a 4x4 Hermitian matrix plus an ordering tag.

enum class SpectrumOrder { descending, ascending, unsorted };

struct Spectrum4 {
  std::array<double, 4> v{};
  SpectrumOrder order = SpectrumOrder::unsorted;

  double sum() const { return v[0] + v[1] + v[2] + v[3]; }
  double sum_sq() const { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]; }
  double min() const { return std::min(std::min(v[0], v[1]), std::min(v[2], v[3])); }
  double max() const { return std::max(std::max(v[0], v[1]), std::max(v[2], v[3])); }

  Spectrum4 sorted_descending() const {
    Spectrum4 s{v, SpectrumOrder::descending};
    std::array<double, 4>& w = s.v;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3 - i; ++j)
        if (w[j] < w[j + 1]) std::swap(w[j], w[j + 1]);
    return s;
  }

  Spectrum4 sorted_ascending() const {
    Spectrum4 s = sorted_descending();
    std::swap(s.v[0], s.v[3]);
    std::swap(s.v[1], s.v[2]);
    s.order = SpectrumOrder::ascending;
    return s;
  }
};

inline double dot(const Spectrum4& x, const Spectrum4& y) {
  return x.v[0] * y.v[0] + x.v[1] * y.v[1] + x.v[2] * y.v[2] + x.v[3] * y.v[3];
}

}  // namespace qclass
