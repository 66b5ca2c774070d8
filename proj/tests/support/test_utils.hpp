#pragma once

// Shared helpers for the test suites: a direct DFT oracle independent of the
// transform implementation, plus scatter/gather between global arrays and
// rank-local blocks.

#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "psdns/fft.hpp"
#include "psdns/layout.hpp"

namespace testutil {

using C = std::complex<double>;

/// Direct evaluation of the half-spectrum DFT sum, O(N^6). The independent
/// oracle for every transform test.
inline std::vector<C> dft3_direct(const std::vector<double>& u, std::size_t n) {
  const std::size_t nf = n / 2 + 1;
  std::vector<C> fu(n * n * nf);
  const double w = -2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t kx = 0; kx < n; ++kx)
    for (std::size_t ky = 0; ky < n; ++ky)
      for (std::size_t kz = 0; kz < nf; ++kz) {
        C s(0);
        for (std::size_t x = 0; x < n; ++x)
          for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z) {
              const double ph = w * static_cast<double>(kx * x + ky * y + kz * z);
              s += u[(x * n + y) * n + z] * C(std::cos(ph), std::sin(ph));
            }
        fu[(kx * n + ky) * nf + kz] = s;
      }
  return fu;
}

inline std::vector<double> random_global_field(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> u(n * n * n);
  for (auto& v : u) v = dist(rng);
  return u;
}

/// Copy the local block of a global (n,n,n) array into a field.
template <class Real>
void scatter_physical(const std::vector<double>& global, psdns::RealField<Real>& local) {
  const auto& l = local.layout;
  const std::size_t n = l.global[0];
  for (std::size_t i = 0; i < l.local[0]; ++i)
    for (std::size_t j = 0; j < l.local[1]; ++j)
      for (std::size_t k = 0; k < l.local[2]; ++k)
        local(i, j, k) = static_cast<Real>(
            global[((i + l.offset[0]) * n + (j + l.offset[1])) * n + (k + l.offset[2])]);
}

/// Max |local - oracle| over the modes this rank represents. The oracle is
/// indexed on the serial (n, n, n/2+1) half spectrum.
template <class Real>
double spectral_error_vs(const std::vector<C>& oracle,
                         const psdns::SpectralField<Real>& local) {
  const auto& l = local.layout;
  const std::size_t n = l.global[0];
  const std::size_t nf = n / 2 + 1;
  double err = 0;
  for (std::size_t i = 0; i < l.local[0]; ++i)
    for (std::size_t j = 0; j < l.local[1]; ++j)
      for (std::size_t k = 0; k < l.local[2]; ++k) {
        const C ref = oracle[((i + l.offset[0]) * n + (j + l.offset[1])) * nf +
                             (k + l.offset[2])];
        err = std::max(err, std::abs(ref - static_cast<C>(local(i, j, k))));
      }
  return err;
}

inline double max_oracle_magnitude(const std::vector<C>& oracle) {
  double m = 0;
  for (const auto& v : oracle) m = std::max(m, std::abs(v));
  return m;
}

/// All decomposition/rank-count combinations exercised by the multi-rank
/// transform tests.
inline std::vector<psdns::Decomposition> standard_decompositions() {
  return {
      psdns::Decomposition::serial(),     psdns::Decomposition::slab(2),
      psdns::Decomposition::slab(4),      psdns::Decomposition::pencil(1, 1),
      psdns::Decomposition::pencil(2, 2), psdns::Decomposition::pencil(4, 2),
  };
}

}  // namespace testutil
