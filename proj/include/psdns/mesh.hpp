#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "psdns/field.hpp"
#include "psdns/layout.hpp"

namespace psdns {

enum class DealiasRule { MainText, Appendix };

/// Wavenumbers in FFT order: (0, 1, ..., N/2-1, -N/2, -N/2+1, ..., -1).
inline std::vector<long> dft_frequencies(std::size_t n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("dft_frequencies: N must be even and >= 2");
  std::vector<long> k(n);
  for (std::size_t i = 0; i < n / 2; ++i) k[i] = static_cast<long>(i);
  for (std::size_t i = n / 2; i < n; ++i) k[i] = static_cast<long>(i) - static_cast<long>(n);
  return k;
}

/// Half-spectrum wavenumbers (0, 1, ..., N/2-1, N/2): the truncated DFT
/// frequencies with the Nyquist entry sign-flipped to +N/2.
inline std::vector<long> half_frequencies(std::size_t n) {
  auto k = dft_frequencies(n);
  k.resize(n / 2 + 1);
  k[n / 2] = static_cast<long>(n / 2);
  return k;
}

/// Local coordinate vectors x_i = 2*pi*i/N for the block this rank owns.
template <class Real>
std::array<std::vector<Real>, 3> build_physical_mesh(std::size_t n, const Decomposition& d,
                                                     const RankInfo& r) {
  const Layout l = physical_layout(n, d, r);
  const Real h = Real(2) * std::numbers::pi_v<Real> / static_cast<Real>(n);
  std::array<std::vector<Real>, 3> x;
  for (int a = 0; a < 3; ++a) {
    x[a].resize(l.local[a]);
    for (std::size_t i = 0; i < l.local[a]; ++i)
      x[a][i] = static_cast<Real>(l.offset[a] + i) * h;
  }
  return x;
}

/// Local blocks of the wavevector mesh and the operators derived from it:
/// |k|^2, k/|k|^2 (zero at the global zero mode) and the dealias mask.
template <class Real>
struct WaveTables {
  Layout layout;                            // spectral layout of the decomposition
  std::array<std::vector<long>, 3> k_axis;  // local wavenumbers along each axis
  std::vector<std::int64_t> k2;
  std::array<std::vector<Real>, 3> k_over_k2;
  std::vector<std::uint8_t> dealias;

  long k(int axis, std::size_t i, std::size_t j, std::size_t kk) const {
    return k_axis[axis][axis == 0 ? i : (axis == 1 ? j : kk)];
  }
  std::size_t index(std::size_t i, std::size_t j, std::size_t kk) const {
    return (i * layout.local[1] + j) * layout.local[2] + kk;
  }
};

template <class Real>
inline Real dealias_cutoff(std::size_t n, DealiasRule rule) {
  if (rule == DealiasRule::MainText) return static_cast<Real>(n) / Real(3);
  return Real(2) / Real(3) * static_cast<Real>(n / 2 + 1);
}

template <class Real>
WaveTables<Real> build_wave_tables(std::size_t n, const Decomposition& d, const RankInfo& r,
                                   DealiasRule rule) {
  WaveTables<Real> t;
  t.layout = spectral_layout(n, d, r);

  const auto full = dft_frequencies(n);
  const auto half = half_frequencies(n);
  for (int a = 0; a < 3; ++a) {
    t.k_axis[a].resize(t.layout.local[a]);
    for (std::size_t i = 0; i < t.layout.local[a]; ++i) {
      const std::size_t g = t.layout.offset[a] + i;
      // Serial/slab keep the z Nyquist plane (half spectrum); pencil draws
      // local z frequencies from the full table with the Nyquist plane absent.
      if (a == 2 && d.kind != DecompKind::Pencil)
        t.k_axis[a][i] = half[g];
      else
        t.k_axis[a][i] = full[g];
    }
  }

  const std::size_t sz = t.layout.local_size();
  t.k2.resize(sz);
  for (int a = 0; a < 3; ++a) t.k_over_k2[a].resize(sz);
  t.dealias.resize(sz);

  const Real kmax = dealias_cutoff<Real>(n, rule);
  std::size_t m = 0;
  for (std::size_t i = 0; i < t.layout.local[0]; ++i) {
    const long kx = t.k_axis[0][i];
    for (std::size_t j = 0; j < t.layout.local[1]; ++j) {
      const long ky = t.k_axis[1][j];
      for (std::size_t kk = 0; kk < t.layout.local[2]; ++kk, ++m) {
        const long kz = t.k_axis[2][kk];
        const std::int64_t ksq = static_cast<std::int64_t>(kx) * kx +
                                 static_cast<std::int64_t>(ky) * ky +
                                 static_cast<std::int64_t>(kz) * kz;
        t.k2[m] = ksq;
        const Real denom = static_cast<Real>(ksq == 0 ? 1 : ksq);
        t.k_over_k2[0][m] = static_cast<Real>(kx) / denom;
        t.k_over_k2[1][m] = static_cast<Real>(ky) / denom;
        t.k_over_k2[2][m] = static_cast<Real>(kz) / denom;
        t.dealias[m] = (std::abs(static_cast<Real>(kx)) < kmax &&
                        std::abs(static_cast<Real>(ky)) < kmax &&
                        std::abs(static_cast<Real>(kz)) < kmax)
                           ? 1
                           : 0;
      }
    }
  }
  return t;
}

}  // namespace psdns
