#pragma once

#include <cmath>
#include <cstdint>

#include "psdns/fft.hpp"
#include "psdns/mesh.hpp"
#include "psdns/solver.hpp"

namespace psdns {

/// Taylor-Green vortex: u = (sin x cos y cos z, -cos x sin y cos z, 0).
template <class Real>
void taylor_green_init(const std::array<std::vector<Real>, 3>& x, RealVecField<Real>& u) {
  const Layout& l = u.layout();
  std::size_t m = 0;
  for (std::size_t i = 0; i < l.local[0]; ++i) {
    const Real sx = std::sin(x[0][i]), cx = std::cos(x[0][i]);
    for (std::size_t j = 0; j < l.local[1]; ++j) {
      const Real sy = std::sin(x[1][j]), cy = std::cos(x[1][j]);
      for (std::size_t k = 0; k < l.local[2]; ++k, ++m) {
        const Real cz = std::cos(x[2][k]);
        u[0].data[m] = sx * cy * cz;
        u[1].data[m] = -cx * sy * cz;
        u[2].data[m] = Real(0);
      }
    }
  }
}

/// Initialize a solver's state with the Taylor-Green field and its transform.
template <class Real>
void taylor_green_init(Solver<Real>& solver) {
  const auto x = build_physical_mesh<Real>(solver.fft().n(), solver.fft().decomposition(),
                                           solver.fft().info());
  taylor_green_init(x, solver.state().u);
  solver.sync_spectral();
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Deterministic divergence-free random spectrum, identical for every
/// decomposition of the same seed: a hash-driven physical field is
/// transformed, the z-Nyquist plane zeroed, and each mode projected by
/// (I - k k^T/|k|^2).
template <class Real>
void random_solenoidal_init(Solver<Real>& solver, std::uint64_t seed) {
  auto& u = solver.state().u;
  auto& u_hat = solver.state().u_hat;
  const Layout& pl = u.layout();
  const std::size_t n = pl.global[0];
  for (int c = 0; c < 3; ++c) {
    std::size_t m = 0;
    for (std::size_t i = 0; i < pl.local[0]; ++i)
      for (std::size_t j = 0; j < pl.local[1]; ++j)
        for (std::size_t k = 0; k < pl.local[2]; ++k, ++m) {
          const std::uint64_t g =
              ((pl.offset[0] + i) * n + (pl.offset[1] + j)) * n + (pl.offset[2] + k);
          const std::uint64_t h = detail::splitmix64(seed ^ detail::splitmix64(
                                      g * 3u + static_cast<std::uint64_t>(c)));
          u[c].data[m] =
              Real(2) * static_cast<Real>(h >> 11) / static_cast<Real>(1ULL << 53) - Real(1);
        }
  }
  solver.sync_spectral();

  const WaveTables<Real>& t = solver.tables();
  const Layout& sl = u_hat.layout();
  const std::size_t nf_last = sl.global[2] - 1;
  std::size_t m = 0;
  for (std::size_t i = 0; i < sl.local[0]; ++i)
    for (std::size_t j = 0; j < sl.local[1]; ++j)
      for (std::size_t k = 0; k < sl.local[2]; ++k, ++m) {
        const bool nyquist = sl.global[2] == n / 2 + 1 && sl.offset[2] + k == nf_last;
        if (nyquist) {
          for (int c = 0; c < 3; ++c) u_hat[c].data[m] = std::complex<Real>(0);
          continue;
        }
        std::complex<Real> dot(0);
        for (int c = 0; c < 3; ++c)
          dot += static_cast<Real>(t.k(c, i, j, k)) * u_hat[c].data[m];
        for (int c = 0; c < 3; ++c) u_hat[c].data[m] -= dot * t.k_over_k2[c][m];
      }
  solver.sync_physical();
}

}  // namespace psdns
