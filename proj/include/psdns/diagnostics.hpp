#pragma once

#include <cmath>

#include "psdns/comm.hpp"
#include "psdns/field.hpp"
#include "psdns/mesh.hpp"
#include "psdns/solver.hpp"

namespace psdns {

namespace detail {

// Half-spectrum weight: modes with 0 < kz < N/2 stand in for a conjugate
// pair, so they count twice. The Nyquist plane (present only for serial and
// slab layouts) counts once.
template <class Real>
inline Real half_spectrum_weight(const Layout& spec, std::size_t global_kz) {
  const std::size_t n = spec.global[0];
  if (global_kz == 0) return Real(1);
  if (spec.global[2] == n / 2 + 1 && global_kz == spec.global[2] - 1) return Real(1);
  return Real(2);
}

}  // namespace detail

/// Global 0.5*<|u|^2> = 0.5*sum(|u|^2)/N^3, valid on rank 0.
template <class Real>
double kinetic_energy(const RealVecField<Real>& u, Communicator& comm) {
  double local = 0;
  for (int c = 0; c < 3; ++c)
    for (const Real v : u[c].data) local += static_cast<double>(v) * static_cast<double>(v);
  const double n3 = static_cast<double>(u.layout().global_size());
  return comm.reduce_sum(0.5 * local / n3);
}

/// Spectral-side energy via Parseval: 0.5*sum_k w(k)|u_hat|^2 / N^6.
template <class Real>
double spectral_energy(const SpectralVecField<Real>& u_hat, Communicator& comm) {
  const Layout& l = u_hat.layout();
  const double n3 = static_cast<double>(l.global[0]) * static_cast<double>(l.global[0]) *
                    static_cast<double>(l.global[0]);
  double local = 0;
  for (int c = 0; c < 3; ++c) {
    std::size_t m = 0;
    for (std::size_t i = 0; i < l.local[0]; ++i)
      for (std::size_t j = 0; j < l.local[1]; ++j)
        for (std::size_t k = 0; k < l.local[2]; ++k, ++m) {
          const double w = detail::half_spectrum_weight<double>(l, l.offset[2] + k);
          local += w * std::norm(static_cast<std::complex<double>>(u_hat[c].data[m]));
        }
  }
  return comm.reduce_sum(0.5 * local / (n3 * n3));
}

/// Viscous dissipation nu*sum_k w(k)|k|^2 |u_hat|^2 / N^6, valid on rank 0.
template <class Real>
double dissipation(const SpectralVecField<Real>& u_hat, const WaveTables<Real>& t, Real nu,
                   Communicator& comm) {
  const Layout& l = u_hat.layout();
  const double n3 = static_cast<double>(l.global[0]) * static_cast<double>(l.global[0]) *
                    static_cast<double>(l.global[0]);
  double local = 0;
  for (int c = 0; c < 3; ++c) {
    std::size_t m = 0;
    for (std::size_t i = 0; i < l.local[0]; ++i)
      for (std::size_t j = 0; j < l.local[1]; ++j)
        for (std::size_t k = 0; k < l.local[2]; ++k, ++m) {
          const double w = detail::half_spectrum_weight<double>(l, l.offset[2] + k);
          local += w * static_cast<double>(t.k2[m]) *
                   std::norm(static_cast<std::complex<double>>(u_hat[c].data[m]));
        }
  }
  return comm.reduce_sum(static_cast<double>(nu) * local / (n3 * n3));
}

/// Global max |K . u_hat|, valid on rank 0.
template <class Real>
double divergence_max(const SpectralVecField<Real>& u_hat, const WaveTables<Real>& t,
                      Communicator& comm) {
  const Layout& l = u_hat.layout();
  double local = 0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < l.local[0]; ++i)
    for (std::size_t j = 0; j < l.local[1]; ++j)
      for (std::size_t k = 0; k < l.local[2]; ++k, ++m) {
        std::complex<double> div(0);
        for (int c = 0; c < 3; ++c)
          div += static_cast<double>(t.k(c, i, j, k)) *
                 static_cast<std::complex<double>>(u_hat[c].data[m]);
        local = std::max(local, std::abs(div));
      }
  return comm.reduce_max(local);
}

/// 0.5*<|omega|^2> computed through the physical curl, valid on rank 0.
template <class Real>
double enstrophy(Solver<Real>& solver, RealVecField<Real>& scratch) {
  solver.curl_physical(solver.state().u_hat, scratch);
  return kinetic_energy(scratch, solver.comm());
}

}  // namespace psdns
