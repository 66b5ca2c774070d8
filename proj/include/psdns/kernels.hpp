#pragma once

#include <complex>
#include <stdexcept>

#include "psdns/field.hpp"
#include "psdns/mesh.hpp"

namespace psdns {

enum class KernelVariant { Naive, Fused };

/// Elementwise kernels in two interchangeable implementations: a naive
/// multi-pass reference (one temporary-backed pass per arithmetic operation,
/// kept as the in-repo oracle) and a fused single-pass path. Scratch is sized
/// at construction; the kernels never allocate afterwards.
template <class Real>
class Kernels {
 public:
  using C = std::complex<Real>;

  Kernels(KernelVariant variant, const Layout& physical, const Layout& spectral)
      : variant_(variant),
        scratch_a_(physical.local_size()),
        scratch_b_(physical.local_size()),
        cscratch_(spectral.local_size()) {}

  KernelVariant variant() const { return variant_; }

  /// out = a x b elementwise.
  void cross3(const RealVecField<Real>& a, const RealVecField<Real>& b,
              RealVecField<Real>& out) {
    check_shapes(a, b, out);
    if (variant_ == KernelVariant::Fused)
      cross3_fused(a, b, out);
    else
      cross3_naive(a, b, out);
  }

  /// Elementwise tail of the spectral right-hand side, applied in place:
  /// dU *= dealias; P = sum_i dU_i * (K/|K|^2)_i; dU_i -= P*K_i;
  /// dU_i -= nu*|K|^2*Uhat_i.
  void rhs_tail(SpectralVecField<Real>& du, SpectralField<Real>& p_hat,
                const SpectralVecField<Real>& u_hat, const WaveTables<Real>& t, Real nu) {
    if (du.layout() != u_hat.layout() || du.layout() != p_hat.layout ||
        du.layout() != t.layout)
      throw std::invalid_argument("rhs_tail: layout mismatch");
    if (variant_ == KernelVariant::Fused)
      rhs_tail_fused(du, p_hat, u_hat, t, nu);
    else
      rhs_tail_naive(du, p_hat, u_hat, t, nu);
  }

 private:
  static void check_shapes(const RealVecField<Real>& a, const RealVecField<Real>& b,
                           const RealVecField<Real>& out) {
    if (a.layout() != b.layout() || a.layout() != out.layout())
      throw std::invalid_argument("cross3: layout mismatch");
  }

  void cross3_naive(const RealVecField<Real>& a, const RealVecField<Real>& b,
                    RealVecField<Real>& out) {
    const std::size_t n = a.layout().local_size();
    for (int c = 0; c < 3; ++c) {
      const int i1 = (c + 1) % 3, i2 = (c + 2) % 3;
      const Real* a1 = a[i1].data.data();
      const Real* a2 = a[i2].data.data();
      const Real* b1 = b[i1].data.data();
      const Real* b2 = b[i2].data.data();
      Real* o = out[c].data.data();
      for (std::size_t m = 0; m < n; ++m) scratch_a_[m] = a1[m] * b2[m];
      for (std::size_t m = 0; m < n; ++m) scratch_b_[m] = a2[m] * b1[m];
      for (std::size_t m = 0; m < n; ++m) o[m] = scratch_a_[m] - scratch_b_[m];
    }
  }

  void cross3_fused(const RealVecField<Real>& a, const RealVecField<Real>& b,
                    RealVecField<Real>& out) {
    const std::size_t n = a.layout().local_size();
    const Real* a0 = a[0].data.data();
    const Real* a1 = a[1].data.data();
    const Real* a2 = a[2].data.data();
    const Real* b0 = b[0].data.data();
    const Real* b1 = b[1].data.data();
    const Real* b2 = b[2].data.data();
    Real* o0 = out[0].data.data();
    Real* o1 = out[1].data.data();
    Real* o2 = out[2].data.data();
    for (std::size_t m = 0; m < n; ++m) {
      const Real t0 = a1[m] * b2[m];
      const Real t1 = a2[m] * b1[m];
      const Real t2 = a2[m] * b0[m];
      const Real t3 = a0[m] * b2[m];
      const Real t4 = a0[m] * b1[m];
      const Real t5 = a1[m] * b0[m];
      o0[m] = t0 - t1;
      o1[m] = t2 - t3;
      o2[m] = t4 - t5;
    }
  }

  void rhs_tail_naive(SpectralVecField<Real>& du, SpectralField<Real>& p_hat,
                      const SpectralVecField<Real>& u_hat, const WaveTables<Real>& t,
                      Real nu) {
    const std::size_t n = du.layout().local_size();
    for (int c = 0; c < 3; ++c) {
      C* d = du[c].data.data();
      for (std::size_t m = 0; m < n; ++m) d[m] *= static_cast<Real>(t.dealias[m]);
    }
    C* p = p_hat.data.data();
    for (std::size_t m = 0; m < n; ++m) p[m] = du[0].data[m] * t.k_over_k2[0][m];
    for (std::size_t m = 0; m < n; ++m) p[m] += du[1].data[m] * t.k_over_k2[1][m];
    for (std::size_t m = 0; m < n; ++m) p[m] += du[2].data[m] * t.k_over_k2[2][m];
    for (int c = 0; c < 3; ++c) {
      C* d = du[c].data.data();
      std::size_t m = 0;
      for (std::size_t i = 0; i < t.layout.local[0]; ++i)
        for (std::size_t j = 0; j < t.layout.local[1]; ++j)
          for (std::size_t k = 0; k < t.layout.local[2]; ++k, ++m)
            cscratch_[m] = p[m] * static_cast<Real>(t.k(c, i, j, k));
      for (m = 0; m < n; ++m) d[m] -= cscratch_[m];
    }
    for (int c = 0; c < 3; ++c) {
      C* d = du[c].data.data();
      const C* u = u_hat[c].data.data();
      for (std::size_t m = 0; m < n; ++m)
        cscratch_[m] = (nu * static_cast<Real>(t.k2[m])) * u[m];
      for (std::size_t m = 0; m < n; ++m) d[m] -= cscratch_[m];
    }
  }

  void rhs_tail_fused(SpectralVecField<Real>& du, SpectralField<Real>& p_hat,
                      const SpectralVecField<Real>& u_hat, const WaveTables<Real>& t,
                      Real nu) {
    C* d0 = du[0].data.data();
    C* d1 = du[1].data.data();
    C* d2 = du[2].data.data();
    C* p = p_hat.data.data();
    const C* u0 = u_hat[0].data.data();
    const C* u1 = u_hat[1].data.data();
    const C* u2 = u_hat[2].data.data();
    std::size_t m = 0;
    for (std::size_t i = 0; i < t.layout.local[0]; ++i) {
      const Real kx = static_cast<Real>(t.k_axis[0][i]);
      for (std::size_t j = 0; j < t.layout.local[1]; ++j) {
        const Real ky = static_cast<Real>(t.k_axis[1][j]);
        for (std::size_t k = 0; k < t.layout.local[2]; ++k, ++m) {
          const Real kz = static_cast<Real>(t.k_axis[2][k]);
          const Real mask = static_cast<Real>(t.dealias[m]);
          const C a0 = d0[m] * mask;
          const C a1 = d1[m] * mask;
          const C a2 = d2[m] * mask;
          C ph = a0 * t.k_over_k2[0][m];
          ph += a1 * t.k_over_k2[1][m];
          ph += a2 * t.k_over_k2[2][m];
          const Real nk2 = nu * static_cast<Real>(t.k2[m]);
          d0[m] = a0 - ph * kx - nk2 * u0[m];
          d1[m] = a1 - ph * ky - nk2 * u1[m];
          d2[m] = a2 - ph * kz - nk2 * u2[m];
          p[m] = ph;
        }
      }
    }
  }

  KernelVariant variant_;
  std::vector<Real> scratch_a_, scratch_b_;
  std::vector<C> cscratch_;
};

}  // namespace psdns
