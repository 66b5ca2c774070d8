#pragma once

#include <array>
#include <memory>

#include "psdns/fft.hpp"
#include "psdns/kernels.hpp"
#include "psdns/mesh.hpp"

namespace psdns {

/// Classical four-stage Runge-Kutta weights.
template <class Real>
struct RkTableau {
  std::array<Real, 4> a{Real(1) / 6, Real(1) / 3, Real(1) / 3, Real(1) / 6};
  std::array<Real, 3> b{Real(0.5), Real(0.5), Real(1)};
};

/// Velocity in physical and spectral space plus the preallocated stage and
/// work buffers the integrators need.
template <class Real>
struct SolverState {
  RealVecField<Real> u;
  SpectralVecField<Real> u_hat;
  RealVecField<Real> curl;
  SpectralVecField<Real> du, u_hat0, u_hat1;
  SpectralField<Real> p_hat;
  Real t = 0;
  long step = 0;

  SolverState(const Layout& phys, const Layout& spec)
      : u(phys), u_hat(spec), curl(phys), du(spec), u_hat0(spec), u_hat1(spec), p_hat(spec) {}
};

/// Spectral Navier-Stokes right-hand side (rotational form with the pressure
/// eliminated by projection) advanced with forward Euler or RK4.
template <class Real>
class Solver {
 public:
  using C = std::complex<Real>;

  struct Options {
    Real nu = Real(0.000625);
    Real dt = Real(0.01);
    DealiasRule dealias = DealiasRule::Appendix;
    KernelVariant kernel = KernelVariant::Fused;
    std::shared_ptr<FftProvider<Real>> provider;
  };

  Solver(std::size_t n, const Decomposition& d, Communicator& comm, Options opt = {})
      : fft_(n, d, comm, opt.provider),
        tables_(build_wave_tables<Real>(n, d, fft_.info(), opt.dealias)),
        kernels_(opt.kernel, fft_.physical_layout(), fft_.spectral_layout()),
        state_(fft_.physical_layout(), fft_.spectral_layout()),
        work_c_(fft_.spectral_layout()),
        work_u_(fft_.physical_layout()),
        nu_(opt.nu),
        dt_(opt.dt) {}

  Fft3<Real>& fft() { return fft_; }
  const WaveTables<Real>& tables() const { return tables_; }
  Kernels<Real>& kernels() { return kernels_; }
  SolverState<Real>& state() { return state_; }
  Communicator& comm() { return fft_.world(); }
  Real nu() const { return nu_; }
  Real dt() const { return dt_; }
  void set_dt(Real dt) { dt_ = dt; }
  void set_kernel(KernelVariant v) { kernels_ = Kernels<Real>(v, fft_.physical_layout(), fft_.spectral_layout()); }

  /// u_hat = F(u), after state.u has been (re)initialized.
  void sync_spectral() {
    for (int c = 0; c < 3; ++c) fft_.forward(state_.u[c], state_.u_hat[c]);
  }

  /// u = F^{-1}(u_hat).
  void sync_physical() {
    for (int c = 0; c < 3; ++c) fft_.inverse(state_.u_hat[c], state_.u[c]);
  }

  /// out = F^{-1}(i K x a), evaluated one cyclic component pair at a time.
  void curl_physical(const SpectralVecField<Real>& a, RealVecField<Real>& out) {
    curl_component(a, 0, 1, out[2]);
    curl_component(a, 2, 0, out[1]);
    curl_component(a, 1, 2, out[0]);
  }

  /// out = F(a x b) componentwise.
  void cross_spectral(const RealVecField<Real>& a, const RealVecField<Real>& b,
                      SpectralVecField<Real>& out) {
    kernels_.cross3(a, b, work_u_);
    for (int c = 0; c < 3; ++c) fft_.forward(work_u_[c], out[c]);
  }

  /// Assemble du = dealias*(u x w)^ - K (K.du)/|K|^2 - nu |K|^2 u_hat.
  /// Stages > 0 first refresh the physical velocity from u_hat.
  void compute_rhs(int stage = 0) {
    if (stage > 0) sync_physical();
    curl_physical(state_.u_hat, state_.curl);
    cross_spectral(state_.u, state_.curl, state_.du);
    kernels_.rhs_tail(state_.du, state_.p_hat, state_.u_hat, tables_, nu_);
  }

  void euler_step() {
    compute_rhs(0);
    for (int c = 0; c < 3; ++c) {
      C* u = state_.u_hat[c].data.data();
      const C* d = state_.du[c].data.data();
      const std::size_t m = state_.u_hat[c].data.size();
      for (std::size_t i = 0; i < m; ++i) u[i] += d[i] * dt_;
    }
    state_.t += dt_;
    ++state_.step;
    sync_physical();
  }

  void rk4_step() {
    const RkTableau<Real> tab;
    for (int c = 0; c < 3; ++c) {
      state_.u_hat0[c].data = state_.u_hat[c].data;
      state_.u_hat1[c].data = state_.u_hat[c].data;
    }
    for (int rk = 0; rk < 4; ++rk) {
      compute_rhs(rk);
      for (int c = 0; c < 3; ++c) {
        const C* d = state_.du[c].data.data();
        const C* u0 = state_.u_hat0[c].data.data();
        C* u = state_.u_hat[c].data.data();
        C* u1 = state_.u_hat1[c].data.data();
        const std::size_t m = state_.u_hat[c].data.size();
        if (rk < 3) {
          const Real bdt = tab.b[rk] * dt_;
          for (std::size_t i = 0; i < m; ++i) u[i] = u0[i] + bdt * d[i];
        }
        const Real adt = tab.a[rk] * dt_;
        for (std::size_t i = 0; i < m; ++i) u1[i] += adt * d[i];
      }
    }
    for (int c = 0; c < 3; ++c) state_.u_hat[c].data = state_.u_hat1[c].data;
    state_.t += dt_;
    ++state_.step;
    sync_physical();
  }

 private:
  // out = F^{-1}(i*(K[ka]*a[kb] - K[kb]*a[ka])), one cyclic curl combination.
  void curl_component(const SpectralVecField<Real>& a, int ka, int kb,
                      RealField<Real>& out) {
    const SpectralField<Real>& ap = a[kb];
    const SpectralField<Real>& am = a[ka];
    C* w = work_c_.data.data();
    std::size_t m = 0;
    for (std::size_t i = 0; i < tables_.layout.local[0]; ++i)
      for (std::size_t j = 0; j < tables_.layout.local[1]; ++j)
        for (std::size_t k = 0; k < tables_.layout.local[2]; ++k, ++m) {
          const Real k1 = static_cast<Real>(tables_.k(ka, i, j, k));
          const Real k2 = static_cast<Real>(tables_.k(kb, i, j, k));
          const C v = k1 * ap.data[m] - k2 * am.data[m];
          w[m] = C(-v.imag(), v.real());  // multiply by i
        }
    fft_.inverse(work_c_, out);
  }

  Fft3<Real> fft_;
  WaveTables<Real> tables_;
  Kernels<Real> kernels_;
  SolverState<Real> state_;
  SpectralField<Real> work_c_;
  RealVecField<Real> work_u_;
  Real nu_;
  Real dt_;
};

}  // namespace psdns
