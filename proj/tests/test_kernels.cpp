#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>
#include <random>

#include "psdns/kernels.hpp"
#include "psdns/layout.hpp"
#include "psdns/mesh.hpp"

using namespace psdns;

namespace {

template <class Real>
double ulp_diff(Real a, Real b) {
  if (a == b) return 0.0;
  const Real scale =
      std::max({std::abs(a), std::abs(b), std::numeric_limits<Real>::min()});
  return std::abs(static_cast<double>(a) - static_cast<double>(b)) /
         (static_cast<double>(std::numeric_limits<Real>::epsilon()) *
          static_cast<double>(scale));
}

template <class Real>
double ulp_diff(std::complex<Real> a, std::complex<Real> b) {
  return std::max(ulp_diff(a.real(), b.real()), ulp_diff(a.imag(), b.imag()));
}

template <class Real>
void fill_random(RealVecField<Real>& f, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1, 1);
  for (int c = 0; c < 3; ++c)
    for (auto& v : f[c].data) v = static_cast<Real>(dist(rng));
}

template <class Real>
void fill_random(SpectralVecField<Real>& f, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1, 1);
  for (int c = 0; c < 3; ++c)
    for (auto& v : f[c].data) v = {static_cast<Real>(dist(rng)), static_cast<Real>(dist(rng))};
}

}  // namespace

TEST_CASE("cross3: unit-vector identities") {
  const std::size_t n = 4;
  auto d = Decomposition::serial();
  auto phys = physical_layout(n, d, rank_info(d, 0));
  auto spec = spectral_layout(n, d, rank_info(d, 0));
  for (auto variant : {KernelVariant::Naive, KernelVariant::Fused}) {
    Kernels<double> kern(variant, phys, spec);
    RealVecField<double> ex(phys), ey(phys), out(phys);
    ex[0].fill(1);
    ex[1].fill(0);
    ex[2].fill(0);
    ey[0].fill(0);
    ey[1].fill(1);
    ey[2].fill(0);
    kern.cross3(ex, ey, out);  // e_x x e_y = e_z
    for (double v : out[0].data) CHECK(v == 0.0);
    for (double v : out[1].data) CHECK(v == 0.0);
    for (double v : out[2].data) CHECK(v == 1.0);
    kern.cross3(ey, ex, out);  // anticommutes
    for (double v : out[2].data) CHECK(v == -1.0);
    kern.cross3(ex, ex, out);  // a x a = 0
    for (int c = 0; c < 3; ++c)
      for (double v : out[c].data) CHECK(v == 0.0);
  }
}

TEST_CASE("cross3: pointwise example (1,2,3) x (4,5,6) = (-3,6,-3)") {
  const std::size_t n = 4;
  auto d = Decomposition::serial();
  auto phys = physical_layout(n, d, rank_info(d, 0));
  auto spec = spectral_layout(n, d, rank_info(d, 0));
  for (auto variant : {KernelVariant::Naive, KernelVariant::Fused}) {
    Kernels<double> kern(variant, phys, spec);
    RealVecField<double> a(phys), b(phys), out(phys);
    for (int c = 0; c < 3; ++c) {
      a[c].fill(static_cast<double>(c + 1));
      b[c].fill(static_cast<double>(c + 4));
    }
    kern.cross3(a, b, out);
    for (double v : out[0].data) CHECK(v == -3.0);
    for (double v : out[1].data) CHECK(v == 6.0);
    for (double v : out[2].data) CHECK(v == -3.0);
  }
}

TEST_CASE("cross3: naive matches an extended-precision oracle") {
  const std::size_t n = 8;
  auto d = Decomposition::serial();
  auto phys = physical_layout(n, d, rank_info(d, 0));
  auto spec = spectral_layout(n, d, rank_info(d, 0));
  Kernels<double> kern(KernelVariant::Naive, phys, spec);
  RealVecField<double> a(phys), b(phys), out(phys);
  fill_random(a, 7);
  fill_random(b, 8);
  kern.cross3(a, b, out);
  for (std::size_t m = 0; m < phys.local_size(); ++m)
    for (int c = 0; c < 3; ++c) {
      const int i1 = (c + 1) % 3, i2 = (c + 2) % 3;
      const long double ref = static_cast<long double>(a[i1].data[m]) * b[i2].data[m] -
                              static_cast<long double>(a[i2].data[m]) * b[i1].data[m];
      CHECK(static_cast<double>(out[c].data[m]) ==
            doctest::Approx(static_cast<double>(ref)).epsilon(1e-14));
    }
}

TEST_CASE_TEMPLATE("cross3: fused and naive agree within 4 ulp", Real, float, double) {
  const std::size_t n = 16;
  auto d = Decomposition::serial();
  auto phys = physical_layout(n, d, rank_info(d, 0));
  auto spec = spectral_layout(n, d, rank_info(d, 0));
  Kernels<Real> naive(KernelVariant::Naive, phys, spec);
  Kernels<Real> fused(KernelVariant::Fused, phys, spec);
  RealVecField<Real> a(phys), b(phys), on(phys), of(phys);
  fill_random(a, 11);
  fill_random(b, 12);
  naive.cross3(a, b, on);
  fused.cross3(a, b, of);
  double worst = 0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t m = 0; m < phys.local_size(); ++m)
      worst = std::max(worst, ulp_diff(on[c].data[m], of[c].data[m]));
  CHECK(worst <= 4.0);
}

TEST_CASE("rhs_tail: viscous term only when the nonlinear input vanishes") {
  const std::size_t n = 8;
  auto d = Decomposition::serial();
  auto phys = physical_layout(n, d, rank_info(d, 0));
  auto spec = spectral_layout(n, d, rank_info(d, 0));
  auto t = build_wave_tables<double>(n, d, rank_info(d, 0), DealiasRule::Appendix);
  const double nu = 0.05;
  for (auto variant : {KernelVariant::Naive, KernelVariant::Fused}) {
    Kernels<double> kern(variant, phys, spec);
    SpectralVecField<double> du(spec), u_hat(spec);
    SpectralField<double> p(spec);
    fill_random(u_hat, 3);
    for (int c = 0; c < 3; ++c)
      for (auto& v : du[c].data) v = {0, 0};
    kern.rhs_tail(du, p, u_hat, t, nu);
    for (std::size_t m = 0; m < spec.local_size(); ++m) {
      CHECK(std::abs(p.data[m]) == 0.0);
      for (int c = 0; c < 3; ++c) {
        const std::complex<double> expect =
            -nu * static_cast<double>(t.k2[m]) * u_hat[c].data[m];
        CHECK(std::abs(du[c].data[m] - expect) < 1e-14 * (1.0 + std::abs(expect)));
      }
    }
  }
}

TEST_CASE("rhs_tail: output is orthogonal to K and dealiased modes carry no advection") {
  const std::size_t n = 8;
  auto d = Decomposition::serial();
  auto phys = physical_layout(n, d, rank_info(d, 0));
  auto spec = spectral_layout(n, d, rank_info(d, 0));
  auto t = build_wave_tables<double>(n, d, rank_info(d, 0), DealiasRule::Appendix);
  for (auto variant : {KernelVariant::Naive, KernelVariant::Fused}) {
    Kernels<double> kern(variant, phys, spec);
    SpectralVecField<double> du(spec), u_hat(spec);
    SpectralField<double> p(spec);
    fill_random(du, 21);
    for (int c = 0; c < 3; ++c)
      for (auto& v : u_hat[c].data) v = {0, 0};  // nu term off via u_hat = 0
    SpectralVecField<double> du_in(spec);
    for (int c = 0; c < 3; ++c) du_in[c].data = du[c].data;
    kern.rhs_tail(du, p, u_hat, t, 1.0);
    std::size_t m = 0;
    for (std::size_t i = 0; i < spec.local[0]; ++i)
      for (std::size_t j = 0; j < spec.local[1]; ++j)
        for (std::size_t k = 0; k < spec.local[2]; ++k, ++m) {
          std::complex<double> dot(0);
          for (int c = 0; c < 3; ++c)
            dot += static_cast<double>(t.k(c, i, j, k)) * du[c].data[m];
          CHECK(std::abs(dot) < 1e-12);  // projected result is divergence-free
          if (!t.dealias[m])
            for (int c = 0; c < 3; ++c) CHECK(std::abs(du[c].data[m]) == 0.0);
          // p reproduces K.du_in/|K|^2 of the masked input
          std::complex<double> expect_p(0);
          for (int c = 0; c < 3; ++c)
            expect_p += du_in[c].data[m] * static_cast<double>(t.dealias[m]) *
                        t.k_over_k2[c][m];
          CHECK(std::abs(p.data[m] - expect_p) < 1e-13);
        }
  }
}

TEST_CASE_TEMPLATE("rhs_tail: fused and naive agree within 4 ulp", Real, float, double) {
  const std::size_t n = 16;
  auto d = Decomposition::serial();
  auto phys = physical_layout(n, d, rank_info(d, 0));
  auto spec = spectral_layout(n, d, rank_info(d, 0));
  auto t = build_wave_tables<Real>(n, d, rank_info(d, 0), DealiasRule::Appendix);
  Kernels<Real> naive(KernelVariant::Naive, phys, spec);
  Kernels<Real> fused(KernelVariant::Fused, phys, spec);
  SpectralVecField<Real> dn(spec), df(spec), u_hat(spec);
  SpectralField<Real> pn(spec), pf(spec);
  fill_random(u_hat, 31);
  fill_random(dn, 32);
  for (int c = 0; c < 3; ++c) df[c].data = dn[c].data;
  const Real nu = Real(0.01);
  naive.rhs_tail(dn, pn, u_hat, t, nu);
  fused.rhs_tail(df, pf, u_hat, t, nu);
  double worst = 0;
  for (std::size_t m = 0; m < spec.local_size(); ++m) {
    worst = std::max(worst, ulp_diff(pn.data[m], pf.data[m]));
    for (int c = 0; c < 3; ++c)
      worst = std::max(worst, ulp_diff(dn[c].data[m], df[c].data[m]));
  }
  CHECK(worst <= 4.0);
}

TEST_CASE("kernels reject mismatched layouts") {
  const std::size_t n = 8;
  auto d = Decomposition::serial();
  auto phys = physical_layout(n, d, rank_info(d, 0));
  auto spec = spectral_layout(n, d, rank_info(d, 0));
  Kernels<double> kern(KernelVariant::Fused, phys, spec);
  Layout small = physical_layout(4, d, rank_info(d, 0));
  RealVecField<double> a(phys), b(small), out(phys);
  CHECK_THROWS_AS(kern.cross3(a, b, out), std::invalid_argument);
  auto t = build_wave_tables<double>(n, d, rank_info(d, 0), DealiasRule::Appendix);
  SpectralVecField<double> du(spec);
  SpectralField<double> p(spectral_layout(4, d, rank_info(d, 0)));
  SpectralVecField<double> u_hat(spec);
  CHECK_THROWS_AS(kern.rhs_tail(du, p, u_hat, t, 0.1), std::invalid_argument);
}
