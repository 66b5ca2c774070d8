#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstring>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "psdns/comm.hpp"
#include "psdns/field.hpp"
#include "psdns/layout.hpp"

namespace psdns {

/// Serial 1D transform provider. Forward transforms are unnormalized sums;
/// each inverse transform carries 1/n, so a composed 3D inverse carries 1/n^3.
template <class Real>
class FftProvider {
 public:
  virtual ~FftProvider() = default;

  /// In-place complex transform along the middle axis of an (outer, n, stride)
  /// contiguous view.
  virtual void cfft(std::complex<Real>* data, std::size_t outer, std::size_t n,
                    std::size_t stride, bool inverse) = 0;

  /// Real-to-half-spectrum transform of `lines` contiguous length-n lines;
  /// each output line holds n/2+1 coefficients.
  virtual void rfft(const Real* in, std::complex<Real>* out, std::size_t n,
                    std::size_t lines) = 0;

  /// Inverse of rfft, carrying 1/n.
  virtual void irfft(const std::complex<Real>* in, Real* out, std::size_t n,
                     std::size_t lines) = 0;
};

/// Built-in iterative radix-2 implementation; supports power-of-two lengths
/// only. Real transforms use the even/odd packing into a half-length complex
/// transform. Twiddle and bit-reversal tables are cached per length, so a
/// provider instance is meant to be owned by one rank.
template <class Real>
class RadixFft final : public FftProvider<Real> {
 public:
  void cfft(std::complex<Real>* data, std::size_t outer, std::size_t n, std::size_t stride,
            bool inverse) override {
    if (n == 1) return;
    const Tables& t = tables(n);
    const Real inv_n = Real(1) / static_cast<Real>(n);
    for (std::size_t o = 0; o < outer; ++o) {
      std::complex<Real>* base = data + o * n * stride;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = t.rev[i];
        if (j > i)
          std::swap_ranges(base + i * stride, base + (i + 1) * stride, base + j * stride);
      }
      for (std::size_t half = 1; half < n; half <<= 1) {
        for (std::size_t start = 0; start < n; start += 2 * half) {
          for (std::size_t k = 0; k < half; ++k) {
            std::complex<Real> w = t.tw[half + k];
            if (inverse) w = std::conj(w);
            std::complex<Real>* r1 = base + (start + k) * stride;
            std::complex<Real>* r2 = base + (start + k + half) * stride;
            for (std::size_t b = 0; b < stride; ++b) {
              const std::complex<Real> u = r1[b];
              const std::complex<Real> v = r2[b] * w;
              r1[b] = u + v;
              r2[b] = u - v;
            }
          }
        }
      }
      if (inverse)
        for (std::size_t i = 0; i < n * stride; ++i) base[i] *= inv_n;
    }
  }

  void rfft(const Real* in, std::complex<Real>* out, std::size_t n, std::size_t lines) override {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("rfft: length must be even and >= 2");
    const std::size_t h = n / 2;
    const Tables& t = tables(n);  // for t.rtw
    scratch_.resize(h);
    for (std::size_t l = 0; l < lines; ++l) {
      const Real* x = in + l * n;
      std::complex<Real>* y = out + l * (h + 1);
      for (std::size_t i = 0; i < h; ++i) scratch_[i] = {x[2 * i], x[2 * i + 1]};
      cfft(scratch_.data(), 1, h, 1, false);
      const std::complex<Real> z0 = scratch_[0];
      y[0] = {z0.real() + z0.imag(), Real(0)};
      y[h] = {z0.real() - z0.imag(), Real(0)};
      for (std::size_t k = 1; k < h; ++k) {
        const std::complex<Real> zk = scratch_[k];
        const std::complex<Real> zc = std::conj(scratch_[h - k]);
        const std::complex<Real> a = Real(0.5) * (zk + zc);
        const std::complex<Real> b =
            std::complex<Real>(0, Real(-0.5)) * (zk - zc);
        y[k] = a + t.rtw[k] * b;
      }
    }
  }

  void irfft(const std::complex<Real>* in, Real* out, std::size_t n, std::size_t lines) override {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("irfft: length must be even and >= 2");
    const std::size_t h = n / 2;
    const Tables& t = tables(n);
    scratch_.resize(h);
    for (std::size_t l = 0; l < lines; ++l) {
      const std::complex<Real>* y = in + l * (h + 1);
      Real* x = out + l * n;
      for (std::size_t k = 0; k < h; ++k) {
        const std::complex<Real> yk = y[k];
        const std::complex<Real> yc = std::conj(y[h - k]);
        const std::complex<Real> a = Real(0.5) * (yk + yc);
        const std::complex<Real> b =
            std::complex<Real>(0, Real(0.5)) * (yk - yc);
        scratch_[k] = a + std::conj(t.rtw[k]) * b;
      }
      cfft(scratch_.data(), 1, h, 1, true);
      for (std::size_t i = 0; i < h; ++i) {
        x[2 * i] = scratch_[i].real();
        x[2 * i + 1] = scratch_[i].imag();
      }
    }
  }

 private:
  struct Tables {
    std::vector<std::size_t> rev;         // bit-reversal permutation
    std::vector<std::complex<Real>> tw;   // tw[half + k] = exp(-2*pi*i*k/(2*half))
    std::vector<std::complex<Real>> rtw;  // rtw[k] = exp(-2*pi*i*k/n), k <= n/2
  };

  const Tables& tables(std::size_t n) {
    auto it = cache_.find(n);
    if (it != cache_.end()) return it->second;
    if ((n & (n - 1)) != 0) throw std::invalid_argument("RadixFft: length must be a power of two");
    Tables t;
    t.rev.resize(n);
    std::size_t bits = 0;
    while ((std::size_t(1) << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b)
        if (i & (std::size_t(1) << b)) r |= std::size_t(1) << (bits - 1 - b);
      t.rev[i] = r;
    }
    t.tw.resize(n);
    for (std::size_t half = 1; half < n; half <<= 1)
      for (std::size_t k = 0; k < half; ++k) {
        const double ang = -std::numbers::pi * static_cast<double>(k) / static_cast<double>(half);
        t.tw[half + k] = {static_cast<Real>(std::cos(ang)), static_cast<Real>(std::sin(ang))};
      }
    t.rtw.resize(n / 2 + 1);
    for (std::size_t k = 0; k <= n / 2; ++k) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      t.rtw[k] = {static_cast<Real>(std::cos(ang)), static_cast<Real>(std::sin(ang))};
    }
    return cache_.emplace(n, std::move(t)).first->second;
  }

  std::map<std::size_t, Tables> cache_;
  std::vector<std::complex<Real>> scratch_;
};

/// Distributed 3D real transforms for serial, slab and pencil decompositions.
/// All intermediate storage is preallocated at construction; forward/inverse
/// are rank-collective (they contain all-to-all rendezvous).
template <class Real>
class Fft3 {
 public:
  Fft3(std::size_t n, const Decomposition& d, Communicator& world,
       std::shared_ptr<FftProvider<Real>> provider = nullptr)
      : n_(n), d_(d), world_(&world), provider_(std::move(provider)) {
    d_.validate(n_);
    if (world.size() != d_.ranks)
      throw std::invalid_argument("Fft3: communicator size does not match decomposition");
    if (!provider_) provider_ = std::make_shared<RadixFft<Real>>();
    info_ = rank_info(d_, world.rank());
    phys_ = psdns::physical_layout(n_, d_, info_);
    spec_ = psdns::spectral_layout(n_, d_, info_);

    switch (d_.kind) {
      case DecompKind::Serial:
        ws_a_.resize(spec_.local_size());
        break;
      case DecompKind::Slab: {
        const std::size_t np = n_ / d_.ranks;
        ws_a_.resize(np * n_ * (n_ / 2 + 1));
        ws_b_.resize(ws_a_.size());
        break;
      }
      case DecompKind::Pencil: {
        const std::size_t n1 = n_ / d_.p1;
        const std::size_t n2 = n_ / d_.p2;
        ws_z_.resize(n1 * n2 * (n_ / 2 + 1));
        ws_a_.resize(n_ * n2 * (n1 / 2));
        ws_b_.resize(ws_a_.size());
        // All exchanges happen with data aligned in x: split by rank%p1 for
        // the xz group, rank/p1 for the xy group.
        comm_xy_ = world.split(info_.xz_rank);
        comm_xz_ = world.split(info_.xy_rank);
        break;
      }
    }
  }

  std::size_t n() const { return n_; }
  const Decomposition& decomposition() const { return d_; }
  const RankInfo& info() const { return info_; }
  const Layout& physical_layout() const { return phys_; }
  const Layout& spectral_layout() const { return spec_; }
  Communicator& world() { return *world_; }
  FftProvider<Real>& provider() { return *provider_; }

  void forward(const RealField<Real>& u, SpectralField<Real>& fu) {
    if (u.layout != phys_ || fu.layout != spec_)
      throw std::invalid_argument("Fft3::forward: layout mismatch");
    switch (d_.kind) {
      case DecompKind::Serial: forward_serial(u, fu); break;
      case DecompKind::Slab: forward_slab(u, fu); break;
      case DecompKind::Pencil: forward_pencil(u, fu); break;
    }
  }

  void inverse(const SpectralField<Real>& fu, RealField<Real>& u) {
    if (u.layout != phys_ || fu.layout != spec_)
      throw std::invalid_argument("Fft3::inverse: layout mismatch");
    switch (d_.kind) {
      case DecompKind::Serial: inverse_serial(fu, u); break;
      case DecompKind::Slab: inverse_slab(fu, u); break;
      case DecompKind::Pencil: inverse_pencil(fu, u); break;
    }
  }

 private:
  using C = std::complex<Real>;

  void forward_serial(const RealField<Real>& u, SpectralField<Real>& fu) {
    const std::size_t nf = n_ / 2 + 1;
    provider_->rfft(u.data.data(), fu.data.data(), n_, n_ * n_);
    provider_->cfft(fu.data.data(), n_, n_, nf, false);
    provider_->cfft(fu.data.data(), 1, n_, n_ * nf, false);
  }

  void inverse_serial(const SpectralField<Real>& fu, RealField<Real>& u) {
    const std::size_t nf = n_ / 2 + 1;
    std::copy(fu.data.begin(), fu.data.end(), ws_a_.begin());
    provider_->cfft(ws_a_.data(), 1, n_, n_ * nf, true);
    provider_->cfft(ws_a_.data(), n_, n_, nf, true);
    provider_->irfft(ws_a_.data(), u.data.data(), n_, n_ * n_);
  }

  // Slab: 2D transform over the local (y,z) planes, transpose+exchange so the
  // x axis becomes local, then transform along x.
  void forward_slab(const RealField<Real>& u, SpectralField<Real>& fu) {
    const std::size_t np = n_ / d_.ranks;
    const std::size_t nf = n_ / 2 + 1;
    provider_->rfft(u.data.data(), ws_a_.data(), n_, np * n_);
    provider_->cfft(ws_a_.data(), np, n_, nf, false);
    // ws_a (np, n, nf) -> ws_b (ranks, np, np, nf)
    const std::size_t row = np * nf;
    for (int p = 0; p < d_.ranks; ++p)
      for (std::size_t i = 0; i < np; ++i)
        std::memcpy(ws_b_.data() + (static_cast<std::size_t>(p) * np + i) * row,
                    ws_a_.data() + (i * n_ + static_cast<std::size_t>(p) * np) * nf,
                    row * sizeof(C));
    world_->all_to_all_t(ws_b_.data(), fu.data.data(), np * row);
    provider_->cfft(fu.data.data(), 1, n_, np * nf, false);
  }

  void inverse_slab(const SpectralField<Real>& fu, RealField<Real>& u) {
    const std::size_t np = n_ / d_.ranks;
    const std::size_t nf = n_ / 2 + 1;
    std::copy(fu.data.begin(), fu.data.end(), ws_a_.begin());
    provider_->cfft(ws_a_.data(), 1, n_, np * nf, true);
    world_->all_to_all_t(ws_a_.data(), ws_b_.data(), np * np * nf);
    const std::size_t row = np * nf;
    for (int p = 0; p < d_.ranks; ++p)
      for (std::size_t i = 0; i < np; ++i)
        std::memcpy(ws_a_.data() + (i * n_ + static_cast<std::size_t>(p) * np) * nf,
                    ws_b_.data() + (static_cast<std::size_t>(p) * np + i) * row,
                    row * sizeof(C));
    provider_->cfft(ws_a_.data(), np, n_, nf, true);
    provider_->irfft(ws_a_.data(), u.data.data(), n_, np * n_);
  }

  // Pencil: real transform along z, exchange within the xz group so x becomes
  // local, transform along x, exchange within the xy group so y becomes
  // local, transform along y. The z-Nyquist plane is dropped before the first
  // exchange.
  void forward_pencil(const RealField<Real>& u, SpectralField<Real>& fu) {
    const std::size_t n1 = n_ / d_.p1;
    const std::size_t n2 = n_ / d_.p2;
    const std::size_t nf = n_ / 2 + 1;
    const std::size_t hz = n1 / 2;

    provider_->rfft(u.data.data(), ws_z_.data(), n_, n1 * n2);
    // ws_z (n1, n2, nf) minus Nyquist -> ws_a (p1, n1, n2, hz)
    for (int p = 0; p < d_.p1; ++p)
      for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j)
          std::memcpy(
              ws_a_.data() + (((static_cast<std::size_t>(p) * n1 + i) * n2) + j) * hz,
              ws_z_.data() + (i * n2 + j) * nf + static_cast<std::size_t>(p) * hz,
              hz * sizeof(C));
    comm_xz_->all_to_all_t(ws_a_.data(), ws_b_.data(), n1 * n2 * hz);
    // ws_b is now (n, n2, hz); transform along x.
    provider_->cfft(ws_b_.data(), 1, n_, n2 * hz, false);
    comm_xy_->all_to_all_t(ws_b_.data(), ws_a_.data(), n2 * n2 * hz);
    // ws_a (p2, n2, n2, hz) -> fu (n2, n, hz)
    const std::size_t row = n2 * hz;
    for (int p = 0; p < d_.p2; ++p)
      for (std::size_t a = 0; a < n2; ++a)
        std::memcpy(fu.data.data() + (a * n_ + static_cast<std::size_t>(p) * n2) * hz,
                    ws_a_.data() + (static_cast<std::size_t>(p) * n2 + a) * row,
                    row * sizeof(C));
    provider_->cfft(fu.data.data(), n2, n_, hz, false);
  }

  void inverse_pencil(const SpectralField<Real>& fu, RealField<Real>& u) {
    const std::size_t n1 = n_ / d_.p1;
    const std::size_t n2 = n_ / d_.p2;
    const std::size_t nf = n_ / 2 + 1;
    const std::size_t hz = n1 / 2;

    std::copy(fu.data.begin(), fu.data.end(), ws_a_.begin());
    provider_->cfft(ws_a_.data(), n2, n_, hz, true);
    // ws_a (n2, n, hz) -> ws_b (p2, n2, n2, hz)
    const std::size_t row = n2 * hz;
    for (int p = 0; p < d_.p2; ++p)
      for (std::size_t a = 0; a < n2; ++a)
        std::memcpy(ws_b_.data() + (static_cast<std::size_t>(p) * n2 + a) * row,
                    ws_a_.data() + (a * n_ + static_cast<std::size_t>(p) * n2) * hz,
                    row * sizeof(C));
    comm_xy_->all_to_all_t(ws_b_.data(), ws_a_.data(), n2 * n2 * hz);
    // ws_a is (n, n2, hz); inverse transform along x.
    provider_->cfft(ws_a_.data(), 1, n_, n2 * hz, true);
    comm_xz_->all_to_all_t(ws_a_.data(), ws_b_.data(), n1 * n2 * hz);
    // ws_b (p1, n1, n2, hz) -> ws_z (n1, n2, nf), Nyquist reinserted as zero.
    for (int p = 0; p < d_.p1; ++p)
      for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j)
          std::memcpy(
              ws_z_.data() + (i * n2 + j) * nf + static_cast<std::size_t>(p) * hz,
              ws_b_.data() + (((static_cast<std::size_t>(p) * n1 + i) * n2) + j) * hz,
              hz * sizeof(C));
    for (std::size_t m = 0; m < n1 * n2; ++m) ws_z_[m * nf + nf - 1] = C(0);
    provider_->irfft(ws_z_.data(), u.data.data(), n_, n1 * n2);
  }

  std::size_t n_;
  Decomposition d_;
  Communicator* world_;
  std::shared_ptr<FftProvider<Real>> provider_;
  RankInfo info_;
  Layout phys_;
  Layout spec_;
  std::vector<C> ws_a_, ws_b_, ws_z_;
  std::unique_ptr<Communicator> comm_xz_, comm_xy_;
};

}  // namespace psdns
