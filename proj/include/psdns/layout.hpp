#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace psdns {

enum class DecompKind { Serial, Slab, Pencil };

/// How a global cube of extent N is partitioned across M ranks.
struct Decomposition {
  DecompKind kind = DecompKind::Serial;
  int ranks = 1;
  int p1 = 1;  // pencil: CPUs in the first split direction
  int p2 = 1;  // pencil: ranks / p1

  static Decomposition serial() { return {DecompKind::Serial, 1, 1, 1}; }

  static Decomposition slab(int ranks) {
    return {DecompKind::Slab, ranks, 1, ranks};
  }

  static Decomposition pencil(int ranks, int p1) {
    return {DecompKind::Pencil, ranks, p1, p1 > 0 ? ranks / p1 : 0};
  }

  void validate(std::size_t n) const {
    if (ranks <= 0) throw std::invalid_argument("decomposition: ranks must be positive");
    switch (kind) {
      case DecompKind::Serial:
        if (ranks != 1) throw std::invalid_argument("serial decomposition requires exactly one rank");
        break;
      case DecompKind::Slab:
        if (static_cast<std::size_t>(ranks) > n || n % ranks != 0)
          throw std::invalid_argument("slab decomposition: rank count must divide N and not exceed it");
        break;
      case DecompKind::Pencil: {
        if (p1 <= 0 || p2 <= 0 || p1 * p2 != ranks)
          throw std::invalid_argument("pencil decomposition: p1*p2 must equal rank count");
        if (n % p1 != 0 || n % p2 != 0)
          throw std::invalid_argument("pencil decomposition: p1 and p2 must divide N");
        if ((n / p1) % 2 != 0)
          throw std::invalid_argument("pencil decomposition: N/p1 must be even");
        break;
      }
    }
  }
};

/// Per-rank coordinates in the process grid. For pencil runs the global rank
/// factors into a position in the xz group (rank % p1) and the xy group
/// (rank / p1); serial and slab runs only use the global rank.
struct RankInfo {
  int rank = 0;
  int xz_rank = 0;
  int xy_rank = 0;
};

inline RankInfo rank_info(const Decomposition& d, int rank) {
  if (rank < 0 || rank >= d.ranks) throw std::invalid_argument("rank out of range");
  if (d.kind == DecompKind::Pencil) return {rank, rank % d.p1, rank / d.p1};
  return {rank, 0, 0};
}

/// Local block of a partitioned global 3D array: extents plus the offset of
/// this rank's block along each axis. Blocks are contiguous, disjoint and
/// ordered by rank within each split axis.
struct Layout {
  std::array<std::size_t, 3> global{};
  std::array<std::size_t, 3> local{};
  std::array<std::size_t, 3> offset{};

  std::size_t local_size() const { return local[0] * local[1] * local[2]; }
  std::size_t global_size() const { return global[0] * global[1] * global[2]; }

  bool operator==(const Layout&) const = default;
};

/// Physical-space layout: slab splits axis 0 by rank, pencil splits axis 0 by
/// the xz-group index and axis 1 by the xy-group index. Axis 2 is never split.
inline Layout physical_layout(std::size_t n, const Decomposition& d, const RankInfo& r) {
  d.validate(n);
  Layout l;
  l.global = {n, n, n};
  switch (d.kind) {
    case DecompKind::Serial:
      l.local = {n, n, n};
      break;
    case DecompKind::Slab: {
      const std::size_t np = n / d.ranks;
      l.local = {np, n, n};
      l.offset = {static_cast<std::size_t>(r.rank) * np, 0, 0};
      break;
    }
    case DecompKind::Pencil: {
      const std::size_t n1 = n / d.p1;
      const std::size_t n2 = n / d.p2;
      l.local = {n1, n2, n};
      l.offset = {static_cast<std::size_t>(r.xz_rank) * n1,
                  static_cast<std::size_t>(r.xy_rank) * n2, 0};
      break;
    }
  }
  return l;
}

/// Spectral (half-spectrum) layout. Axes are (kx, ky, kz). Serial keeps the
/// full (N, N, N/2+1) block; slab splits ky by rank; pencil splits kx by the
/// xy-group index and kz by the xz-group index, with the z-Nyquist plane
/// dropped so the local z extent is (N/p1)/2.
inline Layout spectral_layout(std::size_t n, const Decomposition& d, const RankInfo& r) {
  d.validate(n);
  const std::size_t nf = n / 2 + 1;
  Layout l;
  switch (d.kind) {
    case DecompKind::Serial:
      l.global = {n, n, nf};
      l.local = {n, n, nf};
      break;
    case DecompKind::Slab: {
      const std::size_t np = n / d.ranks;
      l.global = {n, n, nf};
      l.local = {n, np, nf};
      l.offset = {0, static_cast<std::size_t>(r.rank) * np, 0};
      break;
    }
    case DecompKind::Pencil: {
      const std::size_t n1 = n / d.p1;
      const std::size_t n2 = n / d.p2;
      l.global = {n, n, n / 2};
      l.local = {n2, n, n1 / 2};
      l.offset = {static_cast<std::size_t>(r.xy_rank) * n2, 0,
                  static_cast<std::size_t>(r.xz_rank) * (n1 / 2)};
      break;
    }
  }
  return l;
}

}  // namespace psdns
