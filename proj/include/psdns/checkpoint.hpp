#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "psdns/solver.hpp"

namespace psdns {

struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

constexpr char kCheckpointMagic[4] = {'S', 'P', 'K', '1'};
constexpr std::uint32_t kCheckpointVersion = 1;

#pragma pack(push, 1)
struct CheckpointHeader {
  char magic[4];
  std::uint32_t version;
  std::uint64_t n;
  std::uint32_t precision_bytes;
  std::uint32_t kind;
  std::int32_t ranks;
  std::int32_t p1;
  double t;
  std::int64_t step;
};
#pragma pack(pop)

inline std::string rank_file(const std::string& path, int rank) {
  return path + ".r" + std::to_string(rank);
}

}  // namespace detail

/// Each rank writes its own spectral block; rank 0 adds a sidecar manifest.
template <class Real>
void checkpoint_write(Solver<Real>& solver, const std::string& path) {
  const auto& st = solver.state();
  const auto& d = solver.fft().decomposition();
  const int rank = solver.comm().rank();

  detail::CheckpointHeader h{};
  std::memcpy(h.magic, detail::kCheckpointMagic, 4);
  h.version = detail::kCheckpointVersion;
  h.n = solver.fft().n();
  h.precision_bytes = sizeof(Real);
  h.kind = static_cast<std::uint32_t>(d.kind);
  h.ranks = d.ranks;
  h.p1 = d.p1;
  h.t = static_cast<double>(st.t);
  h.step = st.step;

  const std::string file = detail::rank_file(path, rank);
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("checkpoint: cannot open " + file + " for writing");
  out.write(reinterpret_cast<const char*>(&h), sizeof(h));
  for (int c = 0; c < 3; ++c)
    out.write(reinterpret_cast<const char*>(st.u_hat[c].data.data()),
              static_cast<std::streamsize>(st.u_hat[c].data.size() * sizeof(std::complex<Real>)));
  if (!out) throw CheckpointError("checkpoint: write failed for " + file);
  out.close();

  if (rank == 0) {
    nlohmann::json manifest{
        {"magic", "SPK1"},
        {"version", detail::kCheckpointVersion},
        {"n", h.n},
        {"precision", sizeof(Real) == 8 ? "double" : "single"},
        {"decomposition", d.kind == DecompKind::Serial ? "serial"
                          : d.kind == DecompKind::Slab ? "slab"
                                                       : "pencil"},
        {"ranks", d.ranks},
        {"p1", d.p1},
        {"t", h.t},
        {"step", h.step},
    };
    nlohmann::json files = nlohmann::json::array();
    for (int r = 0; r < d.ranks; ++r) files.push_back(detail::rank_file(path, r));
    manifest["files"] = files;
    std::ofstream m(path + ".manifest.json", std::ios::trunc);
    if (!m) throw CheckpointError("checkpoint: cannot write manifest for " + path);
    m << manifest.dump(2) << "\n";
  }
}

/// Restore u_hat, t and step; the physical velocity is refreshed afterwards.
template <class Real>
void checkpoint_read(Solver<Real>& solver, const std::string& path) {
  auto& st = solver.state();
  const auto& d = solver.fft().decomposition();
  const std::string file = detail::rank_file(path, solver.comm().rank());

  std::ifstream in(file, std::ios::binary);
  if (!in) throw CheckpointError("checkpoint: cannot open " + file);
  detail::CheckpointHeader h{};
  in.read(reinterpret_cast<char*>(&h), sizeof(h));
  if (!in || std::memcmp(h.magic, detail::kCheckpointMagic, 4) != 0)
    throw CheckpointError("checkpoint: bad magic in " + file);
  if (h.version != detail::kCheckpointVersion)
    throw CheckpointError("checkpoint: unsupported version in " + file);
  if (h.n != solver.fft().n() || h.precision_bytes != sizeof(Real))
    throw CheckpointError("checkpoint: shape mismatch (file N=" + std::to_string(h.n) +
                          ", run N=" + std::to_string(solver.fft().n()) + ")");
  if (h.kind != static_cast<std::uint32_t>(d.kind) || h.ranks != d.ranks || h.p1 != d.p1)
    throw CheckpointError("checkpoint: decomposition mismatch in " + file);
  for (int c = 0; c < 3; ++c)
    in.read(reinterpret_cast<char*>(st.u_hat[c].data.data()),
            static_cast<std::streamsize>(st.u_hat[c].data.size() * sizeof(std::complex<Real>)));
  if (!in) throw CheckpointError("checkpoint: truncated data in " + file);
  st.t = static_cast<Real>(h.t);
  st.step = h.step;
  solver.sync_physical();
}

}  // namespace psdns
