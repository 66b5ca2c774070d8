#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

#include <json.hpp>

#include "psdns/cases.hpp"
#include "psdns/comm.hpp"
#include "psdns/fft.hpp"
#include "psdns/solver.hpp"

namespace psdns {

namespace detail {

inline const char* kind_name(DecompKind k) {
  switch (k) {
    case DecompKind::Serial: return "serial";
    case DecompKind::Slab: return "slab";
    default: return "pencil";
  }
}

}  // namespace detail

/// Best-of-R wall time for one forward+inverse transform pair on the
/// in-process backend, plus the t*M/(N^3 log2 N) metric used for scaling
/// plots. Setup (plan/table construction) is excluded from the timing.
template <class Real>
nlohmann::json bench_fft(std::size_t n, DecompKind kind, int p1,
                         const std::vector<int>& rank_counts, int reps) {
  nlohmann::json records = nlohmann::json::array();
  double t_one = std::numeric_limits<double>::quiet_NaN();
  for (int ranks : rank_counts) {
    Decomposition d = kind == DecompKind::Serial ? Decomposition::serial()
                      : kind == DecompKind::Slab ? Decomposition::slab(ranks)
                                                 : Decomposition::pencil(ranks, p1);
    d.validate(n);
    double best = 0;
    run_on_ranks(ranks, [&](Communicator& comm) {
      Fft3<Real> fft(n, d, comm);
      RealField<Real> u(fft.physical_layout());
      SpectralField<Real> fu(fft.spectral_layout());
      for (std::size_t i = 0; i < u.data.size(); ++i)
        u.data[i] = static_cast<Real>(std::sin(0.1 * static_cast<double>(i + comm.rank())));
      fft.forward(u, fu);  // warm-up, builds tables
      fft.inverse(fu, u);
      double local_best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < reps; ++r) {
        comm.reduce_sum(0.0);  // sync
        const auto t0 = std::chrono::steady_clock::now();
        fft.forward(u, fu);
        fft.inverse(fu, u);
        comm.reduce_sum(0.0);
        const auto t1 = std::chrono::steady_clock::now();
        local_best = std::min(local_best, std::chrono::duration<double>(t1 - t0).count());
      }
      if (comm.rank() == 0) best = local_best;
    });
    const double n3 = static_cast<double>(n) * n * n;
    const double scaled = best * static_cast<double>(ranks) / (n3 * std::log2(double(n)));
    nlohmann::json rec{{"n", n},
                       {"decomposition", detail::kind_name(kind)},
                       {"ranks", ranks},
                       {"p1", kind == DecompKind::Pencil ? p1 : 1},
                       {"reps", reps},
                       {"best_seconds", best},
                       {"scaled_metric", scaled}};
    if (std::isnan(t_one)) t_one = best;
    rec["strong_efficiency"] = t_one / (static_cast<double>(ranks) * best);
    records.push_back(rec);
  }
  return {{"benchmark", "fft"}, {"records", records}};
}

/// Per-step solver timing for both kernel paths on identical Taylor-Green
/// state, with the fused/naive speedup ratio. Informational; thresholds are
/// hardware-bound.
template <class Real>
nlohmann::json bench_solver(std::size_t n, DecompKind kind, int p1, int ranks, int steps,
                            Real nu, Real dt) {
  Decomposition d = kind == DecompKind::Serial ? Decomposition::serial()
                    : kind == DecompKind::Slab ? Decomposition::slab(ranks)
                                               : Decomposition::pencil(ranks, p1);
  d.validate(n);
  double seconds[2] = {0, 0};
  double max_rel_diff = 0;
  std::vector<std::vector<std::complex<Real>>> reference(static_cast<std::size_t>(ranks) * 3);
  for (int pass = 0; pass < 2; ++pass) {
    const KernelVariant variant = pass == 0 ? KernelVariant::Naive : KernelVariant::Fused;
    run_on_ranks(ranks, [&](Communicator& comm) {
      typename Solver<Real>::Options opt;
      opt.nu = nu;
      opt.dt = dt;
      opt.kernel = variant;
      Solver<Real> solver(n, d, comm, opt);
      taylor_green_init(solver);
      solver.rk4_step();  // warm-up step outside the timing
      taylor_green_init(solver);
      solver.state().t = 0;
      solver.state().step = 0;
      comm.reduce_sum(0.0);
      const auto t0 = std::chrono::steady_clock::now();
      for (int s = 0; s < steps; ++s) solver.rk4_step();
      comm.reduce_sum(0.0);
      const auto t1 = std::chrono::steady_clock::now();
      if (comm.rank() == 0)
        seconds[pass] = std::chrono::duration<double>(t1 - t0).count() / steps;
      // Compare end states across the two kernel paths.
      for (int c = 0; c < 3; ++c) {
        auto& data = solver.state().u_hat[c].data;
        if (pass == 0) {
          reference[static_cast<std::size_t>(comm.rank()) * 3 + c] = data;
        } else {
          double local = 0;
          const auto& ref = reference[comm.rank() * 3 + c];
          for (std::size_t i = 0; i < data.size(); ++i) {
            const double mag = std::abs(static_cast<std::complex<double>>(ref[i]));
            const double diff =
                std::abs(static_cast<std::complex<double>>(data[i] - ref[i]));
            if (mag > 0) local = std::max(local, diff / mag);
          }
          const double g = comm.reduce_max(local);
          if (comm.rank() == 0) max_rel_diff = std::max(max_rel_diff, g);
        }
      }
    });
  }
  return {{"benchmark", "solver"},
          {"n", n},
          {"decomposition", detail::kind_name(kind)},
          {"ranks", ranks},
          {"steps", steps},
          {"seconds_per_step_naive", seconds[0]},
          {"seconds_per_step_fused", seconds[1]},
          {"speedup_ratio", seconds[0] / seconds[1]},
          {"max_rel_state_diff", max_rel_diff}};
}

}  // namespace psdns
