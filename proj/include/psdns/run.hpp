#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "psdns/cases.hpp"
#include "psdns/checkpoint.hpp"
#include "psdns/diagnostics.hpp"
#include "psdns/solver.hpp"

namespace psdns {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int m = 6;  // mesh exponent, N = 2^m
  double nu = 0.000625;
  double dt = 0.01;
  double T = 0.1;
  std::string precision = "double";       // single | double
  std::string decomposition = "serial";   // serial | slab | pencil
  int ranks = 1;
  int p1 = 1;                             // pencil only
  std::string integrator = "rk4";         // euler | rk4
  std::string dealias = "appendix";       // maintext | appendix
  std::string kernel = "fused";           // naive | fused
  std::string init = "taylor-green";      // taylor-green | random
  std::uint64_t seed = 1;
  int diag_interval = 1;
  std::string series_path;
  std::string checkpoint_out;
  long checkpoint_at = -1;  // step at which to also write checkpoint_out
  std::string resume;

  std::size_t n() const { return std::size_t(1) << m; }

  Decomposition decomp() const {
    if (decomposition == "serial") return Decomposition::serial();
    if (decomposition == "slab") return Decomposition::slab(ranks);
    if (decomposition == "pencil") return Decomposition::pencil(ranks, p1);
    throw ConfigError("unknown decomposition: " + decomposition);
  }

  DealiasRule dealias_rule() const {
    if (dealias == "maintext") return DealiasRule::MainText;
    if (dealias == "appendix") return DealiasRule::Appendix;
    throw ConfigError("unknown dealias rule: " + dealias);
  }

  KernelVariant kernel_variant() const {
    if (kernel == "naive") return KernelVariant::Naive;
    if (kernel == "fused") return KernelVariant::Fused;
    throw ConfigError("unknown kernel path: " + kernel);
  }

  void validate() const {
    if (m < 1 || m > 12) throw ConfigError("mesh exponent must be in [1, 12]");
    if (precision != "single" && precision != "double")
      throw ConfigError("precision must be single or double");
    if (integrator != "euler" && integrator != "rk4")
      throw ConfigError("integrator must be euler or rk4");
    if (init != "taylor-green" && init != "random")
      throw ConfigError("init must be taylor-green or random");
    if (dt <= 0) throw ConfigError("dt must be positive");
    if (T < 0) throw ConfigError("T must be nonnegative");
    if (diag_interval < 1) throw ConfigError("diag interval must be >= 1");
    try {
      decomp().validate(n());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    dealias_rule();
    kernel_variant();
  }

  nlohmann::json to_json() const {
    return {{"m", m},
            {"n", n()},
            {"nu", nu},
            {"dt", dt},
            {"T", T},
            {"precision", precision},
            {"decomposition", decomposition},
            {"ranks", ranks},
            {"p1", p1},
            {"integrator", integrator},
            {"dealias", dealias},
            {"kernel", kernel},
            {"init", init},
            {"seed", seed},
            {"diag_interval", diag_interval}};
  }
};

struct DiagRecord {
  long step = 0;
  double t = 0;
  double kinetic_energy = 0;
  double enstrophy = 0;
  double dissipation = 0;
  double divergence_max = 0;
};

struct RunResult {
  std::vector<DiagRecord> series;  // populated on rank 0
  double final_energy = 0;
};

namespace detail {

template <class Real>
DiagRecord collect_diagnostics(Solver<Real>& solver, RealVecField<Real>& scratch) {
  DiagRecord r;
  r.step = solver.state().step;
  r.t = static_cast<double>(solver.state().t);
  r.kinetic_energy = kinetic_energy(solver.state().u, solver.comm());
  r.enstrophy = enstrophy(solver, scratch);
  r.dissipation = dissipation(solver.state().u_hat, solver.tables(), solver.nu(), solver.comm());
  r.divergence_max = divergence_max(solver.state().u_hat, solver.tables(), solver.comm());
  return r;
}

inline bool record_finite(const DiagRecord& r) {
  return std::isfinite(r.kinetic_energy) && std::isfinite(r.enstrophy) &&
         std::isfinite(r.dissipation) && std::isfinite(r.divergence_max);
}

}  // namespace detail

/// Advance the configured case to T, collecting diagnostics every
/// diag_interval steps. Collective; the returned series is valid on rank 0.
/// A non-finite diagnostic aborts on all ranks with NumericalError.
template <class Real>
RunResult run_simulation(const RunConfig& cfg, Communicator& comm) {
  cfg.validate();
  typename Solver<Real>::Options opt;
  opt.nu = static_cast<Real>(cfg.nu);
  opt.dt = static_cast<Real>(cfg.dt);
  opt.dealias = cfg.dealias_rule();
  opt.kernel = cfg.kernel_variant();
  Solver<Real> solver(cfg.n(), cfg.decomp(), comm, opt);

  if (!cfg.resume.empty()) {
    checkpoint_read(solver, cfg.resume);
  } else if (cfg.init == "random") {
    random_solenoidal_init(solver, cfg.seed);
  } else {
    taylor_green_init(solver);
  }

  RealVecField<Real> scratch(solver.fft().physical_layout());
  RunResult result;
  const bool root = comm.rank() == 0;

  auto observe = [&](bool force) {
    if (!force && solver.state().step % cfg.diag_interval != 0) return;
    DiagRecord r = detail::collect_diagnostics(solver, scratch);
    int ok = root ? (detail::record_finite(r) ? 1 : 0) : 0;
    comm.broadcast(&ok, sizeof(ok), 0);
    if (!ok) throw NumericalError("non-finite diagnostic at step " + std::to_string(r.step));
    if (root) result.series.push_back(r);
  };

  observe(true);
  const double t_end = cfg.T - 1e-8;
  while (static_cast<double>(solver.state().t) < t_end) {
    if (cfg.integrator == "euler")
      solver.euler_step();
    else
      solver.rk4_step();
    const bool last = !(static_cast<double>(solver.state().t) < t_end);
    observe(last);
    if (!cfg.checkpoint_out.empty() && solver.state().step == cfg.checkpoint_at)
      checkpoint_write(solver, cfg.checkpoint_out);
  }
  if (!cfg.checkpoint_out.empty() && cfg.checkpoint_at < 0)
    checkpoint_write(solver, cfg.checkpoint_out);

  const double e = kinetic_energy(solver.state().u, solver.comm());
  result.final_energy = e;
  return result;
}

/// Time series file: one JSON config line, then CSV.
inline void write_series(const std::string& path, const nlohmann::json& config,
                         const std::vector<DiagRecord>& series) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open series file " + path);
  out << config.dump() << "\n";
  out << "step,t,kinetic_energy,enstrophy,dissipation,divergence_max\n";
  out.precision(15);
  for (const auto& r : series)
    out << r.step << "," << r.t << "," << r.kinetic_energy << "," << r.enstrophy << ","
        << r.dissipation << "," << r.divergence_max << "\n";
  if (!out) throw std::runtime_error("failed writing series file " + path);
}

}  // namespace psdns
