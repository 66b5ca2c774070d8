// Command-line front end: simulation runs, verification, FFT and solver
// benchmarks, checkpoint inspection.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "psdns/psdns.hpp"
#include "psdns/mpi_comm.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

constexpr double kTaylorGreenReference = 0.124953117517;

#ifdef PSDNS_WITH_MPI
bool g_mpi_active = false;
#endif

/// Run fn(comm) on `ranks` logical ranks: under an MPI launcher the process
/// communicator is used directly, otherwise the in-process thread backend.
void with_comm(int ranks, const std::function<void(psdns::Communicator&)>& fn) {
#ifdef PSDNS_WITH_MPI
  if (g_mpi_active) {
    psdns::MpiComm comm(MPI_COMM_WORLD);
    if (comm.size() != ranks)
      throw psdns::ConfigError("--ranks must match the launched process count");
    fn(comm);
    return;
  }
#endif
  psdns::run_on_ranks(ranks, fn);
}

void add_common_flags(CLI::App* cmd, psdns::RunConfig& cfg) {
  cmd->add_option("-m,--mesh-exponent", cfg.m, "Mesh exponent M, N = 2^M");
  cmd->add_option("--nu", cfg.nu, "Kinematic viscosity");
  cmd->add_option("--dt", cfg.dt, "Time step");
  cmd->add_option("-T,--end-time", cfg.T, "End time");
  cmd->add_option("--precision", cfg.precision, "single | double");
  cmd->add_option("-d,--decomposition", cfg.decomposition, "serial | slab | pencil");
  cmd->add_option("-r,--ranks", cfg.ranks, "Rank count");
  cmd->add_option("--p1", cfg.p1, "Pencil: CPUs in the first split direction");
  cmd->add_option("--integrator", cfg.integrator, "euler | rk4");
  cmd->add_option("--dealias", cfg.dealias, "maintext | appendix");
  cmd->add_option("--kernel", cfg.kernel, "naive | fused");
  cmd->add_option("--init", cfg.init, "taylor-green | random");
  cmd->add_option("--seed", cfg.seed, "Seed for the random initial field");
  cmd->add_option("--diag-interval", cfg.diag_interval, "Steps between diagnostic records");
}

template <class Real>
psdns::RunResult run_with_precision(const psdns::RunConfig& cfg) {
  psdns::RunResult result;
  with_comm(cfg.ranks, [&](psdns::Communicator& comm) {
    auto r = psdns::run_simulation<Real>(cfg, comm);
    if (comm.rank() == 0) result = std::move(r);
  });
  return result;
}

psdns::RunResult dispatch_run(const psdns::RunConfig& cfg) {
  if (cfg.precision == "single") return run_with_precision<float>(cfg);
  return run_with_precision<double>(cfg);
}

int cmd_run(const psdns::RunConfig& cfg) {
  cfg.validate();
  auto result = dispatch_run(cfg);
  for (const auto& r : result.series)
    std::printf("step %6ld  t %.6f  energy %.12f  enstrophy %.9f  dissipation %.9g  div %.3g\n",
                r.step, r.t, r.kinetic_energy, r.enstrophy, r.dissipation, r.divergence_max);
  if (!cfg.series_path.empty()) psdns::write_series(cfg.series_path, cfg.to_json(), result.series);
  return 0;
}

int cmd_verify(psdns::RunConfig cfg) {
  // Pinned regression configuration; only the decomposition may vary.
  cfg.m = 7;
  cfg.nu = 0.000625;
  cfg.dt = 0.01;
  cfg.T = 0.1;
  cfg.precision = "double";
  cfg.integrator = "rk4";
  cfg.dealias = "appendix";
  cfg.init = "taylor-green";
  cfg.validate();
  auto result = dispatch_run(cfg);
  const double err = std::abs(result.final_energy - kTaylorGreenReference);
  std::printf("final kinetic energy %.12f  reference %.12f  |error| %.3g : %s\n",
              result.final_energy, kTaylorGreenReference, err, err <= 5e-8 ? "PASS" : "FAIL");
  return err <= 5e-8 ? 0 : kExitNumerical;
}

int cmd_checkpoint(const std::string& path) {
  std::ifstream manifest(path + ".manifest.json");
  if (manifest) {
    nlohmann::json m = nlohmann::json::parse(manifest);
    std::cout << m.dump(2) << "\n";
    return 0;
  }
  std::ifstream raw(path, std::ios::binary);
  if (!raw) throw psdns::CheckpointError("cannot open " + path + " (or its manifest)");
  psdns::detail::CheckpointHeader h{};
  raw.read(reinterpret_cast<char*>(&h), sizeof(h));
  if (!raw || std::memcmp(h.magic, psdns::detail::kCheckpointMagic, 4) != 0)
    throw psdns::CheckpointError("bad checkpoint magic in " + path);
  nlohmann::json info{{"version", h.version},         {"n", h.n},
                      {"precision_bytes", h.precision_bytes}, {"kind", h.kind},
                      {"ranks", h.ranks},             {"p1", h.p1},
                      {"t", h.t},                     {"step", h.step}};
  std::cout << info.dump(2) << "\n";
  return 0;
}

void emit_report(const nlohmann::json& report, const std::string& path) {
  if (path.empty())
    std::cout << report.dump(2) << "\n";
  else {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open report file " + path);
    out << report.dump(2) << "\n";
  }
}

psdns::DecompKind parse_kind(const std::string& s) {
  if (s == "serial") return psdns::DecompKind::Serial;
  if (s == "slab") return psdns::DecompKind::Slab;
  if (s == "pencil") return psdns::DecompKind::Pencil;
  throw psdns::ConfigError("unknown decomposition: " + s);
}

}  // namespace

int main(int argc, char** argv) {
#ifdef PSDNS_WITH_MPI
  int mpi_size = 1;
  MPI_Init(&argc, &argv);
  MPI_Comm_size(MPI_COMM_WORLD, &mpi_size);
  g_mpi_active = mpi_size > 1;
#endif

  CLI::App app{"Distributed pseudo-spectral Navier-Stokes solver on a periodic cube"};
  app.require_subcommand(1);

  psdns::RunConfig cfg;
  std::string report_path, checkpoint_path;

  auto* run = app.add_subcommand("run", "Advance a simulation and emit a diagnostics time series");
  add_common_flags(run, cfg);
  run->add_option("-o,--series", cfg.series_path, "Time series output (JSON header line + CSV)");
  run->add_option("--checkpoint-out", cfg.checkpoint_out, "Checkpoint path prefix");
  run->add_option("--checkpoint-at", cfg.checkpoint_at,
                  "Write the checkpoint at this step instead of at the end");
  run->add_option("--resume", cfg.resume, "Resume from a checkpoint path prefix");

  auto* verify = app.add_subcommand(
      "verify", "Run the Taylor-Green regression case and compare the final kinetic energy");
  verify->add_option("-d,--decomposition", cfg.decomposition, "serial | slab | pencil");
  verify->add_option("-r,--ranks", cfg.ranks, "Rank count");
  verify->add_option("--p1", cfg.p1, "Pencil: CPUs in the first split direction");
  verify->add_option("--kernel", cfg.kernel, "naive | fused");

  int reps = 10, steps = 2;
  std::vector<int> rank_list{1};
  auto* bench_fft = app.add_subcommand("bench-fft", "Time forward+inverse 3D transforms");
  bench_fft->add_option("-m,--mesh-exponent", cfg.m, "Mesh exponent M, N = 2^M");
  bench_fft->add_option("-d,--decomposition", cfg.decomposition, "serial | slab | pencil");
  bench_fft->add_option("--p1", cfg.p1, "Pencil: CPUs in the first split direction");
  bench_fft->add_option("-R,--reps", reps, "Repetitions; the fastest is reported");
  bench_fft->add_option("-r,--ranks", rank_list, "Rank counts to sweep");
  bench_fft->add_option("-o,--output", report_path, "Report file (JSON); stdout if omitted");

  auto* bench_solver = app.add_subcommand(
      "bench-solver", "Time solver steps for the naive and fused kernel paths");
  bench_solver->add_option("-m,--mesh-exponent", cfg.m, "Mesh exponent M, N = 2^M");
  bench_solver->add_option("-d,--decomposition", cfg.decomposition, "serial | slab | pencil");
  bench_solver->add_option("--p1", cfg.p1, "Pencil: CPUs in the first split direction");
  bench_solver->add_option("-r,--ranks", cfg.ranks, "Rank count");
  bench_solver->add_option("--steps", steps, "Timed steps per kernel path");
  bench_solver->add_option("--nu", cfg.nu, "Kinematic viscosity");
  bench_solver->add_option("--dt", cfg.dt, "Time step");
  bench_solver->add_option("-o,--output", report_path, "Report file (JSON); stdout if omitted");

  auto* checkpoint = app.add_subcommand("checkpoint", "Inspect a checkpoint");
  checkpoint->add_option("path", checkpoint_path, "Checkpoint path prefix or rank file")
      ->required();

  int code = 0;
  try {
    app.parse(argc, argv);
    if (run->parsed()) {
      code = cmd_run(cfg);
    } else if (verify->parsed()) {
      code = cmd_verify(cfg);
    } else if (bench_fft->parsed()) {
      auto report =
          psdns::bench_fft<double>(cfg.n(), parse_kind(cfg.decomposition), cfg.p1, rank_list, reps);
      emit_report(report, report_path);
    } else if (bench_solver->parsed()) {
      auto report = psdns::bench_solver<double>(cfg.n(), parse_kind(cfg.decomposition), cfg.p1,
                                                cfg.ranks, steps, cfg.nu, cfg.dt);
      emit_report(report, report_path);
    } else if (checkpoint->parsed()) {
      code = cmd_checkpoint(checkpoint_path);
    }
  } catch (const CLI::ParseError& e) {
    code = app.exit(e);
    if (code != 0) code = kExitConfig;
  } catch (const psdns::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    code = kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    code = kExitConfig;
  } catch (const psdns::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    code = kExitNumerical;
  } catch (const psdns::CheckpointError& e) {
    std::cerr << "checkpoint error: " << e.what() << "\n";
    code = kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    code = kExitIo;
  }

#ifdef PSDNS_WITH_MPI
  MPI_Finalize();
#endif
  return code;
}
