#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "atomlens/classical.hpp"
#include "atomlens/report.hpp"
#include "atomlens/runner.hpp"

namespace {

using namespace atomlens;

std::string default_out_dir() {
  const char* env = std::getenv("ATOMLENS_OUT_DIR");
  return env && *env ? env : ".";
}

int do_run(const std::string& config_path, const RunOptions& io) {
  const auto runs = expand_config_file(config_path);
  if (runs.size() != 1) {
    std::fprintf(stderr,
                 "config expands to %zu runs; use the sweep command\n",
                 runs.size());
    return 1;
  }
  const RunResult r = run_scenario(runs.front().second, io);
  std::printf("%s\n", r.summary_csv.c_str());
  return 0;
}

int do_sweep(const std::string& config_path, RunOptions io, unsigned workers) {
  const auto runs = expand_config_file(config_path);
  std::vector<RunResult> results(runs.size());
  std::vector<std::string> errors(runs.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= runs.size()) return;
      try {
        results[i] = run_scenario(runs[i].second, io);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const unsigned nthreads =
        std::min<std::size_t>(workers, runs.size());
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Sweep-level summary table (id plus the focused-beam numbers).
  const auto path =
      (std::filesystem::path(io.out_dir) / "sweep_summary.csv").string();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << "run_id,fwhm_m,peak_density_per_um2,n_beam,fit_residual,"
         "final_time_s,n_beam_final\r\n";
  int failures = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!errors[i].empty()) {
      std::fprintf(stderr, "[%s] FAILED: %s\n", runs[i].first.c_str(),
                   errors[i].c_str());
      ++failures;
      continue;
    }
    const RunResult& r = results[i];
    out << runs[i].first << ',' << CsvWriter::format(r.focal.fwhm_m) << ','
        << CsvWriter::format(r.focal.peak_density_um2) << ','
        << CsvWriter::format(r.focal.n_beam) << ','
        << CsvWriter::format(r.focal.fit_residual) << ','
        << CsvWriter::format(r.final_time_s) << ','
        << CsvWriter::format(r.n_beam_final) << "\r\n";
  }
  out.close();
  std::printf("%s\n", path.c_str());
  return failures == 0 ? 0 : 1;
}

int do_calibrate(const std::string& config_path) {
  const RunConfig cfg = load_config_file(config_path);
  if (!cfg.focus)
    throw std::invalid_argument("calibrate-xi: config has no focus section");
  const double q = bragg_wavenumber(cfg.bragg.lambda_m, cfg.bragg.alpha_rad);
  BeamEntry entry;
  entry.v_source = recoil_velocity(q, cfg.bragg.order, cfg.species.mass);
  entry.source_z = cfg.trap_center_z;
  const FocusSearchResult r = calibrate_xi(cfg.focus->center_z_m, *cfg.focus,
                                           entry, cfg.species);
  std::printf("xi,focal_z_m,rms_spot_m\r\n%s,%s,%s\r\n",
              CsvWriter::format(r.xi).c_str(),
              CsvWriter::format(r.focal_z).c_str(),
              CsvWriter::format(r.rms_spot).c_str());
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-state atom-laser focusing simulator"};
  app.require_subcommand(1);

  std::string config_path, snapshot_path;
  RunOptions io;
  io.out_dir = default_out_dir();
  unsigned workers = 1;
  bool no_cache = false;

  auto add_io = [&](CLI::App* c) {
    c->add_option("--out-dir", io.out_dir, "output directory");
    c->add_option("--snapshot-every", io.snapshot_every,
                  "steps between state snapshots (0 = none)");
    c->add_flag("--final-snapshot", io.final_snapshot,
                "save the final state");
    c->add_flag("--quiet", io.quiet, "suppress progress on stderr");
    c->add_flag("--no-source-cache", no_cache,
                "always recompute the source ground state");
  };

  CLI::App* run = app.add_subcommand("run", "run one scenario");
  run->add_option("config", config_path, "JSON run configuration")->required();
  add_io(run);

  CLI::App* sweep =
      app.add_subcommand("sweep", "run every combination in the sweep block");
  sweep->add_option("config", config_path, "JSON run configuration")->required();
  sweep->add_option("--workers", workers, "parallel runs");
  add_io(sweep);

  CLI::App* cal = app.add_subcommand(
      "calibrate-xi", "classical ray calibration of the power factor");
  cal->add_option("config", config_path, "JSON run configuration")->required();

  CLI::App* resume =
      app.add_subcommand("resume", "continue from a state snapshot");
  resume->add_option("snapshot", snapshot_path, "snapshot file")->required();
  resume->add_option("config", config_path, "JSON run configuration")
      ->required();
  add_io(resume);

  CLI11_PARSE(app, argc, argv);
  io.reuse_ground_state = !no_cache;

  try {
    if (run->parsed()) return do_run(config_path, io);
    if (sweep->parsed()) return do_sweep(config_path, io, workers);
    if (cal->parsed()) return do_calibrate(config_path);
    if (resume->parsed()) {
      io.resume_from = snapshot_path;
      return do_run(config_path, io);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
