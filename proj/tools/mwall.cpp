// mwall: command-line front end for the moving-wall toolkit.
//
//   mwall analytic --k 2 --v 1.5 --t 0 --x-min -20 --x-max 3 --n 1024 --out field.csv
//   mwall simulate --config run.json --out runs/v0
//   mwall sweep --k0 5 --v-list -2,0,1,2,3,4 --out report.json
//   mwall verify --seed 7 --out ledger.json
//
// Exit codes: 0 ok, 1 I/O failure, 2 invalid input, 3 boundary contamination
// (simulate), 4 Doppler criterion failed (sweep), 5 invariant failed (verify).

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "mwall/analytic.hpp"
#include "mwall/config.hpp"
#include "mwall/doppler.hpp"
#include "mwall/error.hpp"
#include "mwall/io.hpp"
#include "mwall/solver.hpp"
#include "mwall/verify.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitContaminated = 3;
constexpr int kExitDopplerFailed = 4;
constexpr int kExitInvariantFailed = 5;

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_or_throw(const fs::path& path, std::string_view content) {
  try {
    mwall::io::write_file_atomic(path, content);
  } catch (const std::exception& e) {
    throw IoFailure(e.what());
  }
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoFailure("cannot create directory " + dir.string() + ": " + ec.message());
}

std::size_t thread_cap() {
  const char* env = std::getenv("MWALL_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  const std::string_view text(env);
  std::size_t cap = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), cap);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw mwall::Error(mwall::ErrorCode::InvalidArgument,
                       "MWALL_THREADS must be a non-negative integer, got '" + std::string(text) + "'");
  }
  return cap;
}

std::string num(double x) { return mwall::io::format_number(x); }

// --- config-driven commands -------------------------------------------------

struct ConfigFlags {
  std::string config_path;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    for (const auto& key : mwall::config_keys()) {
      options[key] = cmd->add_option("--" + key, values[key], "override " + key);
    }
  }

  mwall::RunConfig resolve(const std::string& output_dir = "") const {
    mwall::RunConfig cfg = config_path.empty() ? mwall::RunConfig{} : mwall::load_config(config_path);
    for (const auto& key : mwall::config_keys()) {
      if (options.at(key)->count() > 0) mwall::apply_override(cfg, key, values.at(key));
    }
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    mwall::validate(cfg);
    return cfg;
  }
};

int run_analytic(double k, double v, double t, double x_min, double x_max, std::size_t n, double hbar,
                 double mass, const std::string& out) {
  if (!(k > 0.0)) {
    std::cerr << "error: --k must satisfy k > 0 (incident wave travels toward +x), got " << k << "\n";
    return kExitInvalid;
  }
  const mwall::PhysicalParams params(hbar, mass);
  const mwall::PlaneWaveScattering scat(k, v, params);
  const mwall::Grid1D grid(x_min, x_max, n);
  write_or_throw(out, mwall::io::analytic_csv(grid, t, scat));
  std::cout << "k_prime=" << num(scat.k_prime()) << "\n"
            << "regime=" << mwall::to_string(scat.regime()) << "\n"
            << "k_bar=" << num(scat.k_bar()) << "\n"
            << "reflected_phase_velocity=" << num(mwall::reflected_phase_velocity(k, v, params)) << "\n"
            << "wall_position=" << num(v * t) << "\n";
  return kExitOk;
}

int run_simulate(const ConfigFlags& flags, const std::string& out_dir) {
  const mwall::RunConfig cfg = flags.resolve(out_dir).resolved();
  const mwall::EvolutionConfig evo = cfg.evolution();
  // Validation (including NoCollision) happens before anything is written.
  const mwall::FieldSnapshot initial = mwall::init_gaussian(evo.grid, cfg.packet, cfg.wall_velocity, cfg.params);
  const mwall::EvolutionResult run = mwall::evolve(initial, evo);

  const fs::path dir = cfg.output_dir;
  ensure_directory(dir);
  nlohmann::ordered_json snapshots = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
    const auto& comoving = run.snapshots[i];
    const auto lab = mwall::to_lab_frame(comoving, cfg.wall_velocity, cfg.params);
    write_or_throw(dir / mwall::io::snapshot_filename(mwall::Frame::Comoving, i),
                   mwall::io::snapshot_csv(comoving, cfg.params));
    write_or_throw(dir / mwall::io::snapshot_filename(mwall::Frame::Lab, i), mwall::io::snapshot_csv(lab, cfg.params));
    snapshots.push_back({{"index", i}, {"time", comoving.time}});
  }

  nlohmann::ordered_json meta;
  meta["config"] = mwall::to_json(cfg);
  meta["k_bar"] = mwall::comoving_wavenumber(cfg.packet, cfg.wall_velocity, cfg.params);
  meta["n_steps"] = cfg.n_steps;
  meta["final_time"] = run.snapshots.back().time;
  meta["initial_norm"] = run.initial_norm;
  meta["final_norm"] = run.final_norm;
  meta["norm_drift"] = run.norm_drift;
  meta["boundary_fraction"] = run.boundary_fraction;
  meta["boundary_warning"] = run.boundary_warning;
  meta["snapshots"] = std::move(snapshots);
  write_or_throw(dir / "meta.json", mwall::io::dump(meta));
  write_or_throw(dir / "resolved_config.json", mwall::io::dump(mwall::to_json(cfg)));

  std::cout << "steps=" << cfg.n_steps << " snapshots=" << run.snapshots.size() << " norm_drift=" << num(run.norm_drift)
            << "\n";
  if (run.boundary_warning) {
    std::cerr << "warning: " << num(run.boundary_fraction * 100.0)
              << "% of the final norm sits at the far boundary; reflections from x_bar = -L may contaminate the run\n";
    return kExitContaminated;
  }
  return kExitOk;
}

std::vector<double> parse_velocity_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw mwall::Error(mwall::ErrorCode::InvalidArgument, "--v-list entry '" + item + "' is not a number");
    }
    out.push_back(v);
  }
  if (out.empty()) throw mwall::Error(mwall::ErrorCode::InvalidArgument, "--v-list is empty");
  return out;
}

std::string cell(const std::optional<double>& x, int precision) {
  if (!x) return "-";
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(precision);
  s << *x;
  return s.str();
}

void print_table(const mwall::DopplerReport& report) {
  std::printf("%8s %10s %10s %10s  %-24s %s\n", "v", "k_pred", "k_meas", "err", "regime", "note");
  for (const auto& row : report.rows) {
    std::printf("%8.4f %10.4f %10s %10s  %-24s %s\n", row.v, row.k_predicted, cell(row.k_measured, 4).c_str(),
                cell(row.relative_error, 6).c_str(), std::string(mwall::to_string(row.regime)).c_str(),
                row.skipped_reason ? ("skipped: " + *row.skipped_reason).c_str() : (row.passed ? "ok" : "FAIL"));
  }
}

int run_sweep(double k0, const std::string& v_list, const ConfigFlags& flags, const std::string& out,
              const std::string& csv_out) {
  if (!(k0 > 0.0)) {
    std::cerr << "error: --k0 must satisfy k0 > 0, got " << k0 << "\n";
    return kExitInvalid;
  }
  const std::vector<double> velocities = parse_velocity_list(v_list);
  mwall::RunConfig cfg = flags.resolve();
  cfg.packet.k0_lab = k0;
  const mwall::DopplerReport report =
      mwall::doppler_sweep(k0, velocities, cfg.evolution(), cfg.packet, thread_cap());

  write_or_throw(out, mwall::io::dump(mwall::io::to_json(report)));
  if (!csv_out.empty()) write_or_throw(csv_out, mwall::io::report_csv(report));
  print_table(report);
  return report.all_passed() ? kExitOk : kExitDopplerFailed;
}

int run_verify(std::uint64_t seed, const std::string& out) {
  const mwall::VerifyLedger ledger = mwall::run_verification(seed, thread_cap());
  write_or_throw(out, mwall::io::dump(ledger.to_json()));
  for (const auto& c : ledger.checks) {
    std::cout << (c.passed ? "pass " : "FAIL ") << c.name << "\n";
  }
  if (auto failed = ledger.first_failure()) {
    std::cerr << "invariant failed: " << *failed << "\n";
    return kExitInvariantFailed;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matter-wave reflection by a uniformly moving hard wall"};
  app.require_subcommand(1);

  auto* analytic = app.add_subcommand("analytic", "sample the closed-form field, density and current");
  double k = 0.0, v = 0.0, t = 0.0, x_min = -20.0, x_max = 0.0, hbar = 1.0, mass = 1.0;
  std::size_t n = 1024;
  std::string analytic_out = "analytic.csv";
  analytic->add_option("--k", k, "incident wavenumber (> 0)")->required();
  analytic->add_option("--v", v, "wall velocity")->required();
  analytic->add_option("--t", t, "time")->capture_default_str();
  analytic->add_option("--x-min", x_min)->capture_default_str();
  analytic->add_option("--x-max", x_max)->capture_default_str();
  analytic->add_option("--n", n, "grid nodes")->capture_default_str();
  analytic->add_option("--hbar", hbar)->capture_default_str();
  analytic->add_option("--mass", mass)->capture_default_str();
  analytic->add_option("--out", analytic_out, "CSV output path")->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "evolve a wavepacket against the moving wall");
  ConfigFlags sim_flags;
  sim_flags.attach(simulate);
  std::string sim_out;
  simulate->add_option("--out", sim_out, "output directory (same as --output.dir)");

  auto* sweep = app.add_subcommand("sweep", "measure the reflected wavenumber across wall velocities");
  ConfigFlags sweep_flags;
  sweep_flags.attach(sweep);
  double k0 = 5.0;
  std::string v_list;
  std::string sweep_out = "doppler_report.json";
  std::string sweep_csv;
  sweep->add_option("--k0", k0, "incident lab wavenumber")->required();
  sweep->add_option("--v-list", v_list, "comma-separated wall velocities")->required()->allow_extra_args(false);
  sweep->add_option("--out", sweep_out, "report JSON path")->capture_default_str();
  sweep->add_option("--csv", sweep_csv, "optional CSV flattening of the report");

  auto* verify = app.add_subcommand("verify", "run every invariant suite and write a pass/fail ledger");
  std::uint64_t seed = mwall::kDefaultVerifySeed;
  std::string verify_out = "verify_ledger.json";
  verify->add_option("--seed", seed)->capture_default_str();
  verify->add_option("--out", verify_out)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*analytic) return run_analytic(k, v, t, x_min, x_max, n, hbar, mass, analytic_out);
    if (*simulate) return run_simulate(sim_flags, sim_out);
    if (*sweep) return run_sweep(k0, v_list, sweep_flags, sweep_out, sweep_csv);
    if (*verify) return run_verify(seed, verify_out);
  } catch (const IoFailure& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const mwall::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
