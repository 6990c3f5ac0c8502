#include "mwall/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "mwall/analytic.hpp"
#include "mwall/doppler.hpp"
#include "mwall/error.hpp"
#include "mwall/solver.hpp"

namespace mwall {

bool VerifyLedger::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::optional<std::string> VerifyLedger::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return c.name;
  }
  return std::nullopt;
}

nlohmann::ordered_json VerifyLedger::to_json() const {
  nlohmann::ordered_json doc;
  doc["seed"] = seed;
  doc["all_passed"] = all_passed();
  auto list = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json entry;
    entry["name"] = c.name;
    entry["module"] = c.module;
    entry["status"] = c.passed ? "pass" : "fail";
    entry["metrics"] = c.metrics;
    list.push_back(std::move(entry));
  }
  doc["checks"] = std::move(list);
  return doc;
}

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

double positive_uniform(Rng& rng, double hi) {
  double k = 0.0;
  while (k == 0.0) k = uniform(rng, 0.0, hi);
  return k;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Spreading Gaussian e^{i(kx - wt)} G_t(x - x0 - hbar k t / m), the free
// solution for the initial packet built by init_gaussian (before normalization).
cplx free_gaussian(double x, double t, double x0, double sigma, double k, const PhysicalParams& p) {
  const cplx spread{1.0, p.hbar() * t / (2.0 * p.mass() * sigma * sigma)};
  const double y = x - x0 - p.hbar() * k * t / p.mass();
  const double phase = k * x - p.hbar() * k * k * t / (2.0 * p.mass());
  return std::exp(-y * y / (4.0 * sigma * sigma * spread)) / std::sqrt(spread) *
         cplx(std::cos(phase), std::sin(phase));
}

CheckResult analytic_boundary(Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const PlaneWaveScattering s(positive_uniform(rng, 10.0), uniform(rng, -10.0, 10.0));
    const double t = uniform(rng, -5.0, 5.0);
    worst = std::max(worst, std::abs(total_wavefunction(s.v() * t, t, s)));
  }
  CheckResult r{"boundary_condition_eq2", "analytic_core", worst < 1e-12};
  r.metrics["samples"] = 200;
  r.metrics["max_abs_psi_at_wall"] = worst;
  r.metrics["tolerance"] = 1e-12;
  return r;
}

CheckResult analytic_factorization(Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const PlaneWaveScattering s(positive_uniform(rng, 10.0), uniform(rng, -10.0, 10.0));
    const double x = uniform(rng, -20.0, 5.0), t = uniform(rng, -5.0, 5.0);
    const double j = probability_current(x, t, s);
    const double expected = s.v() * probability_density(x, t, s);
    if (expected != 0.0) worst = std::max(worst, std::abs(j - expected) / std::abs(expected));
    else worst = std::max(worst, std::abs(j));
  }
  CheckResult r{"current_density_factorization", "analytic_core", worst < 1e-12};
  r.metrics["max_relative_error"] = worst;
  return r;
}

CheckResult analytic_drift(Rng& rng) {
  double worst = 0.0;
  int used = 0;
  for (int i = 0; i < 1000; ++i) {
    const PlaneWaveScattering s(positive_uniform(rng, 10.0), uniform(rng, -10.0, 10.0));
    const double x = uniform(rng, -20.0, 0.0), t = uniform(rng, -5.0, 5.0);
    if (probability_density(x, t, s) <= 1e-6) continue;
    worst = std::max(worst, std::abs(drift_velocity(x, t, s) - s.v()));
    ++used;
  }
  CheckResult r{"drift_velocity_ratio", "analytic_core", used > 0 && worst < 1e-9};
  r.metrics["points"] = used;
  r.metrics["max_abs_error"] = worst;
  return r;
}

CheckResult analytic_galilean(Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const PlaneWaveScattering s(positive_uniform(rng, 5.0), uniform(rng, -5.0, 5.0));
    const double t = uniform(rng, -3.0, 3.0);
    const Grid1D grid(-uniform(rng, 5.0, 20.0), 0.0, 100);
    const FieldSnapshot lifted = galilean_lift(sample_comoving(grid, t, s.k_bar(), s.v()), s.v());
    worst = std::max(worst, max_abs_diff(lifted.values, sample_lab(lifted.grid, t, s).values));
  }
  CheckResult r{"galilean_consistency", "analytic_core", worst < 1e-12};
  r.metrics["points"] = 100 * 100;
  r.metrics["max_abs_error"] = worst;
  return r;
}

CheckResult analytic_round_trip(Rng& rng) {
  double worst = 0.0;
  double modulus = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double v = uniform(rng, -5.0, 5.0);
    const double t = uniform(rng, -3.0, 3.0);
    const Grid1D grid(-20.0, 0.0, 64);
    std::vector<cplx> values(grid.n());
    for (auto& z : values) z = {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
    const FieldSnapshot original(t, Frame::Comoving, v, grid, values);
    FieldSnapshot lab = galilean_lift(original, v);
    for (std::size_t j = 0; j < values.size(); ++j) {
      modulus = std::max(modulus, std::abs(std::abs(lab.values[j]) - std::abs(values[j])));
    }
    lab.frame = Frame::Comoving;
    worst = std::max(worst, max_abs_diff(galilean_lift(lab, -v).values, values));
  }
  CheckResult r{"boost_round_trip", "analytic_core", worst < 1e-12 && modulus < 1e-14};
  r.metrics["max_abs_error"] = worst;
  r.metrics["max_modulus_change"] = modulus;
  return r;
}

CheckResult analytic_residual() {
  const PlaneWaveScattering s(2.0, 1.5);
  auto field = [&](double x, double t) { return total_wavefunction(x, t, s); };
  std::vector<double> residuals;
  for (double h : {1e-2, 5e-3, 2.5e-3}) residuals.push_back(std::abs(schrodinger_residual(field, -2.0, 0.3, h, h)));
  const double order1 = std::log2(residuals[0] / residuals[1]);
  const double order2 = std::log2(residuals[1] / residuals[2]);
  CheckResult r{"residual_convergence", "analytic_core",
                std::abs(order1 - 2.0) <= 0.2 && std::abs(order2 - 2.0) <= 0.2};
  r.metrics["residuals"] = residuals;
  r.metrics["observed_orders"] = {order1, order2};
  return r;
}

CheckResult analytic_regimes(Rng& rng) {
  bool ok = true;
  for (int i = 0; i < 200 && ok; ++i) {
    const double k = positive_uniform(rng, 10.0);
    const double vc1 = k / 2.0, vc2 = k;
    const double below = uniform(rng, -10.0, vc1), mid = uniform(rng, vc1, vc2), above = uniform(rng, vc2, vc2 + 10.0);
    auto expect = [&](double v, RegimeClass want) { ok = ok && classify_regime(k, v) == want; };
    if (below < vc1) expect(below, RegimeClass::CounterPropagating);
    expect(vc1, RegimeClass::ZeroReflectedWavenumber);
    if (mid > vc1 && mid < vc2) expect(mid, RegimeClass::CoPropagating);
    expect(vc2, RegimeClass::Degenerate);
    if (above > vc2) expect(above, RegimeClass::CoPropagatingFaster);
    ok = ok && reflected_wavenumber(k, vc1) == 0.0 && reflected_wavenumber(k, std::nextafter(vc1, -1e9)) < 0.0 &&
         reflected_wavenumber(k, std::nextafter(vc1, 1e9)) > 0.0;
  }
  return CheckResult{"regime_partition", "analytic_core", ok};
}

CheckResult analytic_degenerate(Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double k = positive_uniform(rng, 10.0);
    const PlaneWaveScattering s(k, k);
    worst = std::max(worst, std::abs(total_wavefunction(uniform(rng, -50.0, 50.0), uniform(rng, -5.0, 5.0), s)));
  }
  CheckResult r{"degenerate_annihilation", "analytic_core", worst < 1e-12};
  r.metrics["max_abs_psi"] = worst;
  return r;
}

std::vector<CheckResult> solver_checks(Rng& rng) {
  std::vector<CheckResult> out;
  const PhysicalParams params;
  const Grid1D grid = comoving_grid(60.0, 1024);
  const WavepacketSpec spec{-30.0, 2.0, uniform(rng, 3.0, 6.0)};
  const FieldSnapshot initial = init_gaussian(grid, spec, 0.0, params);

  {
    const EvolutionConfig cfg{grid, 0.002, recommended_steps(spec, 0.0, 0.002), 500, 0.0, params};
    const EvolutionResult run = evolve(initial, cfg);
    const FieldSnapshot one = cn_step(initial, cfg.dt, params);
    const double per_step = std::abs(one.norm() - initial.norm());
    CheckResult unit{"solver_unitarity", "numeric_solver", run.norm_drift < 1e-9 && per_step < 1e-13};
    unit.metrics["steps"] = cfg.n_steps;
    unit.metrics["norm_drift"] = run.norm_drift;
    unit.metrics["single_step_drift"] = per_step;
    out.push_back(std::move(unit));

    bool wall_ok = true;
    for (const auto& s : run.snapshots) wall_ok = wall_ok && s.values.back() == cplx{} && s.values.front() == cplx{};
    CheckResult wall{"solver_dirichlet_wall", "numeric_solver", wall_ok};
    wall.metrics["snapshots"] = run.snapshots.size();
    out.push_back(std::move(wall));
  }
  {
    FieldSnapshot state = initial;
    CrankNicolson forward(grid, 0.002, params), backward(grid, -0.002, params);
    for (int i = 0; i < 2000; ++i) forward.step(state.values);
    for (int i = 0; i < 2000; ++i) backward.step(state.values);
    const double err = max_abs_diff(state.values, initial.values);
    CheckResult rev{"solver_time_reversal", "numeric_solver", err < 1e-8};
    rev.metrics["steps_each_way"] = 2000;
    rev.metrics["max_abs_error"] = err;
    out.push_back(std::move(rev));
  }
  {
    // Standing wave of the wall frame, tapered to zero far from the wall.
    const double k_bar = uniform(rng, 0.8, 1.2);
    const Grid1D g = comoving_grid(60.0, 3001);
    auto taper = [](double x) { return 0.5 * (1.0 + std::tanh((x + 40.0) / 2.0)); };
    std::vector<cplx> values(g.n());
    for (std::size_t i = 1; i + 1 < g.n(); ++i) values[i] = taper(g.node(i)) * comoving_wavefunction(g.node(i), 0.0, k_bar);
    FieldSnapshot state(0.0, Frame::Comoving, 0.0, g, values);
    const double dt = 0.005;
    const int steps = 1000;
    CrankNicolson prop(g, dt, params);
    for (int i = 0; i < steps; ++i) prop.step(state.values);
    const double t = dt * steps;
    double err = 0.0;
    for (std::size_t i = g.nearest(-15.0); i < g.n(); ++i) {
      err = std::max(err, std::abs(state.values[i] - comoving_wavefunction(g.node(i), t, k_bar)));
    }
    CheckResult sw{"solver_standing_wave", "numeric_solver", err < 1e-3};
    sw.metrics["k_bar"] = k_bar;
    sw.metrics["max_abs_error"] = err;
    out.push_back(std::move(sw));
  }
  {
    const WavepacketSpec free_spec{-30.0, 2.0, 2.0};
    std::vector<double> errors;
    for (std::size_t n : {601u, 1201u, 2401u}) {
      const Grid1D g = comoving_grid(60.0, n);
      const double h = g.spacing();
      const double dt = 0.1 * h * h;
      const auto steps = static_cast<std::size_t>(std::llround(2.0 / dt));
      FieldSnapshot state = init_gaussian(g, free_spec, 0.0, params);
      const double scale = std::abs(state.values[g.nearest(-30.0)]) /
                           std::abs(free_gaussian(g.node(g.nearest(-30.0)), 0.0, -30.0, 2.0, 2.0, params));
      CrankNicolson prop(g, dt, params);
      for (std::size_t i = 0; i < steps; ++i) prop.step(state.values);
      const double t = dt * static_cast<double>(steps);
      double sq = 0.0;
      for (std::size_t i = 0; i < g.n(); ++i) {
        sq += std::norm(state.values[i] - scale * free_gaussian(g.node(i), t, -30.0, 2.0, 2.0, params));
      }
      errors.push_back(std::sqrt(sq * h));
    }
    const double o1 = std::log2(errors[0] / errors[1]);
    const double o2 = std::log2(errors[1] / errors[2]);
    CheckResult conv{"solver_convergence", "numeric_solver", std::abs(o1 - 2.0) <= 0.2 && std::abs(o2 - 2.0) <= 0.2};
    conv.metrics["l2_errors"] = errors;
    conv.metrics["observed_orders"] = {o1, o2};
    out.push_back(std::move(conv));
  }
  return out;
}

std::vector<CheckResult> doppler_checks(Rng& rng, std::size_t threads) {
  std::vector<CheckResult> out;
  const PhysicalParams params;
  const double k0 = 5.0;
  const std::vector<double> velocities{-2.0, 0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  const EvolutionConfig sim{comoving_grid(120.0, 4096), 0.002, 0, 1, 0.0, params};
  const DopplerReport report = doppler_sweep(k0, velocities, sim, WavepacketSpec{}, threads);

  bool sign_ok = true, law_ok = true, skip_ok = true;
  double worst_law = 0.0;
  for (const auto& row : report.rows) {
    const bool should_skip = row.v >= params.hbar() * k0 / params.mass();
    skip_ok = skip_ok && (should_skip == (row.skipped_reason == "NoCollision"));
    if (!row.k_measured) continue;
    const double res = *row.resolution;
    if (std::abs(row.k_predicted) > 3.0 * res) {
      const double err = std::abs(*row.k_measured - row.k_predicted);
      sign_ok = sign_ok && std::signbit(*row.k_measured) == std::signbit(row.k_predicted);
      law_ok = law_ok && err < std::max(res, 0.02 * std::abs(row.k_predicted));
      worst_law = std::max(worst_law, err / std::max(res, 0.02 * std::abs(row.k_predicted)));
    }
  }
  CheckResult sign{"doppler_sign", "doppler_analysis", sign_ok};
  CheckResult law{"doppler_law", "doppler_analysis", law_ok};
  law.metrics["worst_error_over_tolerance"] = worst_law;
  auto measured = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    measured.push_back({{"v", row.v}, {"k_predicted", row.k_predicted},
                        {"k_measured", row.k_measured ? nlohmann::ordered_json(*row.k_measured) : nullptr}});
  }
  law.metrics["rows"] = measured;
  CheckResult skip{"doppler_skip_consistency", "doppler_analysis", skip_ok};
  out.push_back(std::move(sign));
  out.push_back(std::move(law));
  out.push_back(std::move(skip));

  {
    const Grid1D grid(-20.0, 0.0, 2001);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double q = uniform(rng, 0.3, 2.0);
      const double shift = uniform(rng, -0.4, 0.4) * std::numbers::pi / (2.0 * q);
      const double phase = uniform(rng, 0.0, 6.0);
      std::vector<double> a(grid.n()), b(grid.n());
      for (std::size_t j = 0; j < grid.n(); ++j) {
        const double x = grid.node(j);
        a[j] = 1.0 + 0.5 * std::sin(2.0 * q * x + phase) + 0.2 * std::cos(4.0 * q * x);
        const double xs = x - shift;
        b[j] = 1.0 + 0.5 * std::sin(2.0 * q * xs + phase) + 0.2 * std::cos(4.0 * q * xs);
      }
      const double dt = 0.1;
      worst = std::max(worst, std::abs(measure_drift_velocity(a, b, grid, dt, q) * dt - shift) / grid.spacing());
    }
    CheckResult drift{"drift_estimator_translation", "doppler_analysis", worst < 0.5};
    drift.metrics["max_shift_error_in_nodes"] = worst;
    out.push_back(std::move(drift));
  }
  {
    const PlaneWaveScattering s(2.0, 1.5);
    const Grid1D grid(-20.0, 0.0, 2001);
    const double t0 = 0.0, dt = 0.05;
    std::vector<double> a(grid.n()), b(grid.n());
    for (std::size_t j = 0; j < grid.n(); ++j) {
      a[j] = probability_density(grid.node(j), t0, s);
      b[j] = probability_density(grid.node(j), t0 + dt, s);
    }
    const double vd = measure_drift_velocity(a, b, grid, dt, s.k_bar());
    CheckResult pattern{"drift_pattern_velocity", "doppler_analysis", std::abs(vd - s.v()) < 0.1};
    pattern.metrics["measured"] = vd;
    pattern.metrics["expected"] = s.v();
    out.push_back(std::move(pattern));
  }
  {
    const Grid1D grid(0.0, 80.0, 1601);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double k = uniform(rng, -20.0, 20.0);
      const double phi = uniform(rng, 0.0, 6.0);
      std::vector<cplx> values(grid.n());
      for (std::size_t j = 0; j < grid.n(); ++j) values[j] = std::polar(1.0, k * grid.node(j) + phi);
      const FieldSnapshot snap(0.0, Frame::Lab, 0.0, grid, values);
      const auto est = estimate_peak_wavenumber(snap, grid.x_min(), grid.x_max());
      worst = std::max(worst, std::abs(est.k_peak - k) / est.resolution);
    }
    CheckResult peak{"peak_estimator_unbiased", "doppler_analysis", worst < 0.1};
    peak.metrics["max_error_in_resolutions"] = worst;
    out.push_back(std::move(peak));
  }
  return out;
}

}  // namespace

VerifyLedger run_verification(std::uint64_t seed, std::size_t threads) {
  VerifyLedger ledger;
  ledger.seed = seed;
  Rng rng(seed);
  auto& c = ledger.checks;
  c.push_back(analytic_boundary(rng));
  c.push_back(analytic_factorization(rng));
  c.push_back(analytic_drift(rng));
  c.push_back(analytic_galilean(rng));
  c.push_back(analytic_round_trip(rng));
  c.push_back(analytic_residual());
  c.push_back(analytic_regimes(rng));
  c.push_back(analytic_degenerate(rng));
  for (auto& r : solver_checks(rng)) c.push_back(std::move(r));
  for (auto& r : doppler_checks(rng, threads)) c.push_back(std::move(r));
  return ledger;
}

}  // namespace mwall
