#include "mwall/doppler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <thread>

#include "mwall/error.hpp"
#include "mwall/spectral.hpp"

namespace mwall {

SpectralEstimate estimate_peak_wavenumber(const FieldSnapshot& snapshot, double x_lo, double x_hi) {
  const auto [lo, hi] = node_range(snapshot.grid, x_lo, x_hi);
  const std::size_t m = hi - lo;
  if (m < kMinSpectralNodes) {
    throw Error(ErrorCode::RegionTooSmall, "spectral region holds " + std::to_string(m) + " nodes, need " +
                                               std::to_string(kMinSpectralNodes));
  }
  const auto region = std::span(snapshot.values).subspan(lo, m);
  const double peak_abs = std::abs(*std::max_element(
      region.begin(), region.end(), [](const cplx& a, const cplx& b) { return std::abs(a) < std::abs(b); }));
  if (peak_abs < 1e-12) throw Error(ErrorCode::NoSignal, "field vanishes over the spectral region");

  std::vector<cplx> windowed(m);
  double window_sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double s = std::sin(std::numbers::pi * static_cast<double>(j) / static_cast<double>(m - 1));
    windowed[j] = s * s * region[j];
    window_sum += s * s;
  }
  const std::size_t size = kZeroPadFactor * m;
  const auto spectrum = forward_dft(windowed, size);

  std::vector<double> magnitude(size);
  std::transform(spectrum.begin(), spectrum.end(), magnitude.begin(), [](const cplx& z) { return std::abs(z); });
  const auto peak = static_cast<std::size_t>(
      std::distance(magnitude.begin(), std::max_element(magnitude.begin(), magnitude.end())));
  const double left = magnitude[(peak + size - 1) % size];
  const double centre = magnitude[peak];
  const double right = magnitude[(peak + 1) % size];
  const double curvature = left - 2.0 * centre + right;
  const double offset = curvature != 0.0 ? 0.5 * (left - right) / curvature : 0.0;

  const double h = snapshot.grid.spacing();
  const double bin_width = 2.0 * std::numbers::pi / (static_cast<double>(size) * h);
  SpectralEstimate est;
  est.k_peak = bin_wavenumber(peak, size, h) + offset * bin_width;
  est.amplitude = (centre - 0.25 * (left - right) * offset) / window_sum;
  est.resolution = 2.0 * std::numbers::pi / (static_cast<double>(m) * h);
  return est;
}

namespace {

// Nodes kept between the far wall and the spectral window.
constexpr std::size_t kFarMarginNodes = 16;
constexpr double kGateCheckInterval = 0.5;

}  // namespace

ReflectionMeasurement measure_reflection(double k0_lab, double v, const EvolutionConfig& sim,
                                         const WavepacketSpec& spec) {
  if (!(sim.dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "measurement runs need dt > 0");
  const PhysicalParams& params = sim.params;
  WavepacketSpec packet = spec;
  packet.k0_lab = k0_lab;
  FieldSnapshot state = init_gaussian(sim.grid, packet, v, params);

  const std::size_t min_steps =
      std::max<std::size_t>(1, sim.n_steps > 0 ? sim.n_steps : recommended_steps(packet, v, sim.dt, params));
  const std::size_t max_steps = 8 * min_steps;
  const auto check_every = static_cast<std::size_t>(std::max(1.0, std::ceil(kGateCheckInterval / sim.dt)));

  CrankNicolson propagator(sim.grid, sim.dt, params);
  ReflectionMeasurement out;
  const double initial_norm = state.norm();
  std::size_t steps = 0;
  for (;;) {
    const std::size_t target = std::min(max_steps, steps < min_steps ? min_steps : steps + check_every);
    for (; steps < target; ++steps) propagator.step(state.values);
    state.time = static_cast<double>(steps) * sim.dt;
    out.norm_drift = std::max(out.norm_drift, std::abs(state.norm() - initial_norm));
    out.boundary_fraction = far_boundary_fraction(state);
    if (out.boundary_fraction > kBoundaryWarningFraction) {
      std::ostringstream msg;
      msg << out.boundary_fraction * 100.0 << "% of the norm sits at the far boundary at t="
          << static_cast<double>(steps) * sim.dt;
      throw Error(ErrorCode::ContaminatedRun, msg.str());
    }
    out.unreversed_fraction = positive_wavenumber_fraction(state);
    if (out.unreversed_fraction < kReversalGate) break;
    if (steps >= max_steps) {
      std::ostringstream msg;
      msg << out.unreversed_fraction * 100.0 << "% of the norm still moves toward the wall after " << steps
          << " steps";
      throw Error(ErrorCode::IncompleteReflection, msg.str());
    }
  }
  out.steps = steps;
  out.time = state.time;

  // Window centred on the density centroid, as wide as the wall and the
  // far-boundary margin allow.
  const Grid1D& grid = sim.grid;
  const double usable_lo = grid.node(kFarMarginNodes);
  const double wall = grid.x_max();
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t i = kFarMarginNodes; i < grid.n(); ++i) {
    const double p = std::norm(state.values[i]);
    weighted += p * grid.node(i);
    total += p;
  }
  const double centroid = weighted / total;
  const double half_width = std::min(wall - centroid, centroid - usable_lo);
  const double shift = v * state.time;
  out.window_lo = centroid - half_width + shift;
  out.window_hi = centroid + half_width + shift;

  const FieldSnapshot lab = to_lab_frame(state, v, params);
  out.estimate = estimate_peak_wavenumber(lab, out.window_lo, out.window_hi);
  return out;
}

bool DopplerReport::all_passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const DopplerRow& r) { return r.passed; });
}

void grade_row(DopplerRow& row) {
  if (!row.k_measured) {
    row.relative_error.reset();
    row.passed = true;
    return;
  }
  const double error = std::abs(*row.k_measured - row.k_predicted);
  const double magnitude = std::abs(row.k_predicted);
  if (magnitude > 0.0) row.relative_error = error / magnitude;
  else row.relative_error.reset();
  const double resolution = row.resolution.value_or(0.0);
  row.passed = magnitude > 3.0 * resolution ? error / magnitude < kDopplerRelativeTolerance : error < resolution;
}

DopplerReport doppler_sweep(double k0_lab, std::span<const double> velocities,
                            const EvolutionConfig& sim_template, const WavepacketSpec& spec,
                            std::size_t threads) {
  if (velocities.empty()) throw Error(ErrorCode::InvalidArgument, "velocity list is empty");
  DopplerReport report;
  report.k0 = k0_lab;
  report.params = sim_template.params;
  report.rows.resize(velocities.size());
  std::vector<std::exception_ptr> failures(velocities.size());

  auto run_row = [&](std::size_t idx) {
    DopplerRow& row = report.rows[idx];
    row.v = velocities[idx];
    row.k_predicted = reflected_wavenumber(k0_lab, row.v, sim_template.params);
    row.regime = classify_regime(k0_lab, row.v, sim_template.params);
    try {
      EvolutionConfig sim = sim_template;
      sim.wall_velocity = row.v;
      const auto m = measure_reflection(k0_lab, row.v, sim, spec);
      row.k_measured = m.estimate.k_peak;
      row.resolution = m.estimate.resolution;
    } catch (const Error& e) {
      switch (e.code()) {
        case ErrorCode::NoCollision:
        case ErrorCode::ContaminatedRun:
        case ErrorCode::IncompleteReflection:
          row.skipped_reason = std::string(to_string(e.code()));
          break;
        default:
          throw;
      }
    }
    grade_row(row);
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, velocities.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t idx = next++; idx < velocities.size(); idx = next++) {
      try {
        run_row(idx);
      } catch (...) {
        failures[idx] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return report;
}

double measure_drift_velocity(std::span<const double> density_a, std::span<const double> density_b,
                              const Grid1D& grid, double delta_t, double k_bar) {
  if (k_bar == 0.0) throw Error(ErrorCode::FlatPattern, "k_bar = 0: the density pattern is identically zero");
  if (!(delta_t > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta_t must be positive");
  if (density_a.size() != grid.n() || density_b.size() != grid.n()) {
    throw Error(ErrorCode::InvalidArgument, "density arrays do not match the grid");
  }
  const double h = grid.spacing();
  const double half_period = std::numbers::pi / (2.0 * std::abs(k_bar));
  const auto n = static_cast<long>(grid.n());
  const long max_shift = std::min(static_cast<long>(std::floor(half_period / h)), n / 2);
  if (max_shift < 2) throw Error(ErrorCode::AliasedShift, "grid too coarse to resolve half a pattern period");

  // Pearson correlation of a[i] with b[i + s] over the overlapping nodes.
  auto correlation = [&](long s) {
    const long first = std::max(0L, -s);
    const long last = std::min(n, n - s);
    const auto count = static_cast<double>(last - first);
    double ma = 0.0, mb = 0.0;
    for (long i = first; i < last; ++i) {
      ma += density_a[i];
      mb += density_b[i + s];
    }
    ma /= count;
    mb /= count;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (long i = first; i < last; ++i) {
      const double da = density_a[i] - ma;
      const double db = density_b[i + s] - mb;
      sab += da * db;
      saa += da * da;
      sbb += db * db;
    }
    if (saa <= 0.0 || sbb <= 0.0) throw Error(ErrorCode::FlatPattern, "density arrays carry no pattern");
    return sab / std::sqrt(saa * sbb);
  };

  std::vector<double> r(static_cast<std::size_t>(2 * max_shift + 1));
  for (long s = -max_shift; s <= max_shift; ++s) r[static_cast<std::size_t>(s + max_shift)] = correlation(s);
  const auto best = static_cast<long>(std::distance(r.begin(), std::max_element(r.begin(), r.end())));
  const long shift = best - max_shift;
  if (std::abs(shift) == max_shift) {
    throw Error(ErrorCode::AliasedShift, "pattern moved at least half a period between the two snapshots");
  }
  const double left = r[static_cast<std::size_t>(best - 1)];
  const double centre = r[static_cast<std::size_t>(best)];
  const double right = r[static_cast<std::size_t>(best + 1)];
  const double curvature = left - 2.0 * centre + right;
  const double offset = curvature != 0.0 ? 0.5 * (left - right) / curvature : 0.0;
  return (static_cast<double>(shift) + offset) * h / delta_t;
}

}  // namespace mwall
