#ifndef MWALL_DOPPLER_HPP
#define MWALL_DOPPLER_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mwall/analytic.hpp"
#include "mwall/grid.hpp"
#include "mwall/solver.hpp"

namespace mwall {

/// Peak of a windowed spectrum.  k_peak is meaningful to +/- resolution / 2.
struct SpectralEstimate {
  double k_peak = 0.0;
  double amplitude = 0.0;
  double resolution = 0.0;
};

inline constexpr std::size_t kMinSpectralNodes = 64;
inline constexpr std::size_t kZeroPadFactor = 8;

/// Hann-windowed, 8x zero-padded DFT of the complex field over the nodes in
/// [x_lo, x_hi]; the magnitude peak over signed wavenumbers is refined by a
/// 3-point parabola.  amplitude is normalized so a unit plane wave reads ~1.
/// resolution = 2 pi / (M h) for M nodes in the region.
SpectralEstimate estimate_peak_wavenumber(const FieldSnapshot& snapshot, double x_lo, double x_hi);

/// Norm share still moving toward the wall (positive wall-frame wavenumber)
/// below which the reflected packet is considered isolated in time.
inline constexpr double kReversalGate = 0.01;

struct ReflectionMeasurement {
  SpectralEstimate estimate;
  double time = 0.0;
  std::size_t steps = 0;
  /// Positive-wavenumber norm share in the wall frame at measurement time.
  double unreversed_fraction = 0.0;
  double boundary_fraction = 0.0;
  double norm_drift = 0.0;
  /// Lab-frame window the spectrum was taken over.
  double window_lo = 0.0;
  double window_hi = 0.0;
};

/// Simulates a Gaussian packet of lab wavenumber k0_lab hitting a wall moving
/// at v and measures the reflected packet's lab-frame wavenumber.
///
/// The packet is evolved at least sim.n_steps steps (recommended_steps when
/// 0) and then until fewer than kReversalGate of its norm still has positive
/// wall-frame wavenumber, up to 8x the minimum.  The spectrum is taken in the
/// lab frame over a window centred on the packet's density centroid so the
/// Hann taper does not skew the peak.  sim.wall_velocity is ignored in favour of v.
///
/// Throws NoCollision when v >= hbar k0_lab / m, ContaminatedRun when the
/// far boundary holds more than kBoundaryWarningFraction of the norm at any
/// gate check, and IncompleteReflection when the gate is not met within the
/// step budget.
ReflectionMeasurement measure_reflection(double k0_lab, double v, const EvolutionConfig& sim,
                                         const WavepacketSpec& spec);

struct DopplerRow {
  double v = 0.0;
  double k_predicted = 0.0;
  std::optional<double> k_measured;
  /// |k_measured - k_predicted| / |k_predicted|; empty when skipped or k_predicted = 0.
  std::optional<double> relative_error;
  std::optional<double> resolution;
  RegimeClass regime = RegimeClass::CounterPropagating;
  std::optional<std::string> skipped_reason;
  /// Relative error below 2%, or, when |k_predicted| <= 3 resolution, absolute
  /// error below one resolution.  Skipped rows count as passed.
  bool passed = true;
};

struct DopplerReport {
  double k0 = 0.0;
  PhysicalParams params;
  std::vector<DopplerRow> rows;

  bool all_passed() const;
};

inline constexpr double kDopplerRelativeTolerance = 0.02;

/// Grades a measured row against its prediction (see DopplerRow::passed).
void grade_row(DopplerRow& row);

/// One row per velocity, in input order.  Rows are computed on up to
/// `threads` workers (0 = hardware concurrency); the result does not depend
/// on the worker count.
DopplerReport doppler_sweep(double k0_lab, std::span<const double> velocities,
                            const EvolutionConfig& sim_template, const WavepacketSpec& spec,
                            std::size_t threads = 0);

/// Velocity of the density pattern from the shift that maximizes the
/// correlation of two density snapshots taken delta_t apart, refined to
/// sub-node precision by a parabola.  Shifts are searched up to half a pattern
/// period pi / (2|k_bar|); a maximum on that bound raises AliasedShift.
/// Exact for rigidly translated patterns such as the plane-wave density; on
/// wavepacket densities the result is only an approximate drift.
double measure_drift_velocity(std::span<const double> density_a, std::span<const double> density_b,
                              const Grid1D& grid, double delta_t, double k_bar);

}  // namespace mwall

#endif
