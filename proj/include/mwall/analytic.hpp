#ifndef MWALL_ANALYTIC_HPP
#define MWALL_ANALYTIC_HPP

// Closed-form solution of a plane matter wave reflected by a hard wall that
// moves at constant velocity v.  The wall sits at x = v t and the physical
// region is x <= v t.  All fields are unnormalized plane-wave superpositions.

#include <complex>
#include <concepts>
#include <string_view>
#include <type_traits>
#include <vector>

#include "mwall/grid.hpp"

namespace mwall {

/// hbar and mass.  Defaults are natural units.
class PhysicalParams {
public:
  PhysicalParams() = default;
  PhysicalParams(double hbar, double mass);

  double hbar() const { return hbar_; }
  double mass() const { return mass_; }

  bool operator==(const PhysicalParams&) const = default;

private:
  double hbar_ = 1.0;
  double mass_ = 1.0;
};

/// Which way the reflected wave's phase fronts travel relative to the incident
/// wave (thresholds at v = hbar k / 2m and v = hbar k / m).
///
/// The lab-frame labelling is fixed: the incident wave is always the +x moving
/// e^{ikx} component with k > 0.  In the wall frame the same field is a
/// standing wave of wavenumber k - m v / hbar, and which component "looks
/// incident" there flips with the sign of that wavenumber; that relabelling
/// is not reflected in these labels.
enum class RegimeClass {
  CounterPropagating,
  ZeroReflectedWavenumber,
  CoPropagating,
  Degenerate,
  CoPropagatingFaster,
};

std::string_view to_string(RegimeClass regime);

/// -k + 2 m v / hbar.  Throws DomainError for k <= 0.
double reflected_wavenumber(double k, double v, const PhysicalParams& params = {});

/// Always -1.
std::complex<double> reflection_coefficient();

/// hbar k^2 / 2m
double dispersion(double k, const PhysicalParams& params = {});

/// v - hbar k / 2m, the phase velocity of the reflected wave.
double reflected_phase_velocity(double k, double v, const PhysicalParams& params = {});

/// Exact threshold comparisons; the degenerate point v = hbar k / m is
/// checked first because the total field vanishes there.
RegimeClass classify_regime(double k, double v, const PhysicalParams& params = {});

/// One (k, v) scattering instance with every derived quantity precomputed.
class PlaneWaveScattering {
public:
  PlaneWaveScattering(double k, double v, const PhysicalParams& params = {});

  double k() const { return k_; }
  double v() const { return v_; }
  const PhysicalParams& params() const { return params_; }

  double k_prime() const { return k_prime_; }
  double omega() const { return omega_; }
  double omega_prime() const { return omega_prime_; }
  std::complex<double> r() const { return reflection_coefficient(); }
  /// Wavenumber in the wall frame, k - m v / hbar.
  double k_bar() const { return k_bar_; }
  RegimeClass regime() const { return regime_; }

private:
  double k_;
  double v_;
  PhysicalParams params_;
  double k_prime_;
  double omega_;
  double omega_prime_;
  double k_bar_;
  RegimeClass regime_;
};

/// e^{i(kx - wt)} + r e^{i(k'x - w't)}, evaluated for any x (callers mask
/// the unphysical side x > v t).
cplx total_wavefunction(double x, double t, const PlaneWaveScattering& scat);

/// 2i sin(k_bar x_bar) exp(-i hbar k_bar^2 t / 2m): the standing wave seen
/// from the wall frame, wall at x_bar = 0.
cplx comoving_wavefunction(double x_bar, double t, double k_bar, const PhysicalParams& params = {});

/// exp[i(m v x / hbar - m v^2 t / 2 hbar)], the Galilean boost phase evaluated
/// at the lab coordinate x.
cplx galilean_phase(double x, double t, double v, const PhysicalParams& params = {});

/// Maps a wall-frame snapshot to the lab frame: nodes move by v t and every
/// value picks up the boost phase.  Throws FrameMismatch for a Lab input.
FieldSnapshot galilean_lift(const FieldSnapshot& snapshot, double v, const PhysicalParams& params = {});

/// Samples the wall-frame standing wave on a grid.
FieldSnapshot sample_comoving(const Grid1D& grid, double t, double k_bar, double v,
                              const PhysicalParams& params = {});
/// Samples the lab-frame total field on a grid.
FieldSnapshot sample_lab(const Grid1D& grid, double t, const PlaneWaveScattering& scat);

/// 4 sin^2[(k - m v / hbar)(x - v t)]
double probability_density(double x, double t, const PlaneWaveScattering& scat);

/// 4 v sin^2[(k - m v / hbar)(x - v t)]
double probability_current(double x, double t, const PlaneWaveScattering& scat);

/// Current estimate (hbar/m) Im(psi* d_x psi) on every node.  Second-order
/// central differences inside, second-order one-sided stencils at the ends.
std::vector<double> discrete_current(const FieldSnapshot& snapshot, const PhysicalParams& params = {});

inline constexpr double kDefaultNodeTolerance = 1e-12;

/// J / |psi|^2 as a literal ratio.  Throws NodeSingularity when the density
/// is at or below node_tolerance.
double drift_velocity(double x, double t, const PlaneWaveScattering& scat,
                      double node_tolerance = kDefaultNodeTolerance);

template <typename F>
concept FieldSampler = std::invocable<F, double, double> &&
                       std::convertible_to<std::invoke_result_t<F, double, double>, cplx>;

/// i hbar D_t psi + (hbar^2 / 2m) D_xx psi with symmetric second-order
/// stencils.  O(h^2 + dt^2) for exact solutions.
template <FieldSampler F>
cplx schrodinger_residual(F&& field, double x, double t, double h, double dt,
                          const PhysicalParams& params = {}) {
  const cplx i{0.0, 1.0};
  const cplx centre = field(x, t);
  const cplx time_derivative = (cplx(field(x, t + dt)) - cplx(field(x, t - dt))) / (2.0 * dt);
  const cplx laplacian = (cplx(field(x + h, t)) - 2.0 * centre + cplx(field(x - h, t))) / (h * h);
  const double hbar = params.hbar();
  return i * hbar * time_derivative + (hbar * hbar / (2.0 * params.mass())) * laplacian;
}

}  // namespace mwall

#endif
