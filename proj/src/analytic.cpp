#include "mwall/analytic.hpp"

#include <cmath>
#include <string>

#include "mwall/error.hpp"

namespace mwall {

namespace {

void require_incident(double k) {
  if (!(k > 0.0)) {
    throw Error(ErrorCode::DomainError,
                "incident wavenumber must satisfy k > 0 (wave incident from the left), got k=" +
                    std::to_string(k));
  }
}

// Phases of the lab-frame plane waves reach |kx - wt| ~ 1e3 over ordinary
// sweeps.  They are accumulated and reduced in extended precision so that the
// two exponentials cancel at the wall to double roundoff.
cplx unit_phasor(long double phase) {
  const long double two_pi = 6.283185307179586476925286766559L;
  const long double reduced = std::remainder(phase, two_pi);
  const double p = static_cast<double>(reduced);
  return {std::cos(p), std::sin(p)};
}

}  // namespace

PhysicalParams::PhysicalParams(double hbar, double mass) : hbar_(hbar), mass_(mass) {
  if (!(hbar > 0.0) || !(mass > 0.0) || !std::isfinite(hbar) || !std::isfinite(mass)) {
    throw Error(ErrorCode::InvalidArgument, "hbar and mass must be finite and positive");
  }
}

std::string_view to_string(RegimeClass regime) {
  switch (regime) {
    case RegimeClass::CounterPropagating: return "CounterPropagating";
    case RegimeClass::ZeroReflectedWavenumber: return "ZeroReflectedWavenumber";
    case RegimeClass::CoPropagating: return "CoPropagating";
    case RegimeClass::Degenerate: return "Degenerate";
    case RegimeClass::CoPropagatingFaster: return "CoPropagatingFaster";
  }
  return "Unknown";
}

double reflected_wavenumber(double k, double v, const PhysicalParams& params) {
  require_incident(k);
  return -k + 2.0 * params.mass() * v / params.hbar();
}

std::complex<double> reflection_coefficient() { return {-1.0, 0.0}; }

double dispersion(double k, const PhysicalParams& params) {
  return params.hbar() * k * k / (2.0 * params.mass());
}

double reflected_phase_velocity(double k, double v, const PhysicalParams& params) {
  require_incident(k);
  return v - params.hbar() * k / (2.0 * params.mass());
}

RegimeClass classify_regime(double k, double v, const PhysicalParams& params) {
  require_incident(k);
  const double incident_phase_velocity = params.hbar() * k / (2.0 * params.mass());
  const double group_velocity = params.hbar() * k / params.mass();
  if (v == group_velocity) return RegimeClass::Degenerate;
  if (v < incident_phase_velocity) return RegimeClass::CounterPropagating;
  if (v == incident_phase_velocity) return RegimeClass::ZeroReflectedWavenumber;
  if (v < group_velocity) return RegimeClass::CoPropagating;
  return RegimeClass::CoPropagatingFaster;
}

PlaneWaveScattering::PlaneWaveScattering(double k, double v, const PhysicalParams& params)
    : k_(k), v_(v), params_(params),
      k_prime_(reflected_wavenumber(k, v, params)),
      omega_(dispersion(k, params)),
      omega_prime_(dispersion(k_prime_, params)),
      k_bar_(k - params.mass() * v / params.hbar()),
      regime_(classify_regime(k, v, params)) {}

cplx total_wavefunction(double x, double t, const PlaneWaveScattering& scat) {
  using ld = long double;
  const ld hbar = scat.params().hbar();
  const ld mass = scat.params().mass();
  const ld k = scat.k();
  const ld kp = -k + 2.0L * mass * static_cast<ld>(scat.v()) / hbar;
  const ld w = hbar * k * k / (2.0L * mass);
  const ld wp = hbar * kp * kp / (2.0L * mass);
  const ld xl = x;
  const ld tl = t;
  return unit_phasor(k * xl - w * tl) + scat.r() * unit_phasor(kp * xl - wp * tl);
}

cplx comoving_wavefunction(double x_bar, double t, double k_bar, const PhysicalParams& params) {
  using ld = long double;
  const ld phase = -static_cast<ld>(params.hbar()) * k_bar * k_bar * t / (2.0L * params.mass());
  return cplx(0.0, 2.0 * std::sin(k_bar * x_bar)) * unit_phasor(phase);
}

cplx galilean_phase(double x, double t, double v, const PhysicalParams& params) {
  using ld = long double;
  const ld hbar = params.hbar();
  const ld mass = params.mass();
  const ld vl = v;
  return unit_phasor(mass * vl * x / hbar - mass * vl * vl * t / (2.0L * hbar));
}

FieldSnapshot galilean_lift(const FieldSnapshot& snapshot, double v, const PhysicalParams& params) {
  if (snapshot.frame != Frame::Comoving) {
    throw Error(ErrorCode::FrameMismatch, "galilean_lift expects a Comoving snapshot");
  }
  const double t = snapshot.time;
  const Grid1D lab_grid = snapshot.grid.shifted(v * t);
  std::vector<cplx> values(snapshot.values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = galilean_phase(lab_grid.node(i), t, v, params) * snapshot.values[i];
  }
  return FieldSnapshot(t, Frame::Lab, v, lab_grid, std::move(values));
}

FieldSnapshot sample_comoving(const Grid1D& grid, double t, double k_bar, double v,
                              const PhysicalParams& params) {
  std::vector<cplx> values(grid.n());
  for (std::size_t i = 0; i < grid.n(); ++i) {
    values[i] = comoving_wavefunction(grid.node(i), t, k_bar, params);
  }
  return FieldSnapshot(t, Frame::Comoving, v, grid, std::move(values));
}

FieldSnapshot sample_lab(const Grid1D& grid, double t, const PlaneWaveScattering& scat) {
  std::vector<cplx> values(grid.n());
  for (std::size_t i = 0; i < grid.n(); ++i) values[i] = total_wavefunction(grid.node(i), t, scat);
  return FieldSnapshot(t, Frame::Lab, scat.v(), grid, std::move(values));
}

double probability_density(double x, double t, const PlaneWaveScattering& scat) {
  const double s = std::sin(scat.k_bar() * (x - scat.v() * t));
  return 4.0 * s * s;
}

double probability_current(double x, double t, const PlaneWaveScattering& scat) {
  const double s = std::sin(scat.k_bar() * (x - scat.v() * t));
  return 4.0 * scat.v() * s * s;
}

std::vector<double> discrete_current(const FieldSnapshot& snapshot, const PhysicalParams& params) {
  const auto& psi = snapshot.values;
  const std::size_t n = psi.size();
  if (n < 3) throw Error(ErrorCode::GridTooSmall, "discrete_current needs at least 3 nodes");
  const double h = snapshot.grid.spacing();
  const double scale = params.hbar() / params.mass();

  std::vector<double> j(n);
  auto current = [&](std::size_t i, cplx derivative) {
    return scale * (std::conj(psi[i]) * derivative).imag();
  };
  j.front() = current(0, (-3.0 * psi[0] + 4.0 * psi[1] - psi[2]) / (2.0 * h));
  for (std::size_t i = 1; i + 1 < n; ++i) {
    j[i] = current(i, (psi[i + 1] - psi[i - 1]) / (2.0 * h));
  }
  j.back() = current(n - 1, (3.0 * psi[n - 1] - 4.0 * psi[n - 2] + psi[n - 3]) / (2.0 * h));
  return j;
}

double drift_velocity(double x, double t, const PlaneWaveScattering& scat, double node_tolerance) {
  const double density = probability_density(x, t, scat);
  if (!(density > node_tolerance)) {
    throw Error(ErrorCode::NodeSingularity,
                "density " + std::to_string(density) + " at a node of the standing pattern");
  }
  return probability_current(x, t, scat) / density;
}

}  // namespace mwall
