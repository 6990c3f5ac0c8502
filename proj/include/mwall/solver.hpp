#ifndef MWALL_SOLVER_HPP
#define MWALL_SOLVER_HPP

// Time-dependent Schrodinger solver for a hard wall moving at constant
// velocity.  The problem is integrated in the wall frame, where the wall is a
// static Dirichlet node at x_bar = 0, and lifted to the lab frame afterwards.

#include <cstddef>
#include <span>
#include <vector>

#include "mwall/analytic.hpp"
#include "mwall/grid.hpp"

namespace mwall {

/// Gaussian packet exp[-(x - x0)^2 / 4 sigma^2] e^{i k x}.  x0 and sigma are
/// wall-frame quantities; k0_lab is the central wavenumber seen in the lab.
struct WavepacketSpec {
  double x0 = -30.0;
  double sigma = 2.0;
  double k0_lab = 5.0;
};

struct EvolutionConfig {
  Grid1D grid;
  double dt = 0.002;
  std::size_t n_steps = 0;
  std::size_t snapshot_stride = 1;
  double wall_velocity = 0.0;
  PhysicalParams params{};
};

/// Wall-frame grid [-length, 0] with n nodes.
Grid1D comoving_grid(double length, std::size_t n);

/// k0_lab - m v / hbar
double comoving_wavenumber(const WavepacketSpec& spec, double wall_velocity,
                           const PhysicalParams& params = {});

/// Steps needed for the packet centre to reach the wall and travel back to
/// its starting distance: t = 2|x0| / (hbar k_bar / m).
std::size_t recommended_steps(const WavepacketSpec& spec, double wall_velocity, double dt,
                              const PhysicalParams& params = {});

/// Discretely L2-normalized Gaussian in the wall frame, endpoints exactly 0.
/// Throws ClearanceViolation if the packet overlaps either boundary within
/// 4 sigma, NoCollision if the packet cannot catch the wall (k_bar <= 0).
FieldSnapshot init_gaussian(const Grid1D& grid, const WavepacketSpec& spec, double wall_velocity,
                            const PhysicalParams& params = {});

/// Trapezoidal (Crank-Nicolson) propagator for i hbar d_t phi = -(hbar^2/2m) d_xx phi
/// with Dirichlet endpoints, using the 3-point Laplacian.  The tridiagonal
/// factorization is built once and reused for every step.  A negative dt
/// gives the exact inverse propagator.
class CrankNicolson {
public:
  CrankNicolson(const Grid1D& grid, double dt, const PhysicalParams& params = {});

  /// Advances the interior of `field` in place; the two endpoints are
  /// neither read nor written.
  void step(std::span<cplx> field);

  double dt() const { return dt_; }
  std::size_t size() const { return n_; }

private:
  std::size_t n_;
  double dt_;
  cplx off_diagonal_;      // left-hand side, both off-diagonals
  cplx rhs_diagonal_;
  cplx rhs_off_diagonal_;
  std::vector<cplx> upper_;      // modified upper diagonal of the LU sweep
  std::vector<cplx> inv_pivot_;  // reciprocal pivots
  std::vector<cplx> rhs_;
};

/// One step of the propagator.  Requires a Comoving snapshot with zero endpoints.
FieldSnapshot cn_step(const FieldSnapshot& field, double dt, const PhysicalParams& params = {});

/// Nodes adjacent to the far boundary that count as "at the boundary".
inline constexpr std::size_t kBoundaryBandNodes = 4;
/// Fraction of the norm allowed inside the boundary band before a run is
/// flagged as contaminated by spurious far-wall reflections.
inline constexpr double kBoundaryWarningFraction = 1e-3;

/// Share of the norm sitting within kBoundaryBandNodes of the far (x_min) boundary.
double far_boundary_fraction(const FieldSnapshot& snapshot);

struct EvolutionResult {
  std::vector<FieldSnapshot> snapshots;
  double initial_norm = 0.0;
  double final_norm = 0.0;
  /// max over all steps of |norm - initial_norm|
  double norm_drift = 0.0;
  double boundary_fraction = 0.0;
  bool boundary_warning = false;
};

/// Applies n_steps propagator steps and records every snapshot_stride-th
/// state, always including the initial and final ones.
EvolutionResult evolve(const FieldSnapshot& initial, const EvolutionConfig& config);

/// Wall frame -> lab frame; same as galilean_lift.
FieldSnapshot to_lab_frame(const FieldSnapshot& snapshot, double v, const PhysicalParams& params = {});

}  // namespace mwall

#endif
