#include "mwall/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "mwall/error.hpp"

namespace mwall {

Grid1D comoving_grid(double length, std::size_t n) {
  if (!(length > 0.0)) throw Error(ErrorCode::InvalidArgument, "domain length must be positive");
  return Grid1D(-length, 0.0, n);
}

double comoving_wavenumber(const WavepacketSpec& spec, double wall_velocity, const PhysicalParams& params) {
  return spec.k0_lab - params.mass() * wall_velocity / params.hbar();
}

std::size_t recommended_steps(const WavepacketSpec& spec, double wall_velocity, double dt,
                              const PhysicalParams& params) {
  const double k_bar = comoving_wavenumber(spec, wall_velocity, params);
  if (!(k_bar > 0.0) || !(dt > 0.0)) return 0;
  const double speed = params.hbar() * k_bar / params.mass();
  return static_cast<std::size_t>(std::ceil(2.0 * std::abs(spec.x0) / speed / dt));
}

FieldSnapshot init_gaussian(const Grid1D& grid, const WavepacketSpec& spec, double wall_velocity,
                            const PhysicalParams& params) {
  if (!(spec.sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "packet width sigma must be positive");
  if (!(spec.x0 + 4.0 * spec.sigma < grid.x_max()) || !(spec.x0 - 4.0 * spec.sigma > grid.x_min())) {
    std::ostringstream msg;
    msg << "packet x0=" << spec.x0 << ", sigma=" << spec.sigma << " must satisfy x0 +/- 4 sigma inside ("
        << grid.x_min() << ", " << grid.x_max() << ")";
    throw Error(ErrorCode::ClearanceViolation, msg.str());
  }
  const double k_bar = comoving_wavenumber(spec, wall_velocity, params);
  if (!(k_bar > 0.0)) {
    std::ostringstream msg;
    msg << "packet never reaches the wall: wall-frame wavenumber k0 - m v / hbar = " << k_bar
        << " <= 0; a reflection run requires v < hbar k0 / m = "
        << params.hbar() * spec.k0_lab / params.mass();
    throw Error(ErrorCode::NoCollision, msg.str());
  }

  std::vector<cplx> values(grid.n());
  const double four_var = 4.0 * spec.sigma * spec.sigma;
  for (std::size_t i = 1; i + 1 < grid.n(); ++i) {
    const double x = grid.node(i);
    const double d = x - spec.x0;
    values[i] = std::exp(-d * d / four_var) * cplx(std::cos(k_bar * x), std::sin(k_bar * x));
  }
  FieldSnapshot snap(0.0, Frame::Comoving, wall_velocity, grid, std::move(values));
  const double scale = 1.0 / std::sqrt(snap.norm());
  for (auto& z : snap.values) z *= scale;
  return snap;
}

CrankNicolson::CrankNicolson(const Grid1D& grid, double dt, const PhysicalParams& params)
    : n_(grid.n()), dt_(dt) {
  if (dt == 0.0 || !std::isfinite(dt)) throw Error(ErrorCode::InvalidArgument, "time step must be finite and nonzero");
  const double h = grid.spacing();
  const double beta = dt * params.hbar() / (4.0 * params.mass() * h * h);
  const cplx i{0.0, 1.0};
  const cplx diagonal = 1.0 + 2.0 * i * beta;
  off_diagonal_ = -i * beta;
  rhs_diagonal_ = 1.0 - 2.0 * i * beta;
  rhs_off_diagonal_ = i * beta;

  const std::size_t m = n_ - 2;
  upper_.resize(m);
  inv_pivot_.resize(m);
  rhs_.resize(m);
  cplx pivot = diagonal;
  for (std::size_t j = 0; j < m; ++j) {
    if (j > 0) pivot = diagonal - off_diagonal_ * upper_[j - 1];
    if (std::abs(pivot) < 1e-300) throw Error(ErrorCode::SingularSystem, "zero pivot in tridiagonal factorization");
    inv_pivot_[j] = 1.0 / pivot;
    upper_[j] = off_diagonal_ * inv_pivot_[j];
  }
}

void CrankNicolson::step(std::span<cplx> field) {
  if (field.size() != n_) throw Error(ErrorCode::InvalidArgument, "field size does not match the propagator grid");
  const std::size_t m = n_ - 2;
  // Interior unknown j lives at node j + 1.
  for (std::size_t j = 0; j < m; ++j) {
    const cplx left = j == 0 ? cplx{} : field[j];
    const cplx right = j + 1 == m ? cplx{} : field[j + 2];
    rhs_[j] = rhs_diagonal_ * field[j + 1] + rhs_off_diagonal_ * (left + right);
  }
  rhs_[0] *= inv_pivot_[0];
  for (std::size_t j = 1; j < m; ++j) rhs_[j] = (rhs_[j] - off_diagonal_ * rhs_[j - 1]) * inv_pivot_[j];
  field[m] = rhs_[m - 1];
  for (std::size_t j = m - 1; j-- > 0;) field[j + 1] = rhs_[j] - upper_[j] * field[j + 2];
}

namespace {

void require_comoving_dirichlet(const FieldSnapshot& field) {
  if (field.frame != Frame::Comoving) throw Error(ErrorCode::FrameMismatch, "the propagator runs in the Comoving frame");
  if (field.values.front() != cplx{} || field.values.back() != cplx{}) {
    throw Error(ErrorCode::InvalidArgument, "field endpoints must be exactly zero (Dirichlet walls)");
  }
}

}  // namespace

FieldSnapshot cn_step(const FieldSnapshot& field, double dt, const PhysicalParams& params) {
  require_comoving_dirichlet(field);
  CrankNicolson propagator(field.grid, dt, params);
  FieldSnapshot next = field;
  propagator.step(next.values);
  next.time += dt;
  return next;
}

double far_boundary_fraction(const FieldSnapshot& snapshot) {
  const auto& psi = snapshot.values;
  double band = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double p = std::norm(psi[i]);
    if (i <= kBoundaryBandNodes) band += p;
    total += p;
  }
  return total > 0.0 ? band / total : 0.0;
}

EvolutionResult evolve(const FieldSnapshot& initial, const EvolutionConfig& config) {
  if (!(initial.grid == config.grid)) throw Error(ErrorCode::InvalidArgument, "initial field is not on the configured grid");
  if (config.snapshot_stride == 0) throw Error(ErrorCode::InvalidArgument, "snapshot_stride must be positive");
  require_comoving_dirichlet(initial);

  EvolutionResult result;
  result.initial_norm = initial.norm();
  result.snapshots.push_back(initial);

  CrankNicolson propagator(config.grid, config.dt, config.params);
  FieldSnapshot current = initial;
  for (std::size_t step = 1; step <= config.n_steps; ++step) {
    propagator.step(current.values);
    current.time = initial.time + static_cast<double>(step) * config.dt;
    result.norm_drift = std::max(result.norm_drift, std::abs(current.norm() - result.initial_norm));
    if (step % config.snapshot_stride == 0 || step == config.n_steps) result.snapshots.push_back(current);
  }
  result.final_norm = current.norm();
  result.boundary_fraction = far_boundary_fraction(current);
  result.boundary_warning = result.boundary_fraction > kBoundaryWarningFraction;
  return result;
}

FieldSnapshot to_lab_frame(const FieldSnapshot& snapshot, double v, const PhysicalParams& params) {
  return galilean_lift(snapshot, v, params);
}

}  // namespace mwall
