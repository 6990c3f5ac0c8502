#include "mwall/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mwall/error.hpp"

namespace mwall {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::FrameMismatch: return "FrameMismatch";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::NodeSingularity: return "NodeSingularity";
    case ErrorCode::ClearanceViolation: return "ClearanceViolation";
    case ErrorCode::NoCollision: return "NoCollision";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::RegionTooSmall: return "RegionTooSmall";
    case ErrorCode::NoSignal: return "NoSignal";
    case ErrorCode::ContaminatedRun: return "ContaminatedRun";
    case ErrorCode::IncompleteReflection: return "IncompleteReflection";
    case ErrorCode::AliasedShift: return "AliasedShift";
    case ErrorCode::FlatPattern: return "FlatPattern";
  }
  return "UnknownError";
}

Grid1D::Grid1D(double x_min, double x_max, std::size_t n)
    : x_min_(x_min), x_max_(x_max), n_(n), h_(0.0) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max)) {
    throw Error(ErrorCode::InvalidArgument, "grid requires finite x_min < x_max");
  }
  if (n < 3) {
    throw Error(ErrorCode::GridTooSmall, "grid needs at least 3 nodes, got " + std::to_string(n));
  }
  h_ = (x_max - x_min) / static_cast<double>(n - 1);
}

std::vector<double> Grid1D::nodes() const {
  std::vector<double> x(n_);
  for (std::size_t i = 0; i < n_; ++i) x[i] = node(i);
  return x;
}

std::size_t Grid1D::nearest(double x) const {
  const double pos = std::round((x - x_min_) / h_);
  if (pos <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(pos), n_ - 1);
}

Grid1D Grid1D::shifted(double dx) const {
  // Keep the node count and spacing; only the origin moves.
  Grid1D g = *this;
  g.x_min_ += dx;
  g.x_max_ += dx;
  return g;
}

std::string_view to_string(Frame frame) {
  return frame == Frame::Lab ? "lab" : "comoving";
}

FieldSnapshot::FieldSnapshot(double time_, Frame frame_, double wall_velocity_, Grid1D grid_,
                             std::vector<cplx> values_)
    : time(time_), frame(frame_), wall_velocity(wall_velocity_), grid(grid_),
      values(std::move(values_)) {
  if (values.size() != grid.n()) {
    throw Error(ErrorCode::InvalidArgument,
                "snapshot has " + std::to_string(values.size()) + " values for a grid of " +
                    std::to_string(grid.n()) + " nodes");
  }
}

double FieldSnapshot::norm() const {
  const double s = std::accumulate(values.begin(), values.end(), 0.0,
                                   [](double acc, const cplx& z) { return acc + std::norm(z); });
  return s * grid.spacing();
}

std::vector<double> FieldSnapshot::density() const {
  std::vector<double> rho(values.size());
  std::transform(values.begin(), values.end(), rho.begin(), [](const cplx& z) { return std::norm(z); });
  return rho;
}

}  // namespace mwall
