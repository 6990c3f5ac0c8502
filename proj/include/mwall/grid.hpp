#ifndef MWALL_GRID_HPP
#define MWALL_GRID_HPP

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

namespace mwall {

using cplx = std::complex<double>;

/// Uniform 1-D grid with both endpoints as nodes: x_i = x_min + i*h,
/// h = (x_max - x_min)/(n - 1).
class Grid1D {
public:
  Grid1D(double x_min, double x_max, std::size_t n);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::size_t n() const { return n_; }
  double spacing() const { return h_; }
  double length() const { return x_max_ - x_min_; }

  double node(std::size_t i) const { return x_min_ + static_cast<double>(i) * h_; }
  std::vector<double> nodes() const;

  /// Index of the node closest to x, clamped to the grid.
  std::size_t nearest(double x) const;

  /// Same spacing and node count, origin moved by dx.
  Grid1D shifted(double dx) const;

  bool operator==(const Grid1D&) const = default;

private:
  double x_min_;
  double x_max_;
  std::size_t n_;
  double h_;
};

enum class Frame { Lab, Comoving };

std::string_view to_string(Frame frame);

/// Complex field sampled on a grid at one instant, tagged with the frame it
/// lives in.  For Comoving snapshots wall_velocity is the velocity of the
/// frame (and of the wall) relative to the lab.
struct FieldSnapshot {
  FieldSnapshot(double time, Frame frame, double wall_velocity, Grid1D grid,
                std::vector<cplx> values);

  double time;
  Frame frame;
  double wall_velocity;
  Grid1D grid;
  std::vector<cplx> values;

  /// h * sum |psi_i|^2
  double norm() const;
  std::vector<double> density() const;
};

}  // namespace mwall

#endif
