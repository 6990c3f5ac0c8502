#include "mwall/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

#include "mwall/error.hpp"

namespace mwall {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
struct PlanDestroy {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};

using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

}  // namespace

std::pair<std::size_t, std::size_t> node_range(const Grid1D& grid, double x_lo, double x_hi) {
  if (!(x_lo < x_hi)) throw Error(ErrorCode::InvalidArgument, "region requires x_lo < x_hi");
  const double h = grid.spacing();
  const double top = static_cast<double>(grid.n() - 1);
  // Nodes within 1e-9 cells of an edge count as inside.
  const double first = std::max(0.0, std::ceil((x_lo - grid.x_min()) / h - 1e-9));
  const double last = std::min(top, std::floor((x_hi - grid.x_min()) / h + 1e-9));
  if (last < first) return {0, 0};
  return {static_cast<std::size_t>(first), static_cast<std::size_t>(last) + 1};
}

std::vector<cplx> forward_dft(std::span<const cplx> input, std::size_t size) {
  if (size < input.size() || size == 0) {
    throw Error(ErrorCode::InvalidArgument, "transform size smaller than its input");
  }
  FftwBuffer buffer(fftw_alloc_complex(size));
  std::unique_ptr<fftw_plan_s, PlanDestroy> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_1d(static_cast<int>(size), buffer.get(), buffer.get(), FFTW_FORWARD,
                                FFTW_ESTIMATE));
  }
  for (std::size_t i = 0; i < size; ++i) {
    const cplx z = i < input.size() ? input[i] : cplx{};
    buffer[i][0] = z.real();
    buffer[i][1] = z.imag();
  }
  fftw_execute(plan.get());
  std::vector<cplx> out(size);
  for (std::size_t i = 0; i < size; ++i) out[i] = {buffer[i][0], buffer[i][1]};
  return out;
}

double bin_wavenumber(std::size_t bin, std::size_t size, double h) {
  const auto n = static_cast<double>(size);
  const double j = bin < (size + 1) / 2 ? static_cast<double>(bin) : static_cast<double>(bin) - n;
  return 2.0 * std::numbers::pi * j / (n * h);
}

double spectral_centroid(const FieldSnapshot& snapshot, double x_lo, double x_hi) {
  const auto [lo, hi] = node_range(snapshot.grid, x_lo, x_hi);
  if (hi - lo < 2) throw Error(ErrorCode::RegionTooSmall, "centroid region holds fewer than 2 nodes");
  const auto spectrum = forward_dft(std::span(snapshot.values).subspan(lo, hi - lo), hi - lo);
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    const double p = std::norm(spectrum[j]);
    weighted += p * bin_wavenumber(j, spectrum.size(), snapshot.grid.spacing());
    total += p;
  }
  if (total == 0.0) throw Error(ErrorCode::NoSignal, "field is identically zero");
  return weighted / total;
}

double spectral_centroid(const FieldSnapshot& snapshot) {
  return spectral_centroid(snapshot, snapshot.grid.x_min(), snapshot.grid.x_max());
}

double positive_wavenumber_fraction(const FieldSnapshot& snapshot) {
  const auto spectrum = forward_dft(snapshot.values, snapshot.values.size());
  double positive = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    const double p = std::norm(spectrum[j]);
    if (bin_wavenumber(j, spectrum.size(), snapshot.grid.spacing()) > 0.0) positive += p;
    total += p;
  }
  if (total == 0.0) throw Error(ErrorCode::NoSignal, "field is identically zero");
  return positive / total;
}

}  // namespace mwall
