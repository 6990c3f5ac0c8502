#ifndef MWALL_SPECTRAL_HPP
#define MWALL_SPECTRAL_HPP

#include <span>
#include <utility>
#include <vector>

#include "mwall/grid.hpp"

namespace mwall {

/// Half-open index range [first, last) of the nodes inside [x_lo, x_hi].
std::pair<std::size_t, std::size_t> node_range(const Grid1D& grid, double x_lo, double x_hi);

/// Forward DFT, X_j = sum_n x_n exp(-2 pi i j n / N), of `input` zero-padded
/// to `size` points (size >= input.size()).  Safe to call concurrently.
std::vector<cplx> forward_dft(std::span<const cplx> input, std::size_t size);

/// Signed wavenumber of every bin of an N-point transform with sample
/// spacing h; bins above N/2 map to negative wavenumbers.
double bin_wavenumber(std::size_t bin, std::size_t size, double h);

/// Power-weighted mean wavenumber sum k|F(k)|^2 / sum |F(k)|^2 of the nodes
/// in [x_lo, x_hi].
double spectral_centroid(const FieldSnapshot& snapshot, double x_lo, double x_hi);
double spectral_centroid(const FieldSnapshot& snapshot);

/// Fraction of spectral power at strictly positive wavenumber.
double positive_wavenumber_fraction(const FieldSnapshot& snapshot);

}  // namespace mwall

#endif
