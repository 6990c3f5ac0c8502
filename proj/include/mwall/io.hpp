#ifndef MWALL_IO_HPP
#define MWALL_IO_HPP

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "mwall/analytic.hpp"
#include "mwall/doppler.hpp"
#include "mwall/grid.hpp"
#include "mwall/solver.hpp"

namespace mwall::io {

inline constexpr std::string_view kSnapshotCsvHeader = "x,re,im,density,current";

/// %.17g: round-trip exact for doubles.
std::string format_number(double value);

/// `snap_{frame}_{index:06}.csv`
std::string snapshot_filename(Frame frame, std::size_t index);

/// CSV with header x,re,im,density,current; current from discrete_current.
std::string snapshot_csv(const FieldSnapshot& snapshot, const PhysicalParams& params);

/// CSV sampling the closed-form field, density and current on a grid.
std::string analytic_csv(const Grid1D& grid, double t, const PlaneWaveScattering& scat);

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never see a partial file.  Throws std::runtime_error on I/O failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

nlohmann::ordered_json to_json(const DopplerReport& report);
/// Same columns as the JSON rows; empty cells for absent values.
std::string report_csv(const DopplerReport& report);

/// JSON text with a trailing newline.
std::string dump(const nlohmann::ordered_json& doc);

}  // namespace mwall::io

#endif
