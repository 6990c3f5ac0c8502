#include "mwall/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace mwall::io {

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string snapshot_filename(Frame frame, std::size_t index) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snap_%s_%06zu.csv", std::string(to_string(frame)).c_str(), index);
  return buf;
}

namespace {

void append_row(std::string& out, double x, cplx psi, double density, double current) {
  out += format_number(x);
  out += ',';
  out += format_number(psi.real());
  out += ',';
  out += format_number(psi.imag());
  out += ',';
  out += format_number(density);
  out += ',';
  out += format_number(current);
  out += '\n';
}

}  // namespace

std::string snapshot_csv(const FieldSnapshot& snapshot, const PhysicalParams& params) {
  const auto current = discrete_current(snapshot, params);
  std::string out(kSnapshotCsvHeader);
  out += '\n';
  for (std::size_t i = 0; i < snapshot.values.size(); ++i) {
    append_row(out, snapshot.grid.node(i), snapshot.values[i], std::norm(snapshot.values[i]), current[i]);
  }
  return out;
}

std::string analytic_csv(const Grid1D& grid, double t, const PlaneWaveScattering& scat) {
  std::string out(kSnapshotCsvHeader);
  out += '\n';
  for (std::size_t i = 0; i < grid.n(); ++i) {
    const double x = grid.node(i);
    append_row(out, x, total_wavefunction(x, t, scat), probability_density(x, t, scat),
               probability_current(x, t, scat));
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot move " + tmp.string() + " to " + path.string());
  }
}

nlohmann::ordered_json to_json(const DopplerReport& report) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["k0"] = report.k0;
  doc["hbar"] = report.params.hbar();
  doc["mass"] = report.params.mass();
  ordered_json rows = ordered_json::array();
  auto opt = [](const auto& value) { return value ? ordered_json(*value) : ordered_json(nullptr); };
  for (const auto& row : report.rows) {
    ordered_json r;
    r["v"] = row.v;
    r["k_predicted"] = row.k_predicted;
    r["k_measured"] = opt(row.k_measured);
    r["relative_error"] = opt(row.relative_error);
    r["regime"] = std::string(to_string(row.regime));
    r["skipped_reason"] = opt(row.skipped_reason);
    r["resolution"] = opt(row.resolution);
    r["passed"] = row.passed;
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc;
}

std::string report_csv(const DopplerReport& report) {
  std::string out = "v,k_predicted,k_measured,relative_error,regime,skipped_reason,resolution,passed\n";
  auto opt = [](const std::optional<double>& value) { return value ? format_number(*value) : std::string(); };
  for (const auto& row : report.rows) {
    out += format_number(row.v) + ',' + format_number(row.k_predicted) + ',' + opt(row.k_measured) + ',' +
           opt(row.relative_error) + ',' + std::string(to_string(row.regime)) + ',' +
           row.skipped_reason.value_or("") + ',' + opt(row.resolution) + ',' + (row.passed ? "true" : "false") +
           '\n';
  }
  return out;
}

std::string dump(const nlohmann::ordered_json& doc) { return doc.dump(2) + '\n'; }

}  // namespace mwall::io
