#ifndef MWALL_CONFIG_HPP
#define MWALL_CONFIG_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mwall/analytic.hpp"
#include "mwall/solver.hpp"

namespace mwall {

/// Everything a simulate/sweep run needs.  Serialized as nested JSON; every
/// leaf is addressable by a dotted key ("grid.n", "wavepacket.k0_lab", ...)
/// which is also the name of the command-line override flag.
struct RunConfig {
  PhysicalParams params;
  double domain_length = 120.0;
  std::size_t grid_n = 4096;
  WavepacketSpec packet;
  double wall_velocity = 0.0;
  double dt = 0.002;
  /// 0 = recommended_steps for the packet and wall velocity.
  std::size_t n_steps = 0;
  std::size_t snapshot_stride = 1000;
  std::string output_dir = "mwall_out";

  EvolutionConfig evolution() const;
  /// n_steps with 0 replaced by recommended_steps.
  RunConfig resolved() const;
};

/// Dotted names of every config leaf, in serialization order.
const std::vector<std::string>& config_keys();

/// Overlays the keys present in `doc` onto defaults.  Unknown keys and
/// ill-typed values throw Error(InvalidArgument).
RunConfig config_from_json(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);
nlohmann::ordered_json to_json(const RunConfig& config);

/// Sets one leaf from its textual command-line form.
void apply_override(RunConfig& config, std::string_view key, std::string_view value);

/// Range checks that do not need a solver run; throws Error(InvalidArgument).
void validate(const RunConfig& config);

}  // namespace mwall

#endif
