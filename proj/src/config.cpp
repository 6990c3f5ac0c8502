#include "mwall/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "mwall/error.hpp"

namespace mwall {

namespace {

using nlohmann::json;

double as_real(const json& value, std::string_view key) {
  if (!value.is_number()) throw Error(ErrorCode::InvalidArgument, std::string(key) + " must be a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, std::string(key) + " must be finite");
  return x;
}

std::size_t as_count(const json& value, std::string_view key) {
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    throw Error(ErrorCode::InvalidArgument, std::string(key) + " must be a non-negative integer");
  }
  return value.get<std::size_t>();
}

void set_leaf(RunConfig& c, std::string_view key, const json& value) {
  if (key == "physics.hbar") c.params = PhysicalParams(as_real(value, key), c.params.mass());
  else if (key == "physics.mass") c.params = PhysicalParams(c.params.hbar(), as_real(value, key));
  else if (key == "grid.length") c.domain_length = as_real(value, key);
  else if (key == "grid.n") c.grid_n = as_count(value, key);
  else if (key == "wavepacket.x0") c.packet.x0 = as_real(value, key);
  else if (key == "wavepacket.sigma") c.packet.sigma = as_real(value, key);
  else if (key == "wavepacket.k0_lab") c.packet.k0_lab = as_real(value, key);
  else if (key == "wall.velocity") c.wall_velocity = as_real(value, key);
  else if (key == "evolution.dt") c.dt = as_real(value, key);
  else if (key == "evolution.n_steps") c.n_steps = as_count(value, key);
  else if (key == "evolution.snapshot_stride") c.snapshot_stride = as_count(value, key);
  else if (key == "output.dir") {
    if (!value.is_string()) throw Error(ErrorCode::InvalidArgument, "output.dir must be a string");
    c.output_dir = value.get<std::string>();
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown config key '" + std::string(key) + "'");
  }
}

void overlay(RunConfig& c, const json& node, const std::string& prefix) {
  if (!node.is_object()) {
    set_leaf(c, prefix, node);
    return;
  }
  for (const auto& [name, child] : node.items()) {
    overlay(c, child, prefix.empty() ? name : prefix + "." + name);
  }
}

}  // namespace

EvolutionConfig RunConfig::evolution() const {
  return EvolutionConfig{comoving_grid(domain_length, grid_n), dt, n_steps, snapshot_stride, wall_velocity, params};
}

RunConfig RunConfig::resolved() const {
  RunConfig r = *this;
  if (r.n_steps == 0) r.n_steps = recommended_steps(packet, wall_velocity, dt, params);
  return r;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "physics.hbar",      "physics.mass",      "grid.length",               "grid.n",
      "wavepacket.x0",     "wavepacket.sigma",  "wavepacket.k0_lab",         "wall.velocity",
      "evolution.dt",      "evolution.n_steps", "evolution.snapshot_stride", "output.dir",
  };
  return keys;
}

RunConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");
  RunConfig c;
  overlay(c, doc, "");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read config file '" + path + "'");
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::InvalidArgument, "config file '" + path + "' is not valid JSON");
  return config_from_json(doc);
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json doc;
  doc["physics"]["hbar"] = c.params.hbar();
  doc["physics"]["mass"] = c.params.mass();
  doc["grid"]["length"] = c.domain_length;
  doc["grid"]["n"] = c.grid_n;
  doc["wavepacket"]["x0"] = c.packet.x0;
  doc["wavepacket"]["sigma"] = c.packet.sigma;
  doc["wavepacket"]["k0_lab"] = c.packet.k0_lab;
  doc["wall"]["velocity"] = c.wall_velocity;
  doc["evolution"]["dt"] = c.dt;
  doc["evolution"]["n_steps"] = c.n_steps;
  doc["evolution"]["snapshot_stride"] = c.snapshot_stride;
  doc["output"]["dir"] = c.output_dir;
  return doc;
}

void apply_override(RunConfig& config, std::string_view key, std::string_view value) {
  if (key == "output.dir") {
    set_leaf(config, key, json(std::string(value)));
    return;
  }
  if (key == "grid.n" || key == "evolution.n_steps" || key == "evolution.snapshot_stride") {
    unsigned long long count = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), count);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
      throw Error(ErrorCode::InvalidArgument, std::string(key) + " expects a non-negative integer, got '" +
                                                  std::string(value) + "'");
    }
    set_leaf(config, key, json(count));
    return;
  }
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::InvalidArgument, std::string(key) + " expects a number, got '" + std::string(value) + "'");
  }
  set_leaf(config, key, json(x));
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); };
  if (!(c.domain_length > 0.0)) fail("grid.length must be positive");
  if (c.grid_n < 3) fail("grid.n must be at least 3");
  if (!(c.dt > 0.0)) fail("evolution.dt must be positive");
  if (c.snapshot_stride == 0) fail("evolution.snapshot_stride must be positive");
  if (!(c.packet.sigma > 0.0)) fail("wavepacket.sigma must be positive");
  if (c.output_dir.empty()) fail("output.dir must not be empty");
}

}  // namespace mwall
