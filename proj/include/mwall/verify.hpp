#ifndef MWALL_VERIFY_HPP
#define MWALL_VERIFY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace mwall {

struct CheckResult {
  std::string name;
  std::string module;
  bool passed = false;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
};

struct VerifyLedger {
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  bool all_passed() const;
  std::optional<std::string> first_failure() const;
  nlohmann::ordered_json to_json() const;
};

inline constexpr std::uint64_t kDefaultVerifySeed = 20020101;

/// Runs the property suites of the analytic, solver and Doppler modules.
/// Randomized cases draw from a generator seeded with `seed`, so the ledger
/// is reproducible bit for bit.  `threads` caps the Doppler sweep workers.
VerifyLedger run_verification(std::uint64_t seed, std::size_t threads = 0);

}  // namespace mwall

#endif
