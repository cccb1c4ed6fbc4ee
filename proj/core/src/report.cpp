//
// cosetpack - certified coset-packing workbench for finitely generated groups
// SPDX-License-Identifier: Apache-2.0
//

#include "cosetpack/report.hpp"

#include <chrono>
#include <cstdint>

namespace cosetpack {

std::string configHash(const nlohmann::json& config) {
  const std::string canonical = config.dump();
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json reportEnvelope(const std::string& command, const nlohmann::json& config,
                              nlohmann::json payload, bool withTimestamp) {
  nlohmann::json out{{"command", command}, {"config_hash", configHash(config)}};
  if (withTimestamp) {
    out["timestamp_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
  }
  out["report"] = std::move(payload);
  return out;
}

}  // namespace cosetpack
