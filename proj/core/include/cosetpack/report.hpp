//
// cosetpack - certified coset-packing workbench for finitely generated groups
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COSETPACK_REPORT_HPP_
#define COSETPACK_REPORT_HPP_

#include <string>

#include "json.hpp"

namespace cosetpack {

/// FNV-1a 64-bit hash of the canonical (sorted-key) config serialization.
std::string configHash(const nlohmann::json& config);

/// Standard report envelope: command, config hash, optional timestamp.
/// With timestamps disabled, identical configs produce byte-identical
/// reports.
nlohmann::json reportEnvelope(const std::string& command, const nlohmann::json& config,
                              nlohmann::json payload, bool withTimestamp);

}  // namespace cosetpack

#endif  // COSETPACK_REPORT_HPP_
