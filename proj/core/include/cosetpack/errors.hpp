//
// cosetpack - certified coset-packing workbench for finitely generated groups
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COSETPACK_ERRORS_HPP_
#define COSETPACK_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace cosetpack {

/// A malformed experiment configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An oracle declined to answer (precondition not met, unsupported kind,
/// insufficient radius). CLI exit code 3.
struct OracleRefusal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An element or size budget was exhausted before completion. Results are
/// all-or-nothing: nothing partial is returned. CLI exit code 4.
struct BudgetError : std::runtime_error {
  BudgetError(const std::string& msg, long long reached)
      : std::runtime_error(msg), layer_reached(reached) {}
  long long layer_reached;
};

}  // namespace cosetpack

#endif  // COSETPACK_ERRORS_HPP_
