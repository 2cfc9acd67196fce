// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <stdexcept>
#include <string>

namespace skycast {

/// Tensor extents do not fit the operation.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A caller broke an operation's precondition.
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Invalid configuration value or combination.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Non-finite values appeared during a forward or backward pass.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A required artifact (checkpoint, manifest) is absent.
struct MissingPrerequisite : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input files could not be read or parsed.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace skycast
