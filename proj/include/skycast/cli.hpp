// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include "skycast/cli/pipeline.hpp"
#include "skycast/cli/run_config.hpp"
