// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include "skycast/backbone/block.hpp"
#include "skycast/backbone/config.hpp"
#include "skycast/backbone/vit.hpp"
