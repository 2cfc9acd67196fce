// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include "skycast/clearsky/persistence.hpp"
#include "skycast/clearsky/solar_position.hpp"
#include "skycast/clearsky/solis.hpp"
