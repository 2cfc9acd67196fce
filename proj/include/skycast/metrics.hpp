// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include "skycast/metrics/metrics.hpp"
#include "skycast/metrics/plot.hpp"
#include "skycast/metrics/report.hpp"
