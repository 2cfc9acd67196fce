// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include "skycast/training/config.hpp"
#include "skycast/training/evaluate.hpp"
#include "skycast/training/forecaster.hpp"
#include "skycast/training/frames.hpp"
#include "skycast/training/losses.hpp"
#include "skycast/training/trainer.hpp"
#include "skycast/training/ablate.hpp"
