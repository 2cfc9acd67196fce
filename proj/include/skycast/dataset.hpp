// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include "skycast/dataset/align.hpp"
#include "skycast/dataset/archive.hpp"
#include "skycast/dataset/augment.hpp"
#include "skycast/dataset/filter.hpp"
#include "skycast/dataset/image.hpp"
#include "skycast/dataset/preprocess.hpp"
#include "skycast/dataset/sample.hpp"
#include "skycast/dataset/sequences.hpp"
#include "skycast/dataset/split.hpp"
#include "skycast/dataset/stats.hpp"
#include "skycast/dataset/synth.hpp"
#include "skycast/dataset/time.hpp"
