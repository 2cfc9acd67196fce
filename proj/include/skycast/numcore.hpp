// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include "skycast/numcore/attention.hpp"
#include "skycast/numcore/checkpoint.hpp"
#include "skycast/numcore/errors.hpp"
#include "skycast/numcore/ops.hpp"
#include "skycast/numcore/optim.hpp"
#include "skycast/numcore/params.hpp"
#include "skycast/numcore/tensor.hpp"
